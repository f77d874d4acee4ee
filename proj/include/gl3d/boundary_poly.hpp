#pragma once

// Polyhedral outer approximation of a convex smooth boundary by tangent
// halfspaces at a separated covering point set, with the halfspace distance
// oracle used by the boundary potential smoothing.

#include "gl3d/zeta.hpp"

namespace gl3d {

struct NonConvexDomain : std::runtime_error {
    NonConvexDomain() : std::runtime_error("boundary polyhedron: domain must be a ball") {}
};

struct BoundaryPolyhedron {
    std::vector<Vec3> sites;    // points on the source boundary
    std::vector<Vec3> normals;  // outward unit normals at the sites
    double tau = 0.1;
    Domain source;

    bool contains(const Vec3& x) const {
        for (size_t l = 0; l < sites.size(); ++l)
            if ((x - sites[l]).dot(normals[l]) >= 0) return false;
        return true;
    }
    // min_l <y_l - x, n_l>; the distance to the polyhedron boundary for
    // interior points.
    double distance(const Vec3& x) const {
        double best = 1e300;
        for (size_t l = 0; l < sites.size(); ++l)
            best = std::min(best, (sites[l] - x).dot(normals[l]));
        return best;
    }
    Vec3 distance_grad(const Vec3& x) const {
        double best = 1e300;
        size_t bi = 0;
        for (size_t l = 0; l < sites.size(); ++l) {
            double v = (sites[l] - x).dot(normals[l]);
            if (v < best) {
                best = v;
                bi = l;
            }
        }
        return -normals[bi];
    }
    BoundaryOracle oracle() const {
        const BoundaryPolyhedron* self = this;
        BoundaryOracle o;
        o.dist = [self](const Vec3& x) { return self->distance(x); };
        o.grad = [self](const Vec3& x) { return self->distance_grad(x); };
        return o;
    }

    // diagnostics of the seeding conditions (geodesic, on the source sphere)
    double min_geodesic_separation() const;
    double covering_radius(int probe_count = 2000, uint64_t seed = 5) const;
};

// Seeds a separated covering point set on the sphere (Fibonacci lattice),
// jiggles points until all pairwise normal cross products exceed theta and
// determinant triples exceed theta^2, and returns the tangent-halfspace
// intersection. theta < 0 picks min(1e-4, 0.01 tau^5).
BoundaryPolyhedron approximate_boundary(const Domain& dom, double tau, uint64_t seed = 31,
                                        double theta = -1.0);

}  // namespace gl3d
