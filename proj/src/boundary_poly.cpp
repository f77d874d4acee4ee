#include "gl3d/boundary_poly.hpp"

#include <cmath>
#include <random>

namespace gl3d {

double BoundaryPolyhedron::min_geodesic_separation() const {
    double R = source.radius;
    double best = 1e300;
    for (size_t i = 0; i < sites.size(); ++i)
        for (size_t j = i + 1; j < sites.size(); ++j) {
            double c = std::clamp(normals[i].dot(normals[j]), -1.0, 1.0);
            best = std::min(best, R * std::acos(c));
        }
    return best;
}

double BoundaryPolyhedron::covering_radius(int probe_count, uint64_t seed) const {
    double R = source.radius;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    double worst = 0;
    for (int t = 0; t < probe_count; ++t) {
        Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
        d = d.normalized();
        double best = 1e300;
        for (const Vec3& n : normals) {
            double c = std::clamp(d.dot(n), -1.0, 1.0);
            best = std::min(best, R * std::acos(c));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

BoundaryPolyhedron approximate_boundary(const Domain& dom, double tau, uint64_t seed,
                                        double theta) {
    if (dom.kind != DomainKind::Ball) throw NonConvexDomain();
    BoundaryPolyhedron poly;
    poly.source = dom;
    poly.tau = tau;
    if (theta < 0) theta = std::min(1e-4, 0.01 * std::pow(tau, 5.0));
    double R = dom.radius;

    // Fibonacci lattice; N calibrated so the geodesic separation stays above
    // 1.5 tau and the covering radius below 2.5 tau.
    int N = std::max(6, int(std::lround(3.5 * (R / tau) * (R / tau))));
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    std::vector<Vec3> dirs(N);
    for (int i = 0; i < N; ++i) {
        double z = 1.0 - 2.0 * (i + 0.5) / N;
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = ga * i;
        dirs[i] = Vec3{r * std::cos(phi), r * std::sin(phi), z};
    }

    // jiggle until the angle-separation constraints hold
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    auto ok_against = [&](const std::vector<Vec3>& acc, const Vec3& cand) {
        for (size_t a = 0; a < acc.size(); ++a) {
            if (acc[a].cross(cand).norm() < theta) return false;
            for (size_t b = a + 1; b < acc.size(); ++b)
                if (std::abs(det3(acc[a], acc[b], cand)) < theta * theta) return false;
        }
        return true;
    };
    std::vector<Vec3> accepted;
    accepted.reserve(N);
    for (int i = 0; i < N; ++i) {
        Vec3 cand = dirs[i];
        int tries = 0;
        while (!ok_against(accepted, cand)) {
            Vec3 jig{gauss(rng), gauss(rng), gauss(rng)};
            cand = (dirs[i] + jig * (2.0 * theta * R)).normalized();
            if (++tries > 200)
                throw std::runtime_error("boundary polyhedron: separation jiggle failed");
        }
        accepted.push_back(cand);
    }
    for (const Vec3& d : accepted) {
        poly.sites.push_back(dom.center + d * R);
        poly.normals.push_back(d);
    }
    return poly;
}

}  // namespace gl3d
