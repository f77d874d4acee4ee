#pragma once

// Minimal connections between balanced collections of positive and negative
// points: min-cost perfect matching, dual potentials extended to 1-Lipschitz
// functions on the point set, and the legs realizing each pair.

#include <functional>
#include <vector>

#include "gl3d/domain.hpp"
#include "gl3d/geom.hpp"

namespace gl3d {

struct Unbalanced : std::runtime_error {
    Unbalanced() : std::runtime_error("connection: |positives| != |negatives|") {}
};
struct PointOutsideDomain : std::runtime_error {
    PointOutsideDomain() : std::runtime_error("connection: point outside the domain") {}
};

struct SignedConfig {
    std::vector<Vec3> positives;
    std::vector<Vec3> negatives;

    size_t k() const { return positives.size(); }
    bool balanced() const { return positives.size() == negatives.size(); }
    // positives first, then negatives
    std::vector<Vec3> all_points() const {
        std::vector<Vec3> pts = positives;
        pts.insert(pts.end(), negatives.begin(), negatives.end());
        return pts;
    }
    double diameter() const;
};

enum class MetricTag { Euclid, DBoundary, DHatBoundary };

struct ConnectionLeg {
    Vec3 a, b;  // oriented a -> b
};

struct Connection {
    MetricTag metric = MetricTag::Euclid;
    std::vector<int> sigma;        // positive i pairs with negative sigma[i]
    double length = 0.0;
    // One entry per positive index; legs realize the pair geometrically,
    // oriented from the negative point toward the positive point so the
    // induced current has boundary (+1 at p, -1 at n).
    std::vector<std::vector<ConnectionLeg>> legs;
    std::vector<double> zeta_p;    // potentials at positives
    std::vector<double> zeta_n;    // potentials at negatives
    std::vector<char> via_boundary;  // 1 if the pair exits through the boundary

    double potential_sum() const {
        double s = 0;
        for (size_t i = 0; i < zeta_p.size(); ++i) s += zeta_p[i] - zeta_n[sigma[i]];
        return s;
    }
};

// Exact min-cost perfect matching on a dense k x k cost matrix (Hungarian
// with potentials). Returns sigma (row -> column).
std::vector<int> min_cost_matching(const std::vector<std::vector<double>>& cost);

// 1-Lipschitz potentials on the points {positives ++ negatives} for the given
// pairwise distance matrix (size 2k x 2k), tight on every matched pair.
// Values are produced by relaxing matching duals to their Lipschitz fixpoint.
std::vector<double> matching_potentials(const std::vector<std::vector<double>>& dist2k,
                                        const std::vector<int>& sigma);

Connection connect_euclidean(const SignedConfig& cfg);
Connection connect_through_boundary(const SignedConfig& cfg, const Domain& dom);

// Generic: matching + potentials under an arbitrary pairwise metric given as
// a matrix over positives++negatives. Legs are left empty.
Connection connect_with_matrix(const SignedConfig& cfg, MetricTag tag,
                               const std::vector<std::vector<double>>& dist2k);

// Exhaustive oracle over all permutations; k <= 10.
double brute_force_length(const SignedConfig& cfg,
                          const std::function<double(const Vec3&, const Vec3&)>& d,
                          std::vector<int>* best = nullptr);

}  // namespace gl3d
