#pragma once

// Point displacement enforcing angle separation between all pair directions,
// and the exact 1-Lipschitz extension of matching potentials built from
// maxima of affine functions (plus the boundary-distance variant, which is
// constant on the domain boundary).

#include <functional>
#include <optional>

#include "gl3d/kernels.hpp"
#include "gl3d/matching.hpp"

namespace gl3d {

struct ThetaTooLarge : std::runtime_error {
    ThetaTooLarge() : std::runtime_error("displace: theta must be below 0.1") {}
};
struct DisplacementFailed : std::runtime_error {
    DisplacementFailed() : std::runtime_error("displace: no admissible position found") {}
};
struct VariantMismatch : std::runtime_error {
    VariantMismatch() : std::runtime_error("zeta: variant requires a boundary oracle") {}
};

struct DisplacementResult {
    SignedConfig displaced;
    double theta = 0.0;
    double max_displacement = 0.0;
    double realized_C = 0.0;  // max_l |a_l - b_l| / (D * (l+1)^5 * theta)
    bool theta_above_m6 = false;  // theta exceeded (2k)^-6; construction attempted anyway
};

// Moves the points (processing order: positives then negatives) so that all
// pairwise directions v_(p,q) and all provided extra directions satisfy
// |u x v| >= theta and |det(u,v,w)| >= theta^2, by seeded rejection sampling
// inside escalating balls around each original point.
DisplacementResult displace_points(const SignedConfig& cfg, double theta, uint64_t seed = 99,
                                   const std::vector<Vec3>& extra_dirs = {});

// Distance-to-boundary oracle (analytic domain or polyhedral substitute).
struct BoundaryOracle {
    std::function<double(const Vec3&)> dist;
    std::function<Vec3(const Vec3&)> grad;  // gradient of dist, a.e.
};

BoundaryOracle analytic_boundary_oracle(const Domain& dom);

enum class ZetaVariant { Euclid, Boundary };

struct ZetaExact {
    ZetaVariant variant = ZetaVariant::Euclid;
    int k = 0;
    std::vector<Vec3> points;       // displaced points, positives then negatives
    std::vector<double> zeta_star;  // potentials at all 2k points
    std::vector<Vec3> nu;           // directions nu_(i,j), i*2k+j
    kernels::AffineMaxTable table;  // euclid evaluation table
    BoundaryOracle boundary;        // boundary variant only
    std::vector<double> db_points;  // dist(p_i, boundary) per positive

    double eval(const Vec3& x) const;
    Vec3 grad(const Vec3& x) const;  // active direction; smallest index on ties
    void eval_batch(const double* xs, const double* ys, const double* zs, size_t n,
                    double* val, Vec3* grad_out) const;

    // Max over j of d_(i,j) at x for the active outer index; <= 0 marks the
    // locally constant plateau of index i.
    double active_plateau_margin(const Vec3& x) const;
};

ZetaExact build_zeta(const SignedConfig& displaced, const std::vector<double>& zeta_p,
                     const std::vector<double>& zeta_n, ZetaVariant variant,
                     const BoundaryOracle* oracle = nullptr);

// displace -> re-match on the displaced points -> extend. Returns everything
// the certificates need.
struct ZetaBuild {
    DisplacementResult displacement;
    Connection connection;  // on the displaced configuration
    ZetaExact zeta;
};
ZetaBuild build_zeta_pipeline(const SignedConfig& cfg, double theta, ZetaVariant variant,
                              const Domain* dom = nullptr, const BoundaryOracle* oracle = nullptr,
                              uint64_t seed = 99, const std::vector<Vec3>& extra_dirs = {});

}  // namespace gl3d
