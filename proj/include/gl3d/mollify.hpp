#pragma once

// Mollified potential extension: convolution with a compactly supported bump
// on B(0,lambda) by spherical product quadrature. The quadrature weights are
// normalized to sum to one, so the sup-distance and gradient bounds hold as
// convex-combination identities independent of quadrature error.

#include <array>

#include "gl3d/zeta.hpp"

namespace gl3d {

struct KappaTooLarge : std::runtime_error {
    KappaTooLarge() : std::runtime_error("probe: kappa must be below lambda^(2 rho)/3") {}
};

struct MollifiedZeta {
    ZetaExact base;
    double lambda = 0.0;
    double rho = 0.3;
    std::vector<Vec3> offsets;       // quadrature offsets within B(0, lambda)
    std::vector<double> weights;     // normalized; sum exactly 1
    std::vector<Vec3> gradphi_w;     // raw weights times grad(phi) at the node / (N * lambda)
    bool lambda_warning = false;     // lambda above (C0 (2k)^-6)^(1/rho)

    struct Eval {
        double val = 0.0;
        Vec3 grad;
        std::array<double, 9> hess{};  // row-major d/dx_a of grad-component b
        double hess_norm() const;      // spectral norm
    };

    double eval(const Vec3& x) const;
    Vec3 grad(const Vec3& x) const;
    Eval eval_full(const Vec3& x) const;
};

MollifiedZeta mollify(const ZetaExact& z, double lambda, double rho, int quad_points = 7);

struct ProbeParams {
    double margin_factor = 0.35;  // probe box inflation relative to the point diameter
    int grid_per_axis = 24;       // probe lattice resolution
    double cover_C = 1.0;         // cover radius constant
    double plateau_width = -1.0;  // defaults to 2*lambda
};

struct Interval {
    double lo = 0.0, hi = 0.0;
};

struct CriticalSetReport {
    std::vector<Vec3> bad_points;  // |grad| < kappa outside the excluded sets
    std::vector<Vec3> cover_centers;
    double cover_radius = 0.0;
    size_t budget = 0;  // (2k)^8
    std::vector<Interval> excluded_levels;      // T_kappa plus plane/plateau levels, merged
    double plane_level_measure = 0.0;           // accounting for the plane+plateau intervals
    double plane_level_budget = 0.0;            // 2 lambda k^2
};

CriticalSetReport critical_set_probe(const MollifiedZeta& mz, double kappa,
                                     const ProbeParams& params = {});

// Union length of merged intervals.
double intervals_measure(std::vector<Interval> iv);
std::vector<Interval> merge_intervals(std::vector<Interval> iv);

}  // namespace gl3d
