#pragma once

// Space-time (time + two space axes) quantities: space-only vorticity, the
// velocity field, their discrete continuity residual, and the product
// estimate inequality evaluated on a polyhedral current.

#include "gl3d/current.hpp"

namespace gl3d {

struct UnsupportedGeometry : std::runtime_error {
    UnsupportedGeometry()
        : std::runtime_error("product estimate: weights must vanish near the boundary") {}
};

// Wraps a lattice field with axis 0 = time. The gauge field splits into the
// scalar potential Phi = A[0] and the spatial pair B = (A[1], A[2]).
struct SpaceTimeField {
    LatticeField3 f;

    int nt() const { return f.dims[0]; }
    int nx() const { return f.dims[1]; }
    int ny() const { return f.dims[2]; }
    double h() const { return f.h; }
};

// Scalar per-node field on the space-time lattice.
struct NodeScalarField {
    std::array<int, 3> dims;
    std::vector<double> v;
    size_t idx(int it, int ix, int iy) const {
        return size_t(it) + size_t(dims[0]) * (size_t(ix) + size_t(dims[1]) * size_t(iy));
    }
};
struct NodeVec2Field {
    std::array<int, 3> dims;
    std::vector<Vec2> v;
    size_t idx(int it, int ix, int iy) const {
        return size_t(it) + size_t(dims[0]) * (size_t(ix) + size_t(dims[1]) * size_t(iy));
    }
};

// curl <grad u, iu> + curl((1-|u|^2) B) per node, centered differences.
NodeScalarField space_vorticity(const SpaceTimeField& stf);

// 2 <i du/dt, grad^perp u> + d/dt[(1-|u|^2) B^perp] - grad^perp[(1-|u|^2) Phi].
NodeVec2Field velocity_field(const SpaceTimeField& stf);

struct ContinuityReport {
    NodeScalarField residual;  // d/dt J + div V
    double linf = 0.0;
    double l1 = 0.0;           // integrated |residual| h^3
    std::vector<double> slice_l1;
};
ContinuityReport continuity_residual(const SpaceTimeField& stf);

// integral of J over a time slice (flux through the slice)
double slice_vorticity_integral(const NodeScalarField& J, const SpaceTimeField& stf, int it);

struct ProductEstimateReport {
    double lhs = 0.0;
    double main_term = 0.0;        // (|log eps| - C log M_eps) |int f nu ^ (-X2 dx1 + X1 dx2)|
    double wedge_pairing = 0.0;    // int f nu ^ (-X2 dx1 + X1 dx2)
    double correction = 0.0;       // C int max(|nu ^ dx1|, |nu ^ dx2|)
    double slack = 0.0;            // lhs - (main - correction)
    double M_eps = 0.0;            // exp(sqrt(|log eps|))
    double lambda_balance = 0.0;   // the Lambda actually used
};

using SpaceTimeWeight = std::function<double(const Vec3&)>;   // (t, x1, x2)
using SpaceTimeVector = std::function<Vec2(const Vec3&)>;

// Evaluates both sides of the product estimate on the given current.
// C_logM defaults to 1; Lambda <= 0 picks the balancing value.
ProductEstimateReport product_estimate_check(const SpaceTimeField& stf, const SpaceTimeWeight& f,
                                             const SpaceTimeVector& X, double Lambda, double eps,
                                             const PolyhedralCurrent& nu, double C_logM = 1.0);

}  // namespace gl3d
