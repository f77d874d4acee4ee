#pragma once

// 2D slices: sampling the 3D field onto a planar face, connected components
// of {|u| <= 1/2}, their degrees and diameters, and the quantitative distance
// between the face vorticity and its Dirac approximation.

#include <cstdint>
#include <vector>

#include "gl3d/field.hpp"
#include "gl3d/grid.hpp"

namespace gl3d {

struct BoundaryTouch : std::runtime_error {
    BoundaryTouch() : std::runtime_error("face: low-modulus component touches the face boundary") {}
};
struct ZeroOnContour : std::runtime_error {
    ZeroOnContour() : std::runtime_error("face: |u| = 0 on a winding contour") {}
};

struct FaceField {
    int n = 16;            // samples per side = n+1
    double spacing = 0.0;  // world distance between adjacent samples
    Vec3 origin3;          // world position of sample (0,0)
    Vec3 e_s, e_t;         // orthonormal in-plane directions; normal = e_s x e_t
    std::vector<cplx> u;   // (n+1)^2 samples, s-fastest
    std::vector<Vec2> A;   // in-plane gauge samples (empty when absent)
    int orientation = +1;  // sign relating this face's normal to its global id
    GridFace id;           // meaningful when extracted from a grid

    size_t idx(int i, int j) const { return size_t(i) + size_t(n + 1) * size_t(j); }
    Vec3 pos(int i, int j) const {
        return origin3 + e_s * (spacing * i) + e_t * (spacing * j);
    }
    Vec3 normal() const { return e_s.cross(e_t); }
    double side() const { return spacing * n; }
    bool has_A() const { return !A.empty(); }
};

// Samples the lattice field onto a grid face (bilinear in the face plane via
// trilinear lattice interpolation). Sampling pitch <= lattice h.
// eps > 0 refines the pitch for under-resolved cores (eps < lattice h).
FaceField extract_face(const LatticeField3& f, const GridSpec& g, const GridFace& face,
                       double eps = -1.0, int oversample = 1);

// Builds a standalone face from callables (tests, ball construction, slices).
FaceField make_face(const Vec3& origin3, const Vec3& e_s, const Vec3& e_t, double side, int n,
                    const std::function<cplx(const Vec3&)>& sample_u,
                    const std::function<Vec2(const Vec3&)>* sample_A = nullptr);

struct FaceVortex {
    Vec3 centroid;
    int degree = 0;
    double diameter = 0.0;
    double radius = 0.0;  // max sample distance from the centroid
    int sample_count = 0;
    double grad_energy = 0.0;  // int over the component of |grad_A u|^2
};

struct FaceVortexSet {
    std::vector<FaceVortex> components;  // nonzero degree only
    double r_omega = 0.0;                // sum of diameters
    int I_omega = 0;                     // component count with nonzero degree
    int zero_degree_components = 0;
    double face_total_winding = 0.0;     // winding along the outer face contour

    int total_degree() const {
        int s = 0;
        for (const auto& c : components) s += c.degree;
        return s;
    }
};

FaceVortexSet detect_components(const FaceField& face);

// Per-cell winding fluxes (2 pi x integer) and finite-difference fluxes of
// the in-plane current j(u,A)+A on the face sample grid.
struct FaceFluxes {
    int n = 0;
    std::vector<double> winding;  // n*n cells
    std::vector<double> fd;
    size_t idx(int i, int j) const { return size_t(i) + size_t(n) * size_t(j); }
};
FaceFluxes face_fluxes(const FaceField& face);

// Energy integrals of the face with the 2D density
//   |grad_A u|^2 + 1/(2 eps^2)(1-|u|^2)^2 + |curl A|^2
// over the face (2D) and its boundary ring (1D).
struct FaceEnergy {
    double interior = 0.0;
    double boundary = 0.0;
};
FaceEnergy face_energy_2d(const FaceField& face, double eps);

// 1/2 |grad u|^2 + 1/(4 eps^2)(1-|u|^2)^2 over the face samples; the
// magnetic-free energy a slice lower bound must not exceed.
double face_energy_free(const FaceField& face, double eps);

struct Estimate2D {
    double lhs_norm_estimate = 0.0;
    double rhs_bound = 0.0;
    double ratio = 0.0;
    int test_functions = 0;
};

// Distance between the face vorticity and 2 pi sum d_i delta_{a_i}, estimated
// against a seeded family of unit-Lipschitz test functions.
Estimate2D verify_2d_estimate(const FaceField& face, const FaceVortexSet& vs, double eps,
                              uint64_t seed = 2024, int family_size = 200);

}  // namespace gl3d
