#pragma once

// Energy densities and the two discrete vorticity estimators.

#include <functional>
#include <optional>

#include "gl3d/field.hpp"

namespace gl3d {

struct EmptyRegion : FieldError {
    EmptyRegion() : FieldError("energy: empty region") {}
};
struct ZeroModulus : FieldError {
    ZeroModulus() : FieldError("vorticity: |u| = 0 on a plaquette node") {}
};

using NodePredicate = std::function<bool(int, int, int)>;

inline NodePredicate all_nodes() {
    return [](int, int, int) { return true; };
}

struct EnergyReport {
    double F_eps = 0.0;         // with gauge field
    double E_eps = 0.0;         // gauge field ignored
    std::optional<double> GL_eps_excess;  // 1/2 int |curl A - H_ex|^2
    double region_volume = 0.0;
};

// Midpoint-rule quadrature of
//   1/2 |grad_A u|^2 + 1/(4 eps^2) (1-|u|^2)^2 + 1/2 |curl A|^2
// over the selected nodes. Cells partially inside are weighted by the
// fraction of corners inside. Differences are centered, one-sided where a
// neighbor is out of lattice or masked out.
EnergyReport energy(const LatticeField3& f, double eps, const NodePredicate& region,
                    std::optional<Vec3> H_ex = std::nullopt);

// Per-node energy density (the F_eps integrand). Exposed for skeleton/face
// integrals which interpolate it.
std::vector<double> energy_density(const LatticeField3& f, double eps);

// Plaquette-integrated 2-form samples. Plane normal axis c has in-plane axes
// (a,b) in cyclic order ((x,y) for z, (y,z) for x, (z,x) for y), so positive
// flux points along +c. Plaquette (i,j,k) is anchored at node (i,j,k).
struct PlaquetteField {
    std::array<int, 3> dims;  // node dims
    // winding[c] and fd[c] hold fluxes for normal axis c, sized
    // (dims[a]-1)*(dims[b]-1)*dims[c], a/b cyclic in-plane axes.
    std::array<std::vector<double>, 3> winding;
    std::array<std::vector<double>, 3> fd;

    size_t plaq_index(int c, int i, int j, int k) const;  // i along a, j along b, k along c
    std::array<int, 3> plaq_counts(int c) const;
};

PlaquetteField discrete_vorticity(const LatticeField3& f);

// Mass of the winding 2-form as a vector measure: per lattice cell the three
// face-averaged fluxes form a vector, summed as h * |v|. Approximates
// 2*pi*(total filament length) for quantized fields.
double vorticity_mass(const PlaquetteField& p, double h);

// Divergence of the winding fluxes over one lattice cell (six faces, outward);
// zero when |u| > 0 on all involved nodes.
double cell_flux_divergence(const PlaquetteField& p, int i, int j, int k);

}  // namespace gl3d
