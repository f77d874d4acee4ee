#pragma once

// Energy lower-bound certificates assembled from the slicing machinery: the
// exact degree-function integral from sorted mollified-potential values, the
// excluded-level budget (critical set, component levels, screened slices,
// plane/plateau levels), and the per-slice growth factor.

#include "gl3d/boundary_poly.hpp"
#include "gl3d/current.hpp"
#include "gl3d/mollify.hpp"

namespace gl3d {

struct ParamsInfeasible : std::runtime_error {
    ParamsInfeasible() : std::runtime_error("certificate: kappa must be below lambda^(2 rho)/3") {}
};
struct DomainNotSupported : std::runtime_error {
    DomainNotSupported()
        : std::runtime_error("certificate: boundary path needs a ball domain") {}
};

struct CertificateParams {
    double lambda = -1.0;        // default delta/32
    double rho = 6.0 / 21.0;
    double kappa = -1.0;         // default lambda^(2 rho)/6
    double gamma_slice = 1.0;    // slice-energy screening fraction
    double C1 = 5.8e-7;          // frozen desk-scale correction constant
    double theta_displace = 1e-4;
    uint64_t seed = 99;
    int screening_levels = 24;
    double tau_boundary = -1.0;  // polyhedral boundary pitch; default delta
};

struct CubeCertificate {
    std::array<int, 3> cube;
    int k = 0;
    double integral_d = 0.0;   // exact sorted integral of the degree function
    double bad_measure = 0.0;  // |T_bad| within the breakpoint span
    double t_kappa = 0.0, u_lambda = 0.0, v_gamma = 0.0, zeta_planes = 0.0;
    double good_integral = 0.0;  // max(0, integral_d - k * bad_measure)
};

struct Certificate {
    std::string region_tag;
    double bound = 0.0;
    double measured_energy = 0.0;  // magnetic-free energy of the region
    double nu_mass = 0.0;
    double log_factor = 0.0;   // log(1/eps) - correction
    double correction = 0.0;   // log(C1 M_eps / (lambda^2 kappa gamma))
    double M_eps = 0.0;
    double lambda = 0.0, kappa = 0.0, rho = 0.0, gamma_slice = 0.0;
    double integral_d = 0.0;
    double bad_level_budget = 0.0;  // sum over cubes of k_l |T_bad,l|
    double error_budget = 0.0;      // pi * log_factor * bad budget (the subtracted term)
    double boundary_levels = 0.0;   // boundary variant only
    std::vector<CubeCertificate> cubes;
};

// Exact integral of d(t) = #{zp > t} - #{zn > t} by breakpoint sorting.
double exact_degree_integral(std::vector<double> zp, std::vector<double> zn);

// Energy of the level surface {zeta_lambda = t} inside a grid cube, by
// cell-local linearization and plane-box polygon quadrature.
double level_surface_energy(const LatticeField3& field, const std::vector<double>& density,
                            const MollifiedZeta& mz, const GridSpec& grid,
                            const std::array<int, 3>& cube, double t);

Certificate coarea_certificate(const LatticeField3& field, const GridSpec& grid,
                               const VortexCurrentBuild& build, double eps,
                               const CertificateParams& params = {});

Certificate boundary_certificate(const LatticeField3& field, const GridSpec& grid,
                                 const VortexCurrentBuild& build, double eps,
                                 const CertificateParams& params = {});

}  // namespace gl3d
