#include <random>

#include "doctest.h"
#include "gl3d/certify.hpp"

using namespace gl3d;

TEST_CASE("degree integral: sorting identity matches the Riemann oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        int k = 1 + int(rng() % 6);
        std::vector<double> zp(k), zn(k);
        for (auto& v : zp) v = uni(rng);
        for (auto& v : zn) v = uni(rng);
        double exact = exact_degree_integral(zp, zn);

        // Riemann oracle at 10^4 samples
        double lo = 1e300, hi = -1e300;
        for (double v : zp) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        for (double v : zn) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        double riemann = 0;
        int N = 10000;
        double step = (hi - lo) / N;
        for (int s = 0; s < N; ++s) {
            double t = lo + (s + 0.5) * step;
            int d = 0;
            for (double v : zp) d += v > t;
            for (double v : zn) d -= v > t;
            riemann += d * step;
        }
        // midpoint Riemann of a step function carries one-step error per jump
        double tol = (hi - lo) * double(2 * k) / N;
        CHECK(std::abs(exact - riemann) <= tol);

        // sharp independent identity: the sorting walk equals the direct sum
        double sum = 0;
        for (int i = 0; i < k; ++i) sum += zp[i] - zn[i];
        CHECK(exact == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("dipole: one breakpoint pair integrates exactly") {
    double a = 0.73, b = -0.21;
    CHECK(exact_degree_integral({a}, {b}) == doctest::Approx(a - b).epsilon(1e-15));
}

namespace {

struct Fixture {
    SynthResult sr;
    GridSpec grid;
    VortexCurrentBuild build;
};

Fixture line_fixture(double eps, int n, int dcells, bool ball = false) {
    SynthParams p;
    p.kind = SynthKind::StraightLine;
    p.ball_domain = ball;
    Fixture fx{synth_field(p, {n, n, n}, 1.0 / (n - 1), eps), {}, {}};
    GridSearchParams gp;
    gp.delta = double(dcells) / (n - 1);
    gp.seed = 7;
    fx.grid = choose_grid(fx.sr.field, eps, gp);
    fx.build = build_vortex_current(fx.sr.field, fx.grid, eps);
    return fx;
}

}  // namespace

TEST_CASE("empty cube set certifies zero") {
    SynthParams p;
    Fixture fx{synth_field(p, {32, 32, 32}, 1.0 / 31, 0.03), {}, {}};
    GridSearchParams gp;
    gp.delta = 8.0 / 31;
    fx.grid = choose_grid(fx.sr.field, 0.03, gp);
    fx.build = build_vortex_current(fx.sr.field, fx.grid, 0.03);
    auto cert = coarea_certificate(fx.sr.field, fx.grid, fx.build, 0.03, {});
    CHECK(cert.bound == 0.0);
    CHECK(cert.cubes.empty());
}

TEST_CASE("line fixture: sound certificate with itemized budget") {
    auto fx = line_fixture(0.02, 64, 19);
    auto cert = coarea_certificate(fx.sr.field, fx.grid, fx.build, 0.02, {});
    CHECK(cert.bound > 0);
    CHECK(cert.bound <= cert.measured_energy);
    CHECK(cert.integral_d > 0.5);
    for (const auto& cc : cert.cubes) {
        CHECK(cc.good_integral >= 0);
        CHECK(cc.good_integral <= cc.integral_d + 1e-12);
        CHECK(cc.bad_measure >= 0);
    }
    // monotone in the current mass: the bound tracks pi * logfactor * integral
    CHECK(cert.bound <= M_PI * cert.log_factor * cert.integral_d + 1e-9);
}

TEST_CASE("kappa infeasible raises") {
    auto fx = line_fixture(0.02, 48, 12);
    CertificateParams prm;
    prm.lambda = 0.01;
    prm.kappa = 1.0;
    CHECK_THROWS_AS(coarea_certificate(fx.sr.field, fx.grid, fx.build, 0.02, prm),
                    ParamsInfeasible);
}

TEST_CASE("boundary certificate needs a ball domain") {
    auto fx = line_fixture(0.02, 48, 12);
    CHECK_THROWS_AS(boundary_certificate(fx.sr.field, fx.grid, fx.build, 0.02, {}),
                    DomainNotSupported);
}

TEST_CASE("ball domain: filament exits and the boundary region certifies") {
    auto fx = line_fixture(0.02, 64, 12, true);
    REQUIRE(fx.build.theta_nonempty);
    auto cert = boundary_certificate(fx.sr.field, fx.grid, fx.build, 0.02, {});
    CHECK(cert.nu_mass > 0);
    CHECK(cert.bound <= cert.measured_energy);
    // the augmented potentials certify the connection length
    const auto& th = fx.build.theta;
    double sum = 0;
    for (size_t i = 0; i < th.aug.positives.size(); ++i)
        sum += th.zeta_p[i] - th.zeta_n[th.sigma_star[i]];
    CHECK(sum == doctest::Approx(th.aug_length).epsilon(1e-9));
}

TEST_CASE("co-area diagnostic: sliced energies stay below the cube energy") {
    auto fx = line_fixture(0.02, 64, 19);
    REQUIRE(!fx.build.cubes.empty());
    // pick the cube with the largest configuration
    const CubeAssembly* best = &fx.build.cubes[0];
    for (const auto& ca : fx.build.cubes)
        if (ca.cfg.k() > best->cfg.k()) best = &ca;
    auto zb = build_zeta_pipeline(best->cfg, 1e-4, ZetaVariant::Euclid);
    double lambda = fx.grid.delta / 32.0;
    auto mz = mollify(zb.zeta, lambda, 6.0 / 21.0);
    std::vector<double> density = energy_density(fx.sr.field, 0.02);

    // level span across the cube
    Vec3 lo = fx.grid.grid_to_world(Vec3{double(best->cube[0]), double(best->cube[1]),
                                         double(best->cube[2])});
    Vec3 hi = fx.grid.grid_to_world(Vec3{double(best->cube[0] + 1), double(best->cube[1] + 1),
                                         double(best->cube[2] + 1)});
    double tmin = 1e300, tmax = -1e300;
    for (int c = 0; c < 8; ++c) {
        Vec3 corner{(c & 1) ? hi.x : lo.x, (c & 2) ? hi.y : lo.y, (c & 4) ? hi.z : lo.z};
        double v = mz.eval(corner);
        tmin = std::min(tmin, v);
        tmax = std::max(tmax, v);
    }
    int N = 40;
    double step = (tmax - tmin) / N;
    double coarea = 0;
    for (int s = 0; s < N; ++s)
        coarea += step * level_surface_energy(fx.sr.field, density, mz, fx.grid, best->cube,
                                              tmin + (s + 0.5) * step);
    auto pred = [&](int ix, int iy, int iz) {
        Vec3 g = fx.grid.world_to_grid(fx.sr.field.node_pos(ix, iy, iz));
        return int(std::floor(g.x)) == best->cube[0] && int(std::floor(g.y)) == best->cube[1] &&
               int(std::floor(g.z)) == best->cube[2];
    };
    double cubeF = energy(fx.sr.field, 0.02, pred).F_eps;
    CHECK(coarea <= cubeF * 1.05);
    CHECK(coarea > 0);
}

TEST_CASE("certificate bound decreases when the bad budget grows") {
    auto fx = line_fixture(0.02, 64, 19);
    CertificateParams base;
    auto c1 = coarea_certificate(fx.sr.field, fx.grid, fx.build, 0.02, base);
    CertificateParams wide = base;
    wide.lambda = fx.grid.delta / 8.0;  // coarser smoothing -> larger exclusions
    auto c2 = coarea_certificate(fx.sr.field, fx.grid, fx.build, 0.02, wide);
    CHECK(c2.bad_level_budget >= c1.bad_level_budget);
}
