#include <random>

#include "doctest.h"
#include "gl3d/zeta.hpp"

using namespace gl3d;

namespace {

SignedConfig random_config(int k, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.1, 0.9);
    SignedConfig cfg;
    for (int i = 0; i < k; ++i) cfg.positives.push_back({uni(rng), uni(rng), uni(rng)});
    for (int i = 0; i < k; ++i) cfg.negatives.push_back({uni(rng), uni(rng), uni(rng)});
    return cfg;
}

// Determinant constraints apply to direction triples spanning >= 4 distinct
// points; triples drawn from 3 points are coplanar identically.
void check_direction_constraints(const SignedConfig& d, double theta) {
    auto pts = d.all_points();
    struct Dir {
        Vec3 v;
        int p, q;
    };
    std::vector<Dir> dirs;
    for (size_t p = 0; p < pts.size(); ++p)
        for (size_t q = p + 1; q < pts.size(); ++q) {
            CHECK(dist(pts[p], pts[q]) > 0);
            dirs.push_back({(pts[p] - pts[q]).normalized(), int(p), int(q)});
        }
    auto span4 = [](const Dir& a, const Dir& b, const Dir& c) {
        std::vector<int> s{a.p, a.q, b.p, b.q, c.p, c.q};
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        return s.size() >= 4;
    };
    for (size_t a = 0; a < dirs.size(); ++a)
        for (size_t b = a + 1; b < dirs.size(); ++b) {
            CHECK(dirs[a].v.cross(dirs[b].v).norm() >= theta);
            for (size_t c = b + 1; c < dirs.size(); ++c)
                if (span4(dirs[a], dirs[b], dirs[c]))
                    CHECK(std::abs(det3(dirs[a].v, dirs[b].v, dirs[c].v)) >= theta * theta);
        }
}

}  // namespace

TEST_CASE("two distinct points stay fixed") {
    SignedConfig cfg;
    cfg.positives = {{0, 0, 0}};
    cfg.negatives = {{1, 0, 0}};
    auto r = displace_points(cfg, 1e-3);
    CHECK(r.max_displacement == 0.0);
    CHECK(dist(r.displaced.positives[0], cfg.positives[0]) == 0.0);
}

TEST_CASE("collinear points get separated directions") {
    SignedConfig cfg;
    cfg.positives = {{0.1, 0.5, 0.5}, {0.5, 0.5, 0.5}};
    cfg.negatives = {{0.9, 0.5, 0.5}, {0.3, 0.5, 0.5}};
    double theta = 1e-4;
    auto r = displace_points(cfg, theta, 5);
    check_direction_constraints(r.displaced, theta);
}

TEST_CASE("repeated points become distinct and stay within budget") {
    SignedConfig cfg;
    cfg.positives = {{0.2, 0.2, 0.2}, {0.2, 0.2, 0.2}, {0.7, 0.3, 0.4}};
    cfg.negatives = {{0.6, 0.6, 0.6}, {0.4, 0.8, 0.2}, {0.3, 0.3, 0.9}};
    double theta = 1e-4;
    auto r = displace_points(cfg, theta, 17);
    check_direction_constraints(r.displaced, theta);
    double D = cfg.diameter();
    // displacement budget C * D * l^5 * theta with moderate realized C
    CHECK(r.max_displacement <= 24.0 * D * std::pow(6.0, 5) * theta);
    CHECK(r.realized_C <= 24.0);
}

TEST_CASE("theta at the cap raises") {
    SignedConfig cfg = random_config(2, 3);
    CHECK_THROWS_AS(displace_points(cfg, 0.2), ThetaTooLarge);
}

TEST_CASE("displacement grid: criteria for k in 2..4, theta in {1e-3,1e-4}") {
    for (int k : {2, 3, 4})
        for (double theta : {1e-3, 1e-4}) {
            auto cfg = random_config(k, 100 + k);
            auto r = displace_points(cfg, theta, 100 + k);
            check_direction_constraints(r.displaced, theta);
        }
}

TEST_CASE("zeta extends the potentials exactly and is 1-Lipschitz") {
    for (int k : {1, 2, 3}) {
        auto cfg = random_config(k, 40 + k);
        auto zb = build_zeta_pipeline(cfg, 1e-4, ZetaVariant::Euclid);
        const ZetaExact& z = zb.zeta;
        auto pts = zb.displacement.displaced.all_points();
        for (int a = 0; a < 2 * k; ++a)
            CHECK(z.eval(pts[a]) == doctest::Approx(z.zeta_star[a]).epsilon(1e-12));

        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> uni(-0.5, 1.5);
        for (int t = 0; t < 2000; ++t) {
            Vec3 x{uni(rng), uni(rng), uni(rng)}, y{uni(rng), uni(rng), uni(rng)};
            CHECK(std::abs(z.eval(x) - z.eval(y)) <= dist(x, y) + 1e-12);
        }
    }
}

TEST_CASE("k=1 explicit: zeta(n) = zeta(p) - |p-n|") {
    SignedConfig cfg;
    cfg.positives = {{0, 0, 0}};
    cfg.negatives = {{1, 0, 0}};
    auto zb = build_zeta_pipeline(cfg, 1e-4, ZetaVariant::Euclid);
    double zp = zb.zeta.eval({0, 0, 0});
    double zn = zb.zeta.eval({1, 0, 0});
    CHECK(zp - zn == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("boundary variant is constant on the sphere") {
    Domain ball = Domain::ball({0.5, 0.5, 0.5}, 0.45);
    auto cfg = random_config(2, 77);
    for (auto& p : cfg.positives) p = ball.center + (p - ball.center) * 0.3;
    for (auto& p : cfg.negatives) p = ball.center + (p - ball.center) * 0.3;
    auto zb = build_zeta_pipeline(cfg, 1e-4, ZetaVariant::Boundary, &ball);
    const ZetaExact& z = zb.zeta;

    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss;
    double ref = 0;
    for (int t = 0; t < 100; ++t) {
        Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
        Vec3 x = ball.center + d.normalized() * ball.radius;
        double v = z.eval(x);
        if (t == 0) ref = v;
        CHECK(v == doctest::Approx(ref).epsilon(1e-12));
    }
    // extension property in the boundary metric
    auto pts = zb.displacement.displaced.all_points();
    for (size_t a = 0; a < pts.size(); ++a)
        CHECK(z.eval(pts[a]) == doctest::Approx(z.zeta_star[a]).epsilon(1e-10));
    // 1-Lipschitz inside the domain
    std::uniform_real_distribution<double> uni(0.15, 0.85);
    for (int t = 0; t < 2000; ++t) {
        Vec3 x{uni(rng), uni(rng), uni(rng)}, y{uni(rng), uni(rng), uni(rng)};
        if (!ball.contains(x) || !ball.contains(y)) continue;
        CHECK(std::abs(z.eval(x) - z.eval(y)) <= dist(x, y) + 1e-12);
    }
}

TEST_CASE("gradient is the active unit direction away from kinks") {
    auto cfg = random_config(2, 55);
    auto zb = build_zeta_pipeline(cfg, 1e-4, ZetaVariant::Euclid);
    const ZetaExact& z = zb.zeta;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    int checked = 0;
    for (int t = 0; t < 500 && checked < 200; ++t) {
        Vec3 x{uni(rng), uni(rng), uni(rng)};
        Vec3 g = z.grad(x);
        if (g.norm() < 0.5) continue;  // plateau
        double fd[3];
        double step = 1e-7;
        bool kink = false;
        for (int axis = 0; axis < 3; ++axis) {
            Vec3 xp = x, xm = x;
            xp[axis] += step;
            xm[axis] -= step;
            fd[axis] = (z.eval(xp) - z.eval(xm)) / (2 * step);
            if (std::abs(fd[axis] - g[axis]) > 1e-5) kink = true;
        }
        if (!kink) {
            ++checked;
            CHECK(g.norm() == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    CHECK(checked >= 100);
}
