#include <random>

#include "doctest.h"
#include "gl3d/boundary_poly.hpp"
#include "gl3d/mollify.hpp"

using namespace gl3d;

TEST_CASE("quadratic closeness with one frozen constant across tau") {
    Domain ball = Domain::ball({0, 0, 0}, 1.0);
    const double C_frozen = 2.0;
    for (double tau : {0.3, 0.15}) {
        auto poly = approximate_boundary(ball, tau);
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> uni(-1.0, 1.0);
        double worst = 0;
        int probes = 0;
        while (probes < 1000) {
            Vec3 z{uni(rng), uni(rng), uni(rng)};
            if (!ball.contains(z)) continue;
            ++probes;
            CHECK(poly.contains(z));  // convex body inside its tangent hull
            worst = std::max(worst, std::abs(poly.distance(z) - ball.boundary_distance(z)));
        }
        CHECK(worst <= C_frozen * tau * tau);
        // point count C' tau^-2
        CHECK(double(poly.sites.size()) <= 6.0 / (tau * tau));
    }
}

TEST_CASE("seeding conditions: separation and covering") {
    Domain ball = Domain::ball({0.5, 0.5, 0.5}, 0.45);
    for (double tau : {0.2, 0.1}) {
        auto poly = approximate_boundary(ball, tau);
        CHECK(poly.min_geodesic_separation() >= tau);
        CHECK(poly.covering_radius() <= 3.0 * tau);
    }
}

TEST_CASE("normals satisfy the angle separation constraints") {
    Domain ball = Domain::ball({0, 0, 0}, 1.0);
    double tau = 0.25;
    auto poly = approximate_boundary(ball, tau);
    double theta = std::min(1e-4, 0.01 * std::pow(tau, 5.0));
    for (size_t a = 0; a < poly.normals.size(); ++a)
        for (size_t b = a + 1; b < poly.normals.size(); ++b) {
            CHECK(poly.normals[a].cross(poly.normals[b]).norm() >= theta);
            for (size_t c = b + 1; c < poly.normals.size(); ++c)
                CHECK(std::abs(det3(poly.normals[a], poly.normals[b], poly.normals[c])) >=
                      theta * theta);
        }
}

TEST_CASE("box domain is rejected") {
    Domain box = Domain::box({0, 0, 0}, {1, 1, 1});
    CHECK_THROWS_AS(approximate_boundary(box, 0.2), NonConvexDomain);
}

TEST_CASE("boundary potential smoothing through the polyhedral distance") {
    Domain ball = Domain::ball({0.5, 0.5, 0.5}, 0.45);
    auto poly = approximate_boundary(ball, 0.15);
    auto oracle = poly.oracle();

    SignedConfig cfg;
    cfg.positives = {{0.5, 0.5, 0.75}};
    cfg.negatives = {{0.5, 0.5, 0.25}};
    auto zb = build_zeta_pipeline(cfg, 1e-4, ZetaVariant::Boundary, &ball,
                                  &oracle);
    double lambda = 0.02;
    auto mz = mollify(zb.zeta, lambda, 6.0 / 21.0);

    // gradient bound at probes with dist > 2 lambda from the boundary
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(0.1, 0.9);
    int checked = 0;
    while (checked < 2000) {
        Vec3 x{uni(rng), uni(rng), uni(rng)};
        if (poly.distance(x) <= 2 * lambda) continue;
        ++checked;
        CHECK(mz.grad(x).norm() <= 1.0 + 1e-6);
    }
}
