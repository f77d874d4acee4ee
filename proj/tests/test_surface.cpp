#include "doctest.h"
#include "gl3d/surface.hpp"

using namespace gl3d;

namespace {

GridSpec unit_cube_grid() {
    GridSpec g;
    g.b = {0, 0, 0};
    g.R = Mat3::identity();
    g.delta = 1.0;
    g.kept_cubes = {{0, 0, 0}};
    g.finalize();
    return g;
}

// Exact two-face geodesic: minimize |p-e| + |e-q| over the shared edge.
double two_face_oracle(const Vec3& p, const Vec3& q, const Vec3& e0, const Vec3& e1) {
    double lo = 0, hi = 1;
    auto len = [&](double t) {
        Vec3 e = e0 + (e1 - e0) * t;
        return dist(p, e) + dist(e, q);
    };
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (len(m1) < len(m2))
            hi = m2;
        else
            lo = m1;
    }
    return len(0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("co-facial points get exact straight distance") {
    GridSpec g = unit_cube_grid();
    SurfaceGraph graph(g);
    SurfaceTerminal a{{0.2, 0.3, 0.0}, {2, {0, 0, 0}}};
    SurfaceTerminal b{{0.8, 0.7, 0.0}, {2, {0, 0, 0}}};
    auto paths = graph.paths_from(a, {b});
    CHECK(paths[0].dist == doctest::Approx(dist(a.pos, b.pos)).epsilon(1e-12));
    CHECK(paths[0].via.empty());
}

TEST_CASE("adjacent-face geodesic within 5% of the unfolding oracle") {
    GridSpec g = unit_cube_grid();
    SurfaceGraph graph(g);
    // p on the bottom (z=0), q on the side (x=0); shared edge x=0,z=0
    SurfaceTerminal p{{0.4, 0.35, 0.0}, {2, {0, 0, 0}}};
    SurfaceTerminal q{{0.0, 0.65, 0.45}, {0, {0, 0, 0}}};
    auto paths = graph.paths_from(p, {q});
    double oracle = two_face_oracle(p.pos, q.pos, {0, 0, 0}, {0, 1, 0});
    CHECK(paths[0].dist >= oracle - 1e-9);
    CHECK(paths[0].dist <= 1.05 * oracle);
    CHECK(paths[0].via.size() == 1);
}

TEST_CASE("opposite faces: two crossing points recorded") {
    GridSpec g = unit_cube_grid();
    SurfaceGraph graph(g);
    SurfaceTerminal p{{0.5, 0.5, 1.0}, {2, {0, 0, 1}}};
    SurfaceTerminal q{{0.5, 0.5, 0.0}, {2, {0, 0, 0}}};
    auto paths = graph.paths_from(p, {q});
    CHECK(paths[0].dist == doctest::Approx(2.0).epsilon(0.02));
    CHECK(paths[0].via.size() == 2);
}

TEST_CASE("deep points take the boundary branch") {
    GridSpec g = unit_cube_grid();
    SurfaceGraph graph(g);
    Domain dom = Domain::ball({0.5, 0.5, 0.5}, 0.55);
    std::vector<SurfaceTerminal> pos = {{{0.5, 0.5, 1.0}, {2, {0, 0, 1}}}};
    std::vector<SurfaceTerminal> neg = {{{0.5, 0.5, 0.0}, {2, {0, 0, 0}}}};
    auto con = connect_on_polyhedron(pos, neg, graph, g, dom);
    CHECK(con.via_boundary[0] == 1);
    CHECK(con.length == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("augmentation preserves the length and realizes co-facial legs") {
    GridSpec g = unit_cube_grid();
    SurfaceGraph graph(g);
    Domain dom = Domain::ball({0.5, 0.5, 0.5}, 5.0);  // boundary far away: geodesic branch
    std::vector<SurfaceTerminal> pos = {{{0.5, 0.5, 1.0}, {2, {0, 0, 1}}}};
    std::vector<SurfaceTerminal> neg = {{{0.5, 0.5, 0.0}, {2, {0, 0, 0}}}};
    auto con = connect_on_polyhedron(pos, neg, graph, g, dom);
    CHECK(con.via_boundary[0] == 0);
    CHECK(con.aug.positives.size() == 3);  // original + two crossing points
    CHECK(con.aug.negatives.size() == 3);
    CHECK(con.aug_length == doctest::Approx(con.length).epsilon(1e-9));
    // every surface leg is a single segment
    for (size_t i = 0; i < con.aug_legs.size(); ++i) {
        if (!con.aug_via_boundary[i]) CHECK(con.aug_legs[i].size() == 1);
    }
    // per-pair identity of the augmented potentials
    for (size_t i = 0; i < con.aug.positives.size(); ++i) {
        int j = con.sigma_star[i];
        double want = std::min(dist(con.aug.positives[i], con.aug.negatives[j]),
                               dom.boundary_distance(con.aug.positives[i]) +
                                   dom.boundary_distance(con.aug.negatives[j]));
        CHECK(con.zeta_p[i] - con.zeta_n[j] == doctest::Approx(want).epsilon(1e-9));
    }
    CHECK(con.potentials_tight);
}

TEST_CASE("co-facial pairs need no augmentation") {
    GridSpec g = unit_cube_grid();
    SurfaceGraph graph(g);
    Domain dom = Domain::ball({0.5, 0.5, 0.5}, 5.0);
    std::vector<SurfaceTerminal> pos = {{{0.2, 0.3, 0.0}, {2, {0, 0, 0}}}};
    std::vector<SurfaceTerminal> neg = {{{0.7, 0.8, 0.0}, {2, {0, 0, 0}}}};
    auto con = connect_on_polyhedron(pos, neg, graph, g, dom);
    CHECK(con.aug.positives.size() == 1);
    CHECK(con.aug_length == doctest::Approx(con.length).epsilon(1e-12));
}

TEST_CASE("point off the boundary surface raises") {
    GridSpec g = unit_cube_grid();
    SurfaceGraph graph(g);
    SurfaceTerminal bad{{0.5, 0.5, 0.5}, {2, {5, 5, 5}}};
    CHECK_THROWS_AS(graph.paths_from(bad, {bad}), PointNotOnSurface);
}
