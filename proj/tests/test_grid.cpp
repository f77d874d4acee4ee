#include "doctest.h"
#include "gl3d/grid.hpp"
#include "gl3d/synth.hpp"

using namespace gl3d;

TEST_CASE("uniform field accepts the first grid with zero skeleton energy") {
    LatticeField3 f({32, 32, 32}, 1.0 / 31, {0, 0, 0});
    GridSearchParams p;
    p.delta = 0.125;
    p.trials = 10;
    auto g = choose_grid(f, 0.05, p);
    CHECK(!g.kept_cubes.empty());
    auto density = energy_density(f, 0.05);
    auto se = skeleton_energies(f, density, g, 0.05);
    CHECK(se.e1 == doctest::Approx(0.0));
    CHECK(se.e2 == doctest::Approx(0.0));
    CHECK(se.min_modulus_on_edges == doctest::Approx(1.0));
}

TEST_CASE("straight vortex: accepted grid re-verifies at finer sampling") {
    SynthParams sp;
    sp.kind = SynthKind::StraightLine;
    auto sr = synth_field(sp, {64, 64, 64}, 1.0 / 63, 0.02);
    GridSearchParams p;
    p.delta = 8.0 / 63;
    p.trials = 200;
    p.seed = 7;
    auto g = choose_grid(sr.field, 0.02, p);
    CHECK(verify_grid(sr.field, 0.02, g, p, 4));
}

TEST_CASE("constant low modulus cannot produce a grid") {
    LatticeField3 f({16, 16, 16}, 1.0 / 15, {0, 0, 0});
    for (auto& c : f.u) c = 0.4;
    GridSearchParams p;
    p.delta = 0.2;
    p.trials = 20;
    CHECK_THROWS_AS(choose_grid(f, 0.05, p), GridNotFound);
}

TEST_CASE("interior faces are shared by exactly two kept cubes") {
    LatticeField3 f({24, 24, 24}, 1.0 / 23, {0, 0, 0});
    GridSearchParams p;
    p.delta = 0.21;
    p.trials = 5;
    auto g = choose_grid(f, 0.05, p);
    auto fl = enumerate_faces(g);
    int interior = 0;
    for (size_t i = 0; i < fl.faces.size(); ++i) {
        const GridFace& face = fl.faces[i];
        std::array<int, 3> below = face.base;
        below[face.axis] -= 1;
        bool above = g.is_kept(face.base[0], face.base[1], face.base[2]);
        bool under = g.is_kept(below[0], below[1], below[2]);
        CHECK((above || under));
        if (fl.interior[i]) {
            CHECK(above);
            CHECK(under);
            ++interior;
        }
    }
    CHECK(interior > 0);
}

TEST_CASE("ball domain: complement of kept cubes is a thin shell") {
    SynthParams sp;
    sp.kind = SynthKind::Uniform;
    sp.ball_domain = true;
    sp.ball_radius = 0.45;
    auto sr = synth_field(sp, {48, 48, 48}, 1.0 / 47, 0.02);
    GridSearchParams p;
    p.delta = 0.1;
    p.trials = 10;
    auto g = choose_grid(sr.field, 0.02, p);
    double theta = sr.field.domain.volume() - g.kept_volume();
    CHECK(theta > 0);
    CHECK(theta <= 8.0 * p.delta);
}
