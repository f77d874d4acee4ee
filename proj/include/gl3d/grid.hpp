#pragma once

// Cubic grid placement: find an offset/rotation so that |u| stays above 5/8
// on the grid 1-skeleton and the skeleton energies are controlled by the bulk
// energy. Cubes meeting the domain complement are dropped.

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "gl3d/energy.hpp"
#include "gl3d/field.hpp"

namespace gl3d {

struct GridNotFound : std::runtime_error {
    GridNotFound(const std::string& what) : std::runtime_error(what) {}
};

struct GridSpec {
    Vec3 b;          // grid origin (world)
    Mat3 R;          // rotation, det +1
    double delta = 0.1;
    std::vector<std::array<int, 3>> kept_cubes;  // integer cube coords, cube spans [c, c+1]^3 grid units
    // gamma implied by delta = eps^((1-gamma)/4); logged, never enforced
    double implied_gamma = 0.0;

    std::unordered_set<uint64_t> kept_set;

    static uint64_t key(int i, int j, int k) {
        auto enc = [](int v) { return uint64_t(uint32_t(v + (1 << 20))) & 0x1FFFFF; };
        return enc(i) | (enc(j) << 21) | (enc(k) << 42);
    }
    void finalize() {
        kept_set.clear();
        for (auto& c : kept_cubes) kept_set.insert(key(c[0], c[1], c[2]));
    }
    bool is_kept(int i, int j, int k) const { return kept_set.count(key(i, j, k)) != 0; }

    Vec3 grid_to_world(const Vec3& g) const { return b + R.apply(g * delta); }
    Vec3 world_to_grid(const Vec3& w) const { return R.applyT(w - b) / delta; }

    double kept_volume() const { return double(kept_cubes.size()) * delta * delta * delta; }
};

// A face of the grid lattice: normal axis c at vertex `base`, spanning unit
// axes (c+1)%3 and (c+2)%3 in grid units. The cube on the +c side has coords
// `base`; the -c side cube is base - e_c.
struct GridFace {
    int axis = 2;
    std::array<int, 3> base{0, 0, 0};

    bool operator==(const GridFace& o) const { return axis == o.axis && base == o.base; }
};

struct GridFaceHash {
    size_t operator()(const GridFace& f) const {
        return std::hash<uint64_t>()(GridSpec::key(f.base[0], f.base[1], f.base[2]) * 3 + f.axis);
    }
};

// All distinct faces of kept cubes; `interior` marks faces shared by two kept
// cubes, the rest form the boundary polyhedron of the kept union.
struct FaceList {
    std::vector<GridFace> faces;
    std::vector<char> interior;
};
FaceList enumerate_faces(const GridSpec& g);

// Edges (vertex, axis) of kept cubes, deduplicated.
struct GridEdge {
    std::array<int, 3> vertex{0, 0, 0};
    int axis = 0;
};
std::vector<GridEdge> enumerate_edges(const GridSpec& g);

struct SkeletonEnergies {
    double e1 = 0.0;  // line integral of the energy density over the edges
    double e2 = 0.0;  // surface integral over the faces
    double min_modulus_on_edges = 1.0;
};

// `density` must come from energy_density(field, eps). `oversample`
// multiplies the edge/face sampling rate (used for post-hoc verification).
SkeletonEnergies skeleton_energies(const LatticeField3& f, const std::vector<double>& density,
                                   const GridSpec& g, double eps, int oversample = 1);

struct GridSearchParams {
    double delta = 0.125;
    int trials = 200;
    uint64_t seed = 7;
    double C_grid = 100.0;       // constant in the skeleton energy bounds
    double modulus_threshold = 5.0 / 8.0;
    bool rotations = true;       // identity plus 3 axis-permutation rotations
};

GridSpec choose_grid(const LatticeField3& f, double eps, const GridSearchParams& params);

// Re-verifies the three acceptance conditions at `oversample` x sampling.
bool verify_grid(const LatticeField3& f, double eps, const GridSpec& g,
                 const GridSearchParams& params, int oversample = 2);

}  // namespace gl3d
