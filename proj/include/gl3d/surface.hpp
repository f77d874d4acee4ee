#pragma once

// Geodesics on the boundary polyhedron of the kept-cube union: a Steiner
// refined graph (points on polyhedron edges, complete in-face connections),
// shortest paths capped at a maximum face-crossing count, the matching under
// min(geodesic, through-boundary) cost, and the augmented collection whose
// surface legs are each contained in a single face.

#include "gl3d/grid.hpp"
#include "gl3d/matching.hpp"
#include "gl3d/zeta.hpp"

namespace gl3d {

struct PointNotOnSurface : std::runtime_error {
    PointNotOnSurface() : std::runtime_error("surface: point does not lie on a boundary face") {}
};

struct SurfaceTerminal {
    Vec3 pos;
    GridFace face;
};

struct SurfacePath {
    double dist = 1e300;
    std::vector<Vec3> via;  // crossing points on polyhedron edges, in order
};

class SurfaceGraph {
  public:
    SurfaceGraph(const GridSpec& grid, int steiner_per_edge = 8, int max_face_crossings = 6);

    int boundary_face_index(const GridFace& f) const;  // -1 when not a boundary face
    size_t node_count() const { return nodes_.size(); }
    int crossing_cap() const { return maxCross_; }

    // Shortest surface paths from one terminal to the others. Co-facial
    // pairs get the exact straight in-face distance.
    std::vector<SurfacePath> paths_from(const SurfaceTerminal& src,
                                        const std::vector<SurfaceTerminal>& targets) const;

  private:
    const GridSpec& grid_;
    int maxCross_;
    std::vector<GridFace> faces_;
    std::unordered_map<uint64_t, int> faceIndex_;
    std::vector<Vec3> nodes_;
    std::vector<std::vector<int>> faceNodes_;   // per face: node ids on its edges
    std::vector<std::vector<int>> nodeFaces_;   // per node: incident face ids
};

struct SurfaceConnection {
    // matching on the original collection
    std::vector<int> sigma;
    double length = 0.0;
    std::vector<char> via_boundary;
    std::vector<SurfacePath> pair_paths;  // geodesic branch paths (empty for boundary branch)

    // augmented collection: crossing points added as +- pairs, every surface
    // leg co-facial; sigma_star pairs aug.positives[i] with aug.negatives[..]
    SignedConfig aug;
    std::vector<int> sigma_star;
    std::vector<std::vector<ConnectionLeg>> aug_legs;  // oriented negative -> positive
    std::vector<char> aug_via_boundary;
    double aug_length = 0.0;

    // potentials on the augmented collection (1-Lipschitz for the boundary
    // pseudometric, tight on the sigma_star pairs when the per-pair identity
    // d_hat = d_boundary holds; re-matched under d_boundary otherwise)
    std::vector<double> zeta_p, zeta_n;
    bool potentials_tight = true;
};

SurfaceConnection connect_on_polyhedron(const std::vector<SurfaceTerminal>& positives,
                                        const std::vector<SurfaceTerminal>& negatives,
                                        const SurfaceGraph& graph, const GridSpec& grid,
                                        const Domain& dom);

}  // namespace gl3d
