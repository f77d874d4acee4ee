#include "gl3d/surface.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace gl3d {

namespace {

uint64_t face_key(const GridFace& f) {
    return GridSpec::key(f.base[0], f.base[1], f.base[2]) * 3 + f.axis;
}

}  // namespace

SurfaceGraph::SurfaceGraph(const GridSpec& grid, int steiner_per_edge, int max_face_crossings)
    : grid_(grid), maxCross_(max_face_crossings) {
    FaceList fl = enumerate_faces(grid);
    for (size_t i = 0; i < fl.faces.size(); ++i)
        if (!fl.interior[i]) {
            faceIndex_[face_key(fl.faces[i])] = int(faces_.size());
            faces_.push_back(fl.faces[i]);
        }
    faceNodes_.resize(faces_.size());

    // nodes on polyhedron edges: corners + steiner points, deduplicated
    std::unordered_map<uint64_t, int> cornerId;
    std::unordered_map<uint64_t, std::vector<int>> edgeNodes;  // edge key -> node ids

    auto corner_node = [&](const std::array<int, 3>& v) {
        uint64_t k = GridSpec::key(v[0], v[1], v[2]);
        auto it = cornerId.find(k);
        if (it != cornerId.end()) return it->second;
        int id = int(nodes_.size());
        nodes_.push_back(grid_.grid_to_world(Vec3{double(v[0]), double(v[1]), double(v[2])}));
        nodeFaces_.emplace_back();
        cornerId[k] = id;
        return id;
    };
    auto edge_key = [](const std::array<int, 3>& v, int axis) {
        return GridSpec::key(v[0], v[1], v[2]) * 3 + axis;
    };
    auto edge_node_list = [&](const std::array<int, 3>& v, int axis) -> const std::vector<int>& {
        uint64_t k = edge_key(v, axis);
        auto it = edgeNodes.find(k);
        if (it != edgeNodes.end()) return it->second;
        std::vector<int> ids;
        std::array<int, 3> w = v;
        w[axis] += 1;
        ids.push_back(corner_node(v));
        for (int s = 1; s <= steiner_per_edge; ++s) {
            double t = double(s) / (steiner_per_edge + 1);
            Vec3 g{double(v[0]), double(v[1]), double(v[2])};
            g[axis] += t;
            int id = int(nodes_.size());
            nodes_.push_back(grid_.grid_to_world(g));
            nodeFaces_.emplace_back();
            ids.push_back(id);
        }
        ids.push_back(corner_node(w));
        return edgeNodes.emplace(k, std::move(ids)).first->second;
    };

    for (size_t fi = 0; fi < faces_.size(); ++fi) {
        const GridFace& f = faces_[fi];
        int a = (f.axis + 1) % 3, b = (f.axis + 2) % 3;
        std::array<int, 3> base = f.base;
        std::array<int, 3> ba = base, bb = base;
        ba[a] += 1;
        bb[b] += 1;
        std::vector<int> ids;
        for (const auto& [v, ax] : {std::pair{base, a}, std::pair{base, b}, std::pair{bb, a},
                                    std::pair{ba, b}}) {
            for (int id : edge_node_list(v, ax)) ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        faceNodes_[fi] = ids;
        for (int id : ids) nodeFaces_[id].push_back(int(fi));
    }
}

int SurfaceGraph::boundary_face_index(const GridFace& f) const {
    auto it = faceIndex_.find(face_key(f));
    return it == faceIndex_.end() ? -1 : it->second;
}

std::vector<SurfacePath> SurfaceGraph::paths_from(const SurfaceTerminal& src,
                                                  const std::vector<SurfaceTerminal>& targets) const {
    int sf = boundary_face_index(src.face);
    if (sf < 0) throw PointNotOnSurface();

    // layered Dijkstra over (node, layer); the terminal hop uses one segment
    // and every node hop one more, so layers 0..S-1 realize paths through at
    // most S+1 = maxCross_ faces.
    const size_t N = nodes_.size();
    const int S = std::max(1, maxCross_ - 1);
    const double INF = 1e300;
    std::vector<double> dist(N * S, INF);
    std::vector<int> parent(N * S, -1);  // encoded state: node * S + seg
    using QE = std::pair<double, int>;
    std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;

    for (int id : faceNodes_[sf]) {
        double d = gl3d::dist(src.pos, nodes_[id]);
        int st = id * S + 0;
        if (d < dist[st]) {
            dist[st] = d;
            pq.push({d, st});
        }
    }
    while (!pq.empty()) {
        auto [d, st] = pq.top();
        pq.pop();
        if (d > dist[st] + 1e-15) continue;
        int node = st / S, seg = st % S;
        if (seg + 1 >= S) continue;
        for (int fi : nodeFaces_[node]) {
            for (int nb : faceNodes_[fi]) {
                if (nb == node) continue;
                double nd = d + gl3d::dist(nodes_[node], nodes_[nb]);
                int nst = nb * S + seg + 1;
                if (nd < dist[nst] - 1e-15) {
                    dist[nst] = nd;
                    parent[nst] = st;
                    pq.push({nd, nst});
                }
            }
        }
    }

    std::vector<SurfacePath> out(targets.size());
    for (size_t t = 0; t < targets.size(); ++t) {
        int tf = boundary_face_index(targets[t].face);
        if (tf < 0) throw PointNotOnSurface();
        SurfacePath best;
        // co-facial direct segment
        if (tf == sf) {
            best.dist = gl3d::dist(src.pos, targets[t].pos);
            best.via.clear();
        }
        for (int id : faceNodes_[tf]) {
            double tail = gl3d::dist(nodes_[id], targets[t].pos);
            for (int seg = 0; seg < S; ++seg) {
                double total = dist[id * S + seg] + tail;
                if (total < best.dist - 1e-15) {
                    best.dist = total;
                    best.via.clear();
                    int st = id * S + seg;
                    while (st >= 0) {
                        best.via.push_back(nodes_[st / S]);
                        st = parent[st];
                    }
                    std::reverse(best.via.begin(), best.via.end());
                }
            }
        }
        out[t] = best;
    }
    return out;
}

SurfaceConnection connect_on_polyhedron(const std::vector<SurfaceTerminal>& positives,
                                        const std::vector<SurfaceTerminal>& negatives,
                                        const SurfaceGraph& graph, const GridSpec& grid,
                                        const Domain& dom) {
    (void)grid;
    if (positives.size() != negatives.size()) throw Unbalanced();
    SurfaceConnection con;
    int k = int(positives.size());
    if (k == 0) return con;

    // pairwise geodesic paths positive -> negative
    std::vector<std::vector<SurfacePath>> pn(k);
    for (int i = 0; i < k; ++i) pn[i] = graph.paths_from(positives[i], negatives);

    auto db = [&](const Vec3& x) { return dom.boundary_distance(x); };
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            cost[i][j] = std::min(pn[i][j].dist, db(positives[i].pos) + db(negatives[j].pos));

    con.sigma = min_cost_matching(cost);
    con.via_boundary.assign(k, 0);
    con.pair_paths.resize(k);
    for (int i = 0; i < k; ++i) {
        int j = con.sigma[i];
        con.length += cost[i][j];
        double via = db(positives[i].pos) + db(negatives[j].pos);
        if (pn[i][j].dist <= via) {
            con.pair_paths[i] = pn[i][j];
        } else {
            con.via_boundary[i] = 1;
        }
    }

    // augmented collection: crossing points duplicated as +- pairs; every
    // surface leg spans a single face
    for (int i = 0; i < k; ++i) con.aug.positives.push_back(positives[i].pos);
    for (int j = 0; j < k; ++j) con.aug.negatives.push_back(negatives[j].pos);
    con.sigma_star.assign(k, -1);
    con.aug_legs.clear();
    std::vector<std::pair<int, int>> pairList;  // (pos index, neg index) in aug
    for (int i = 0; i < k; ++i) {
        int j = con.sigma[i];
        if (con.via_boundary[i]) {
            pairList.push_back({i, j});
            con.aug_legs.push_back({{negatives[j].pos, dom.nearest_boundary_point(negatives[j].pos)},
                                    {dom.nearest_boundary_point(positives[i].pos), positives[i].pos}});
            con.aug_via_boundary.push_back(1);
            continue;
        }
        const auto& via = con.pair_paths[i].via;
        if (via.empty()) {
            pairList.push_back({i, j});
            con.aug_legs.push_back({{negatives[j].pos, positives[i].pos}});
            con.aug_via_boundary.push_back(0);
            continue;
        }
        // chain p -> q1 -> ... -> qm -> n; every link co-facial by construction
        int prevPos = i;  // current positive endpoint of the next link
        for (const Vec3& q : via) {
            int qPos = int(con.aug.positives.size());
            int qNeg = int(con.aug.negatives.size());
            con.aug.positives.push_back(q);
            con.aug.negatives.push_back(q);
            // link: positive prevPos pairs with negative qNeg (the q copy)
            pairList.push_back({prevPos, qNeg});
            con.aug_legs.push_back({{q, con.aug.positives[prevPos]}});
            con.aug_via_boundary.push_back(0);
            prevPos = qPos;
        }
        pairList.push_back({prevPos, j});
        con.aug_legs.push_back({{negatives[j].pos, con.aug.positives[prevPos]}});
        con.aug_via_boundary.push_back(0);
    }
    // normalize sigma_star to a permutation indexed by positive slot
    con.sigma_star.assign(con.aug.positives.size(), -1);
    {
        std::vector<std::vector<ConnectionLeg>> legsByPos(con.aug.positives.size());
        std::vector<char> viaByPos(con.aug.positives.size(), 0);
        for (size_t e = 0; e < pairList.size(); ++e) {
            con.sigma_star[pairList[e].first] = pairList[e].second;
            legsByPos[pairList[e].first] = con.aug_legs[e];
            viaByPos[pairList[e].first] = con.aug_via_boundary[e];
        }
        con.aug_legs = std::move(legsByPos);
        con.aug_via_boundary = std::move(viaByPos);
    }
    for (size_t i = 0; i < con.aug.positives.size(); ++i) {
        int j = con.sigma_star[i];
        double viaB = db(con.aug.positives[i]) + db(con.aug.negatives[j]);
        double straight = dist(con.aug.positives[i], con.aug.negatives[j]);
        con.aug_length += con.aug_via_boundary[i] ? viaB : straight;
    }

    // potentials on the augmented collection under the boundary pseudometric
    int ka = int(con.aug.positives.size());
    auto pts = con.aug.all_points();
    std::vector<std::vector<double>> dist2k(2 * ka, std::vector<double>(2 * ka));
    for (int a = 0; a < 2 * ka; ++a)
        for (int b = 0; b < 2 * ka; ++b)
            dist2k[a][b] = std::min(dist(pts[a], pts[b]), db(pts[a]) + db(pts[b]));
    auto zeta = matching_potentials(dist2k, con.sigma_star);
    con.zeta_p.assign(zeta.begin(), zeta.begin() + ka);
    con.zeta_n.assign(zeta.begin() + ka, zeta.end());
    // tightness of the per-pair identity (fails only when the geodesic and
    // boundary costs genuinely disagree for some matched pair)
    for (int i = 0; i < ka; ++i) {
        double want = dist2k[i][ka + con.sigma_star[i]];
        if (std::abs(con.zeta_p[i] - con.zeta_n[con.sigma_star[i]] - want) > 1e-9)
            con.potentials_tight = false;
    }
    if (!con.potentials_tight) {
        // re-match under the boundary pseudometric for clean duals
        Connection re = connect_with_matrix(con.aug, MetricTag::DBoundary, dist2k);
        con.zeta_p = re.zeta_p;
        con.zeta_n = re.zeta_n;
    }
    return con;
}

}  // namespace gl3d
