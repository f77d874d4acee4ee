#include "gl3d/current.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <mutex>
#include <map>
#include <random>
#include <thread>

namespace gl3d {

double MassRegion::clipped_length(const Vec3& a, const Vec3& b) const {
    double L = dist(a, b);
    if (kind == RegionKind::All || L == 0) return L;
    if (kind == RegionKind::Box) {
        // slab clipping
        double t0 = 0.0, t1 = 1.0;
        Vec3 d = b - a;
        for (int ax = 0; ax < 3; ++ax) {
            double lo = dom.lo[ax], hi = dom.hi[ax];
            if (std::abs(d[ax]) < 1e-300) {
                if (a[ax] < lo || a[ax] > hi) return 0.0;
                continue;
            }
            double u0 = (lo - a[ax]) / d[ax], u1 = (hi - a[ax]) / d[ax];
            if (u0 > u1) std::swap(u0, u1);
            t0 = std::max(t0, u0);
            t1 = std::min(t1, u1);
        }
        return t1 > t0 ? (t1 - t0) * L : 0.0;
    }
    // ball: |a + t d - c|^2 = r^2
    Vec3 d = b - a, m = a - dom.center;
    double A = d.norm2(), B = 2.0 * m.dot(d), C = m.norm2() - dom.radius * dom.radius;
    double disc = B * B - 4 * A * C;
    if (disc <= 0) return C <= 0 ? L : 0.0;
    double s = std::sqrt(disc);
    double t0 = std::clamp((-B - s) / (2 * A), 0.0, 1.0);
    double t1 = std::clamp((-B + s) / (2 * A), 0.0, 1.0);
    return (t1 - t0) * L;
}

double PolyhedralCurrent::mass(const MassRegion& region) const {
    double m = 0;
    for (const auto& s : segments)
        m += 2.0 * M_PI * std::abs(s.multiplicity) * region.clipped_length(s.a, s.b);
    return m;
}

double PolyhedralCurrent::length() const {
    double L = 0;
    for (const auto& s : segments) L += dist(s.a, s.b);
    return L;
}

namespace {

uint64_t quantize_point(const Vec3& p, double q) {
    auto enc = [&](double v) {
        return uint64_t(int64_t(std::llround(v / q)) + (int64_t(1) << 40)) & ((uint64_t(1) << 42) - 1);
    };
    // 42 bits per coordinate folded; collisions are irrelevant at fixture scale
    uint64_t h = 1469598103934665603ull;
    for (double v : {p.x, p.y, p.z}) {
        h ^= enc(v);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

double PolyhedralCurrent::boundary_residual(const Domain& dom, double boundary_tol) const {
    std::unordered_map<uint64_t, int> charge;
    std::unordered_map<uint64_t, Vec3> where;
    const double q = 1e-7;
    for (const auto& s : segments) {
        uint64_t ka = quantize_point(s.a, q), kb = quantize_point(s.b, q);
        charge[ka] -= s.multiplicity;
        charge[kb] += s.multiplicity;
        where[ka] = s.a;
        where[kb] = s.b;
    }
    double worst = 0;
    for (const auto& [k, c] : charge) {
        if (c == 0) continue;
        if (dom.boundary_distance(where[k]) <= boundary_tol) continue;  // relative boundary
        worst = std::max(worst, double(std::abs(c)));
    }
    return worst;
}

namespace {

// outward sign of a face for a given cube: +1 when the face is the cube's
// upper face along its axis
int outward_sign(const GridFace& f, const std::array<int, 3>& cube) {
    return f.base[f.axis] == cube[f.axis] + 1 ? +1 : -1;
}

struct SegmentAccum {
    // canonical key -> (segment, accumulated multiplicity)
    std::map<std::pair<uint64_t, uint64_t>, std::pair<CurrentSegment, int>> acc;

    void add(const Vec3& a, const Vec3& b, int mult, int prov) {
        if (mult == 0 || dist(a, b) < 1e-12) return;
        uint64_t ka = quantize_point(a, 1e-9), kb = quantize_point(b, 1e-9);
        bool flip = kb < ka;
        auto key = flip ? std::make_pair(kb, ka) : std::make_pair(ka, kb);
        int m = flip ? -mult : mult;
        auto it = acc.find(key);
        if (it == acc.end()) {
            CurrentSegment s{flip ? b : a, flip ? a : b, 0, prov};
            acc[key] = {s, m};
        } else {
            it->second.second += m;
        }
    }
    void emit(PolyhedralCurrent& out) {
        for (auto& [k, sm] : acc) {
            if (sm.second == 0) continue;  // cancelled segments dropped
            CurrentSegment s = sm.first;
            s.multiplicity = sm.second;
            out.segments.push_back(s);
        }
    }
};

}  // namespace

namespace {
int g_workers = int(std::thread::hardware_concurrency());
}

void set_worker_threads(int n) { g_workers = n; }
int worker_threads() { return g_workers; }

VortexCurrentBuild build_vortex_current(const LatticeField3& field, const GridSpec& grid,
                                        double eps, const CurrentBuildParams& params) {
    VortexCurrentBuild out;
    FaceList fl = enumerate_faces(grid);

    // faces are independent; detect in parallel with index-addressed results
    out.detections.resize(fl.faces.size());
    std::exception_ptr firstError;
    std::atomic<size_t> next{0};
    std::mutex errMutex;
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= fl.faces.size()) return;
            try {
                FaceField ff = extract_face(field, grid, fl.faces[i], eps);
                out.detections[i] = FaceDetection{fl.faces[i], detect_components(ff)};
            } catch (...) {
                std::lock_guard<std::mutex> lk(errMutex);
                if (!firstError) firstError = std::current_exception();
                return;
            }
        }
    };
    int nw = std::max(1, std::min<int>(g_workers, int(fl.faces.size())));
    if (nw <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (firstError) std::rethrow_exception(firstError);
    for (size_t i = 0; i < fl.faces.size(); ++i)
        out.face_lookup[GridSpec::key(fl.faces[i].base[0], fl.faces[i].base[1],
                                      fl.faces[i].base[2]) *
                            3 +
                        fl.faces[i].axis] = int(i);

    SegmentAccum segs;
    double eta = params.detour_eta_frac * grid.delta;

    // per-cube connections
    for (const auto& cube : grid.kept_cubes) {
        CubeAssembly ca;
        ca.cube = cube;
        for (int axis = 0; axis < 3; ++axis)
            for (int side = 0; side < 2; ++side) {
                GridFace f;
                f.axis = axis;
                f.base = cube;
                f.base[axis] += side;
                const FaceVortexSet* vs = out.find_face(f);
                if (!vs) throw OrientationMismatch();
                int sign = outward_sign(f, cube);
                for (const auto& comp : vs->components) {
                    int d = sign * comp.degree;
                    for (int c = 0; c < std::abs(d); ++c) {
                        if (d > 0) {
                            ca.cfg.positives.push_back(comp.centroid);
                            ca.faces_p.push_back(f);
                        } else {
                            ca.cfg.negatives.push_back(comp.centroid);
                            ca.faces_n.push_back(f);
                        }
                    }
                }
            }
        if (ca.cfg.positives.empty() && ca.cfg.negatives.empty()) continue;
        if (!ca.cfg.balanced()) throw OrientationMismatch();
        ca.con = connect_euclidean(ca.cfg);
        ca.index = int(out.cubes.size());

        for (int i = 0; i < int(ca.cfg.k()); ++i) {
            int j = ca.con.sigma[i];
            const Vec3& p = ca.cfg.positives[i];
            const Vec3& n = ca.cfg.negatives[j];
            uint64_t fp = GridSpec::key(ca.faces_p[i].base[0], ca.faces_p[i].base[1],
                                        ca.faces_p[i].base[2]) *
                              3 +
                          ca.faces_p[i].axis;
            uint64_t fn = GridSpec::key(ca.faces_n[j].base[0], ca.faces_n[j].base[1],
                                        ca.faces_n[j].base[2]) *
                              3 +
                          ca.faces_n[j].axis;
            if (fp == fn) {
                // in-face segment: detour through the midpoint pushed into the cube
                const GridFace& f = ca.faces_p[i];
                Vec3 gn{0, 0, 0};
                gn[f.axis] = 1;
                Vec3 inward = grid.R.apply(gn) * double(-outward_sign(f, cube));
                Vec3 mid = (p + n) * 0.5 + inward * eta;
                segs.add(n, mid, 1, ca.index);
                segs.add(mid, p, 1, ca.index);
            } else {
                segs.add(n, p, 1, ca.index);
            }
        }
        out.cubes.push_back(std::move(ca));
    }

    // boundary-region connection on the kept-union surface
    std::vector<SurfaceTerminal> posT, negT;
    for (size_t i = 0; i < fl.faces.size(); ++i) {
        if (fl.interior[i]) continue;
        const GridFace& f = fl.faces[i];
        const FaceVortexSet& vs = out.detections[out.face_lookup.at(
            GridSpec::key(f.base[0], f.base[1], f.base[2]) * 3 + f.axis)].vs;
        std::array<int, 3> below = f.base;
        below[f.axis] -= 1;
        bool keptAbove = grid.is_kept(f.base[0], f.base[1], f.base[2]);
        int unionOutward = keptAbove ? -1 : +1;
        for (const auto& comp : vs.components) {
            int dTheta = -unionOutward * comp.degree;  // inward orientation
            for (int c = 0; c < std::abs(dTheta); ++c) {
                if (dTheta > 0)
                    posT.push_back({comp.centroid, f});
                else
                    negT.push_back({comp.centroid, f});
            }
        }
    }
    if (!posT.empty() || !negT.empty()) {
        if (posT.size() != negT.size()) throw OrientationMismatch();
        SurfaceGraph graph(grid, params.steiner_per_edge, params.max_face_crossings);
        out.theta = connect_on_polyhedron(posT, negT, graph, grid, field.domain);
        out.theta_nonempty = true;
        for (size_t i = 0; i < out.theta.aug.positives.size(); ++i) {
            const auto& legs = out.theta.aug_legs[i];
            if (out.theta.aug_via_boundary[i]) {
                for (const auto& leg : legs) segs.add(leg.a, leg.b, 1, -1);
                continue;
            }
            // co-facial leg: detour outward from the kept union into Theta
            for (const auto& leg : legs) {
                Vec3 ga = grid.world_to_grid(leg.a), gb = grid.world_to_grid(leg.b);
                int planeAxis = -1;
                for (int ax = 0; ax < 3; ++ax) {
                    double ra = std::abs(ga[ax] - std::round(ga[ax]));
                    double rb = std::abs(gb[ax] - std::round(gb[ax]));
                    if (ra < 1e-7 && rb < 1e-7 &&
                        std::abs(ga[ax] - gb[ax]) < 1e-7) {
                        planeAxis = ax;
                        break;
                    }
                }
                if (planeAxis < 0) {
                    segs.add(leg.a, leg.b, 1, -1);
                    continue;
                }
                std::array<int, 3> base{int(std::floor(ga[0] + 1e-7)), int(std::floor(ga[1] + 1e-7)),
                                        int(std::floor(ga[2] + 1e-7))};
                base[planeAxis] = int(std::lround(ga[planeAxis]));
                std::array<int, 3> belowCube = base;
                belowCube[planeAxis] -= 1;
                int unionOutward = grid.is_kept(base[0], base[1], base[2]) ? -1 : +1;
                Vec3 gn{0, 0, 0};
                gn[planeAxis] = 1;
                Vec3 off = grid.R.apply(gn) * (double(unionOutward) * eta);
                Vec3 mid = (leg.a + leg.b) * 0.5 + off;
                segs.add(leg.a, mid, 1, -1);
                segs.add(mid, leg.b, 1, -1);
            }
        }
    }

    segs.emit(out.current);
    return out;
}

double support_volume(const VortexCurrentBuild& build, const GridSpec& grid, const Domain& dom) {
    double d3 = grid.delta * grid.delta * grid.delta;
    double vol = 0;
    FaceList fl = enumerate_faces(grid);
    bool thetaUsed = false;
    for (size_t i = 0; i < fl.faces.size(); ++i) {
        if (fl.interior[i]) continue;
        const FaceVortexSet* vs = build.find_face(fl.faces[i]);
        if (vs && vs->I_omega > 0) thetaUsed = true;
    }
    for (const auto& cube : grid.kept_cubes) {
        int total = 0;
        for (int axis = 0; axis < 3; ++axis)
            for (int side = 0; side < 2; ++side) {
                GridFace f;
                f.axis = axis;
                f.base = cube;
                f.base[axis] += side;
                const FaceVortexSet* vs = build.find_face(f);
                if (vs) total += vs->I_omega;
            }
        if (total > 0) vol += d3;
    }
    if (thetaUsed) vol += std::max(0.0, dom.volume() - grid.kept_volume());
    return vol;
}

namespace {

// mass of the finite-difference vorticity as a vector measure over lattice
// cells whose center satisfies the predicate
double fd_mass(const PlaquetteField& p, double h, const LatticeField3& f,
               const std::function<bool(const Vec3&)>& pred) {
    double total = 0;
    for (int k = 0; k + 1 < p.dims[2]; ++k)
        for (int j = 0; j + 1 < p.dims[1]; ++j)
            for (int i = 0; i + 1 < p.dims[0]; ++i) {
                Vec3 c = f.node_pos(i, j, k) + Vec3{0.5 * h, 0.5 * h, 0.5 * h};
                if (!pred(c)) continue;
                int cell[3] = {i, j, k};
                Vec3 v;
                for (int ax = 0; ax < 3; ++ax) {
                    int a = (ax + 1) % 3, b = (ax + 2) % 3;
                    double f0 = p.fd[ax][p.plaq_index(ax, cell[a], cell[b], cell[ax])];
                    double f1 = p.fd[ax][p.plaq_index(ax, cell[a], cell[b], cell[ax] + 1)];
                    v[ax] = 0.5 * (f0 + f1);
                }
                total += h * v.norm();
            }
    return total;
}

}  // namespace

double dirac_matching_distance(const std::vector<std::pair<Vec3, int>>& a,
                               const std::vector<std::pair<Vec3, int>>& b, double cap) {
    std::vector<Vec3> plus, minus;
    for (const auto& [p, w] : a)
        for (int c = 0; c < std::abs(w); ++c) (w > 0 ? plus : minus).push_back(p);
    for (const auto& [p, w] : b)
        for (int c = 0; c < std::abs(w); ++c) (w > 0 ? minus : plus).push_back(p);
    if (plus.size() != minus.size())
        throw std::runtime_error("dirac matching: unbalanced difference");
    int k = int(plus.size());
    if (k == 0) return 0.0;
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) cost[i][j] = std::min(dist(plus[i], minus[j]), cap);
    auto sigma = min_cost_matching(cost);
    double total = 0;
    for (int i = 0; i < k; ++i) total += cost[i][sigma[i]];
    return 2.0 * M_PI * total;
}

DualNormEstimate dual_norm_estimate(const LatticeField3& field, const VortexCurrentBuild& build,
                                    const GridSpec& grid, double eps, double gamma,
                                    uint64_t seed) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw GammaOutOfRange();
    DualNormEstimate out;
    out.gamma = gamma;

    PlaquetteField pf = discrete_vorticity(field);
    double h = field.h;

    // C0* masses
    double muAll = fd_mass(pf, h, field, [](const Vec3&) { return true; });
    double nuAll = build.current.mass();
    out.est_gamma0 = muAll + nuAll;

    // mean-value term: delta times the per-region C0* masses
    double meanValue = 0;
    for (const auto& ca : build.cubes) {
        Vec3 cLo = grid.grid_to_world(
            Vec3{double(ca.cube[0]), double(ca.cube[1]), double(ca.cube[2])});
        (void)cLo;
        auto pred = [&](const Vec3& c) {
            Vec3 g = grid.world_to_grid(c);
            return int(std::floor(g.x)) == ca.cube[0] && int(std::floor(g.y)) == ca.cube[1] &&
                   int(std::floor(g.z)) == ca.cube[2];
        };
        double muCube = fd_mass(pf, h, field, pred);
        double nuCube = 0;
        for (const auto& s : build.current.segments)
            if (s.provenance == ca.index) nuCube += 2.0 * M_PI * std::abs(s.multiplicity) * dist(s.a, s.b);
        meanValue += grid.delta * (muCube + nuCube);
    }
    if (build.theta_nonempty) {
        auto predTheta = [&](const Vec3& c) {
            Vec3 g = grid.world_to_grid(c);
            return !grid.is_kept(int(std::floor(g.x)), int(std::floor(g.y)), int(std::floor(g.z))) &&
                   field.domain.contains(c);
        };
        double muTheta = fd_mass(pf, h, field, predTheta);
        double nuTheta = 0;
        for (const auto& s : build.current.segments)
            if (s.provenance < 0) nuTheta += 2.0 * M_PI * std::abs(s.multiplicity) * dist(s.a, s.b);
        meanValue += grid.delta * (muTheta + nuTheta);
    }
    out.mean_value_term = meanValue;

    // per-face terms: exact Dirac matching + sampled field residual
    double pointPart = 0, residual = 0;
    for (const auto& det : build.detections) {
        FaceField ff = extract_face(field, grid, det.face, eps);
        FaceFluxes fx = face_fluxes(ff);
        std::vector<std::pair<Vec3, int>> Q;
        for (int j = 0; j < fx.n; ++j)
            for (int i = 0; i < fx.n; ++i) {
                double w = fx.winding[fx.idx(i, j)];
                int units = int(std::lround(w / (2.0 * M_PI)));
                if (units != 0) {
                    Vec3 ctr = ff.pos(i, j) + (ff.e_s + ff.e_t) * (0.5 * ff.spacing);
                    Q.push_back({ctr, units});
                }
            }
        std::vector<std::pair<Vec3, int>> P;
        for (const auto& comp : det.vs.components) P.push_back({comp.centroid, comp.degree});
        pointPart += 2.0 * dirac_matching_distance(Q, P);

        // residual of the smooth part against the quantized fluxes
        std::mt19937_64 rng(seed ^ (GridSpec::key(det.face.base[0], det.face.base[1],
                                                  det.face.base[2]) *
                                        3 +
                                    det.face.axis));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double side = ff.side();
        double best = 0;
        for (int t = 0; t < 100; ++t) {
            Vec3 x0 = ff.pos(0, 0) + ff.e_s * (uni(rng) * side) + ff.e_t * (uni(rng) * side);
            double r = side * (0.1 + 0.9 * uni(rng));
            double c = std::min(1.0, r);
            double pair = 0;
            for (int j = 0; j < fx.n; ++j)
                for (int i = 0; i < fx.n; ++i) {
                    Vec3 ctr = ff.pos(i, j) + (ff.e_s + ff.e_t) * (0.5 * ff.spacing);
                    double xi = c * std::max(0.0, 1.0 - dist(ctr, x0) / r);
                    double wq = 2.0 * M_PI * std::lround(fx.winding[fx.idx(i, j)] / (2.0 * M_PI));
                    pair += (fx.fd[fx.idx(i, j)] - wq) * xi;
                }
            best = std::max(best, std::abs(pair));
        }
        residual += 2.0 * best;
    }
    out.exact_point_part = pointPart;
    out.field_residual = residual;
    out.est_gamma1 = meanValue + pointPart + residual;
    out.norm_estimate = gamma == 1.0
                            ? out.est_gamma1
                            : std::pow(out.est_gamma0, 1.0 - gamma) * std::pow(out.est_gamma1, gamma);
    return out;
}

double current_truth_hausdorff(const PolyhedralCurrent& cur, const std::vector<Polyline>& truth,
                               double sample_step) {
    std::vector<Vec3> A, B;
    for (const auto& s : cur.segments) {
        double L = dist(s.a, s.b);
        int n = std::max(1, int(std::ceil(L / sample_step)));
        for (int i = 0; i <= n; ++i) A.push_back(s.a + (s.b - s.a) * (double(i) / n));
    }
    for (const auto& pl : truth)
        for (size_t i = 1; i < pl.points.size(); ++i) {
            double L = dist(pl.points[i - 1], pl.points[i]);
            int n = std::max(1, int(std::ceil(L / sample_step)));
            for (int s = 0; s <= n; ++s)
                B.push_back(pl.points[i - 1] + (pl.points[i] - pl.points[i - 1]) * (double(s) / n));
        }
    if (A.empty() || B.empty()) return A.empty() && B.empty() ? 0.0 : 1e300;
    auto oneSided = [](const std::vector<Vec3>& X, const std::vector<Vec3>& Y) {
        double worst = 0;
        for (const Vec3& x : X) {
            double best = 1e300;
            for (const Vec3& y : Y) best = std::min(best, dist(x, y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(oneSided(A, B), oneSided(B, A));
}

}  // namespace gl3d
