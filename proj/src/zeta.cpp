#include "gl3d/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gl3d {

namespace {

constexpr double kThetaCap = 0.1;  // angle-separation construction breaks down past this

// A pair direction with its endpoint indices; extra (boundary-normal)
// directions carry p = q = -1.
struct IndexedDir {
    Vec3 v;
    int p = -1, q = -1;
};

// Triples of pair directions spanning only 3 distinct points are exactly
// coplanar (their determinant vanishes identically), so the separation
// constraint only applies to triples spanning at least 4 points. Extra
// directions always participate.
bool det_applicable(const IndexedDir& a, const IndexedDir& b, const IndexedDir& c) {
    std::vector<int> pts;
    int extras = 0;
    for (const IndexedDir* d : {&a, &b, &c}) {
        if (d->p < 0) {
            ++extras;
            continue;
        }
        pts.push_back(d->p);
        pts.push_back(d->q);
    }
    if (extras > 0) return true;
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts.size() >= 4;
}

bool admissible(const std::vector<Vec3>& placed, const Vec3& cand, int candIdx,
                const std::vector<IndexedDir>& old, double theta) {
    std::vector<IndexedDir> fresh;
    fresh.reserve(placed.size());
    for (size_t s = 0; s < placed.size(); ++s) {
        Vec3 d = placed[s] - cand;
        double n = d.norm();
        if (n < 1e-14) return false;
        fresh.push_back({d / n, int(s), candIdx});
    }
    auto crossOk = [&](const Vec3& u, const Vec3& v) { return u.cross(v).norm() >= theta; };
    auto detOk = [&](const IndexedDir& u, const IndexedDir& v, const IndexedDir& w) {
        if (!det_applicable(u, v, w)) return true;
        return std::abs(det3(u.v, v.v, w.v)) >= theta * theta;
    };
    for (size_t s = 0; s < fresh.size(); ++s) {
        for (size_t t = s + 1; t < fresh.size(); ++t)
            if (!crossOk(fresh[s].v, fresh[t].v)) return false;
        for (const IndexedDir& d : old)
            if (!crossOk(fresh[s].v, d.v)) return false;
    }
    for (size_t s = 0; s < fresh.size(); ++s) {
        for (size_t a = 0; a < old.size(); ++a)
            for (size_t b = a + 1; b < old.size(); ++b)
                if (!detOk(fresh[s], old[a], old[b])) return false;
        for (size_t t = s + 1; t < fresh.size(); ++t) {
            for (size_t a = 0; a < old.size(); ++a)
                if (!detOk(fresh[s], fresh[t], old[a])) return false;
            for (size_t r = t + 1; r < fresh.size(); ++r)
                if (!detOk(fresh[s], fresh[t], fresh[r])) return false;
        }
    }
    return true;
}

}  // namespace

DisplacementResult displace_points(const SignedConfig& cfg, double theta, uint64_t seed,
                                   const std::vector<Vec3>& extra_dirs) {
    if (theta >= kThetaCap) throw ThetaTooLarge();
    DisplacementResult res;
    res.theta = theta;
    res.displaced = cfg;
    int k = int(cfg.k());
    int m = 2 * k;
    if (m < 2) return res;
    res.theta_above_m6 = theta >= std::pow(double(m), -6.0);

    std::vector<Vec3> pts = cfg.all_points();
    double D = cfg.diameter();
    if (D <= 0) throw std::runtime_error("displace: all points coincide");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    std::vector<Vec3> placed;
    std::vector<IndexedDir> dirs;  // pair directions among placed points + extras
    for (const Vec3& e : extra_dirs) dirs.push_back({e.normalized(), -1, -1});
    std::vector<Vec3> out(m);

    auto place = [&](int l, const Vec3& b) {
        for (size_t s = 0; s < placed.size(); ++s)
            dirs.push_back({(placed[s] - b).normalized(), int(s), int(placed.size())});
        placed.push_back(b);
        out[l] = b;
    };

    for (int l = 0; l < m; ++l) {
        const Vec3& a = pts[l];
        if (l == 0) {
            place(l, a);
            continue;
        }
        // escalating sample radii; attempt the original position first
        if (admissible(placed, a, l, dirs, theta)) {
            place(l, a);
            continue;
        }
        double L = double(l + 1);
        double radii[4] = {3.0 * L * D * theta, 6.0 * L * L * L * D * theta,
                           6.0 * std::pow(L, 5) * D * theta, 12.0 * std::pow(L, 5) * D * theta};
        bool done = false;
        for (double r : radii) {
            for (int attempt = 0; attempt < 60 && !done; ++attempt) {
                Vec3 dir{gauss(rng), gauss(rng), gauss(rng)};
                dir = dir.normalized();
                Vec3 cand = a + dir * (r * std::cbrt(uni(rng)));
                if (admissible(placed, cand, l, dirs, theta)) {
                    double disp = dist(cand, a);
                    res.max_displacement = std::max(res.max_displacement, disp);
                    res.realized_C =
                        std::max(res.realized_C, disp / (D * std::pow(L, 5) * theta));
                    place(l, cand);
                    done = true;
                }
            }
            if (done) break;
        }
        if (!done) throw DisplacementFailed();
    }
    for (int i = 0; i < k; ++i) res.displaced.positives[i] = out[i];
    for (int i = 0; i < k; ++i) res.displaced.negatives[i] = out[k + i];
    return res;
}

BoundaryOracle analytic_boundary_oracle(const Domain& dom) {
    BoundaryOracle o;
    o.dist = [dom](const Vec3& x) { return dom.boundary_distance(x); };
    o.grad = [dom](const Vec3& x) {
        if (dom.kind == DomainKind::Ball) {
            Vec3 u = (x - dom.center);
            double n = u.norm();
            return n > 0 ? u * (-1.0 / n) : Vec3{1, 0, 0};
        }
        // box: gradient of min over the six face distances
        double d[6] = {x.x - dom.lo.x, dom.hi.x - x.x, x.y - dom.lo.y,
                       dom.hi.y - x.y, x.z - dom.lo.z, dom.hi.z - x.z};
        int best = 0;
        for (int i = 1; i < 6; ++i)
            if (d[i] < d[best]) best = i;
        static const Vec3 g[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        return g[best];
    };
    return o;
}

ZetaExact build_zeta(const SignedConfig& displaced, const std::vector<double>& zeta_p,
                     const std::vector<double>& zeta_n, ZetaVariant variant,
                     const BoundaryOracle* oracle) {
    if (variant == ZetaVariant::Boundary && !oracle) throw VariantMismatch();
    ZetaExact z;
    z.variant = variant;
    z.k = int(displaced.k());
    z.points = displaced.all_points();
    z.zeta_star = zeta_p;
    z.zeta_star.insert(z.zeta_star.end(), zeta_n.begin(), zeta_n.end());
    int k = z.k, m = 2 * k;
    z.nu.assign(size_t(k) * m, Vec3{0, 0, 0});
    z.table.k = k;
    z.table.m = m;
    z.table.nx.assign(size_t(k) * m, 0.0);
    z.table.ny.assign(size_t(k) * m, 0.0);
    z.table.nz.assign(size_t(k) * m, 0.0);
    z.table.c.assign(size_t(k) * m, 0.0);
    z.table.zstar.assign(zeta_p.begin(), zeta_p.end());
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < m; ++j) {
            Vec3 d = z.points[i] - z.points[j];
            double n = d.norm();
            size_t q = size_t(i) * m + j;
            if (n > 0) {
                Vec3 dir = d / n;
                z.nu[q] = dir;
                z.table.nx[q] = dir.x;
                z.table.ny[q] = dir.y;
                z.table.nz[q] = dir.z;
                z.table.c[q] = z.points[i].dot(dir);
            }
        }
    if (variant == ZetaVariant::Boundary) {
        z.boundary = *oracle;
        z.db_points.resize(k);
        for (int i = 0; i < k; ++i) z.db_points[i] = z.boundary.dist(z.points[i]);
    }
    return z;
}

double ZetaExact::eval(const Vec3& x) const {
    double v;
    Vec3 g;
    double xs = x.x, ys = x.y, zs = x.z;
    if (variant == ZetaVariant::Euclid) {
        int32_t act;
        kernels::active().affine_max(table, &xs, &ys, &zs, 1, &v, &act);
        return v;
    }
    // boundary variant, scalar
    double dbx = boundary.dist(x);
    double best = 0;
    for (int i = 0; i < k; ++i) {
        double inner = 0.0;
        for (int j = 0; j < 2 * k; ++j) {
            size_t q = size_t(i) * 2 * k + j;
            double dij = table.c[q] - (table.nx[q] * xs + table.ny[q] * ys + table.nz[q] * zs);
            if (j == 0 || dij > inner) inner = dij;
        }
        double d_i = std::min(std::max(inner, db_points[i] - dbx), db_points[i] + dbx);
        double zi = table.zstar[i] - d_i;
        if (i == 0 || zi > best) best = zi;
    }
    return best;
}

Vec3 ZetaExact::grad(const Vec3& x) const {
    double val;
    Vec3 g;
    eval_batch(&x.x, &x.y, &x.z, 1, &val, &g);
    return g;
}

void ZetaExact::eval_batch(const double* xs, const double* ys, const double* zs, size_t n,
                           double* val, Vec3* grad_out) const {
    if (variant == ZetaVariant::Euclid) {
        std::vector<int32_t> act(n);
        kernels::active().affine_max(table, xs, ys, zs, n, val, act.data());
        if (grad_out)
            for (size_t p = 0; p < n; ++p) grad_out[p] = nu[size_t(act[p])];
        return;
    }
    for (size_t p = 0; p < n; ++p) {
        Vec3 x{xs[p], ys[p], zs[p]};
        double dbx = boundary.dist(x);
        double best = 0;
        Vec3 bestGrad{0, 0, 0};
        for (int i = 0; i < k; ++i) {
            double inner = 0.0;
            int innerJ = 0;
            for (int j = 0; j < 2 * k; ++j) {
                size_t q = size_t(i) * 2 * k + j;
                double dij = table.c[q] - (table.nx[q] * x.x + table.ny[q] * x.y + table.nz[q] * x.z);
                if (j == 0 || dij > inner) {
                    inner = dij;
                    innerJ = j;
                }
            }
            double lower = db_points[i] - dbx, upper = db_points[i] + dbx;
            double d_i;
            Vec3 gi;
            if (inner >= lower) {
                d_i = inner;
                gi = nu[size_t(i) * 2 * k + innerJ];  // -grad(d) = +nu
            } else {
                d_i = lower;
                gi = boundary.grad(x);  // -grad(db(p)-db(x)) = +grad db
            }
            if (d_i > upper) {
                d_i = upper;
                gi = boundary.grad(x) * -1.0;
            }
            double zi = table.zstar[i] - d_i;
            if (i == 0 || zi > best) {
                best = zi;
                bestGrad = gi;
            }
        }
        val[p] = best;
        if (grad_out) grad_out[p] = bestGrad;
    }
}

double ZetaExact::active_plateau_margin(const Vec3& x) const {
    double best = 0;
    double margin = 0;
    for (int i = 0; i < k; ++i) {
        double inner = 0.0;
        for (int j = 0; j < 2 * k; ++j) {
            size_t q = size_t(i) * 2 * k + j;
            double dij = table.c[q] - (table.nx[q] * x.x + table.ny[q] * x.y + table.nz[q] * x.z);
            if (j == 0 || dij > inner) inner = dij;
        }
        double zi = table.zstar[i] - inner;
        if (i == 0 || zi > best) {
            best = zi;
            margin = inner;
        }
    }
    return margin;
}

ZetaBuild build_zeta_pipeline(const SignedConfig& cfg, double theta, ZetaVariant variant,
                              const Domain* dom, const BoundaryOracle* oracle, uint64_t seed,
                              const std::vector<Vec3>& extra_dirs) {
    ZetaBuild out;
    out.displacement = displace_points(cfg, theta, seed, extra_dirs);
    const SignedConfig& d = out.displacement.displaced;
    BoundaryOracle oa;
    const BoundaryOracle* usedOracle = oracle;
    if (variant == ZetaVariant::Boundary) {
        if (!oracle) {
            if (!dom) throw VariantMismatch();
            oa = analytic_boundary_oracle(*dom);
            usedOracle = &oa;
        }
        // match under the boundary pseudometric of the supplied oracle
        auto pts = d.all_points();
        int k = int(d.k());
        std::vector<std::vector<double>> dist2k(2 * k, std::vector<double>(2 * k));
        for (int a = 0; a < 2 * k; ++a)
            for (int b = 0; b < 2 * k; ++b) {
                double via = usedOracle->dist(pts[a]) + usedOracle->dist(pts[b]);
                dist2k[a][b] = std::min(dist(pts[a], pts[b]), via);
            }
        out.connection = connect_with_matrix(d, MetricTag::DBoundary, dist2k);
        out.zeta = build_zeta(d, out.connection.zeta_p, out.connection.zeta_n, variant, usedOracle);
    } else {
        out.connection = connect_euclidean(d);
        out.zeta = build_zeta(d, out.connection.zeta_p, out.connection.zeta_n, variant, nullptr);
    }
    return out;
}

}  // namespace gl3d
