#include "gl3d/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gl3d {

double SignedConfig::diameter() const {
    auto pts = all_points();
    double D = 0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) D = std::max(D, dist(pts[i], pts[j]));
    return D;
}

std::vector<int> min_cost_matching(const std::vector<std::vector<double>>& cost) {
    int n = int(cost.size());
    if (n == 0) return {};
    const double INF = std::numeric_limits<double>::infinity();
    // Hungarian algorithm with potentials, 1-based helpers.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, INF);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = INF;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> sigma(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) sigma[p[j] - 1] = j - 1;
    return sigma;
}

std::vector<double> matching_potentials(const std::vector<std::vector<double>>& dist2k,
                                        const std::vector<int>& sigma) {
    int k = int(sigma.size());
    int m = 2 * k;
    if (m == 0) return {};
    // Shortest distances from a virtual source (0 to every node) in the graph
    // with metric edges d(a,b) and matched edges n_sigma(i) -> p_i of weight
    // -d(p_i, n_sigma(i)). Optimality of sigma rules out negative cycles.
    std::vector<double> pi(m, 0.0);
    bool changed = true;
    int pass = 0;
    while (changed && pass <= 2 * m + 2) {
        changed = false;
        ++pass;
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                if (a == b) continue;
                double cand = pi[a] + dist2k[a][b];
                if (cand < pi[b] - 1e-15) {
                    pi[b] = cand;
                    changed = true;
                }
            }
        for (int i = 0; i < k; ++i) {
            int np = k + sigma[i];
            double w = -dist2k[i][np];
            if (pi[np] + w < pi[i] - 1e-15) {
                pi[i] = pi[np] + w;
                changed = true;
            }
        }
    }
    std::vector<double> zeta(m);
    for (int a = 0; a < m; ++a) zeta[a] = -pi[a];
    return zeta;
}

namespace {

Connection connect_generic(const SignedConfig& cfg, MetricTag tag,
                           const std::function<double(const Vec3&, const Vec3&)>& d) {
    if (!cfg.balanced()) throw Unbalanced();
    Connection con;
    con.metric = tag;
    int k = int(cfg.k());
    if (k == 0) return con;
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) cost[i][j] = d(cfg.positives[i], cfg.negatives[j]);
    con.sigma = min_cost_matching(cost);
    con.length = 0;
    for (int i = 0; i < k; ++i) con.length += cost[i][con.sigma[i]];

    auto pts = cfg.all_points();
    std::vector<std::vector<double>> dist2k(2 * k, std::vector<double>(2 * k, 0.0));
    for (int a = 0; a < 2 * k; ++a)
        for (int b = 0; b < 2 * k; ++b) dist2k[a][b] = d(pts[a], pts[b]);
    auto zeta = matching_potentials(dist2k, con.sigma);
    con.zeta_p.assign(zeta.begin(), zeta.begin() + k);
    con.zeta_n.assign(zeta.begin() + k, zeta.end());
    return con;
}

}  // namespace

Connection connect_euclidean(const SignedConfig& cfg) {
    Connection con = connect_generic(cfg, MetricTag::Euclid,
                                     [](const Vec3& a, const Vec3& b) { return dist(a, b); });
    int k = int(cfg.k());
    con.legs.resize(k);
    con.via_boundary.assign(k, 0);
    for (int i = 0; i < k; ++i)
        con.legs[i] = {{cfg.negatives[con.sigma[i]], cfg.positives[i]}};
    return con;
}

Connection connect_through_boundary(const SignedConfig& cfg, const Domain& dom) {
    for (const Vec3& p : cfg.positives)
        if (!dom.contains(p)) throw PointOutsideDomain();
    for (const Vec3& p : cfg.negatives)
        if (!dom.contains(p)) throw PointOutsideDomain();
    Connection con = connect_generic(cfg, MetricTag::DBoundary, [&](const Vec3& a, const Vec3& b) {
        return boundary_pseudometric(dom, a, b);
    });
    int k = int(cfg.k());
    con.legs.resize(k);
    con.via_boundary.assign(k, 0);
    for (int i = 0; i < k; ++i) {
        const Vec3& p = cfg.positives[i];
        const Vec3& n = cfg.negatives[con.sigma[i]];
        double euclid = dist(p, n);
        double via = dom.boundary_distance(p) + dom.boundary_distance(n);
        if (euclid <= via) {  // ties resolved toward the Euclidean branch
            con.legs[i] = {{n, p}};
        } else {
            con.via_boundary[i] = 1;
            // current leaves the domain at n's side and re-enters at p's:
            // boundary of [n -> bp(n)] + [bp(p) -> p] is +delta_p - delta_n
            con.legs[i] = {{n, dom.nearest_boundary_point(n)},
                           {dom.nearest_boundary_point(p), p}};
        }
    }
    return con;
}

Connection connect_with_matrix(const SignedConfig& cfg, MetricTag tag,
                               const std::vector<std::vector<double>>& dist2k) {
    if (!cfg.balanced()) throw Unbalanced();
    Connection con;
    con.metric = tag;
    int k = int(cfg.k());
    if (k == 0) return con;
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) cost[i][j] = dist2k[i][k + j];
    con.sigma = min_cost_matching(cost);
    con.length = 0;
    for (int i = 0; i < k; ++i) con.length += cost[i][con.sigma[i]];
    auto zeta = matching_potentials(dist2k, con.sigma);
    con.zeta_p.assign(zeta.begin(), zeta.begin() + k);
    con.zeta_n.assign(zeta.begin() + k, zeta.end());
    return con;
}

double brute_force_length(const SignedConfig& cfg,
                          const std::function<double(const Vec3&, const Vec3&)>& d,
                          std::vector<int>* best) {
    if (!cfg.balanced()) throw Unbalanced();
    int k = int(cfg.k());
    if (k == 0) return 0.0;
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    double bestLen = std::numeric_limits<double>::infinity();
    do {
        double L = 0;
        for (int i = 0; i < k; ++i) L += d(cfg.positives[i], cfg.negatives[perm[i]]);
        if (L < bestLen) {
            bestLen = L;
            if (best) *best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return bestLen;
}

}  // namespace gl3d
