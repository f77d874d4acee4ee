#include "gl3d/face.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <random>

namespace gl3d {

namespace {

double wrap_pi(double a) {
    double w = std::remainder(a, 2.0 * M_PI);
    if (w <= -M_PI) w += 2.0 * M_PI;
    return w;
}

// Phase steps cached per edge in the canonical (+s / +t) direction; cells
// traverse them with signs, so the reversed edge is the exact negation and
// telescoping cancellation holds even when a step sits exactly at +-pi.
struct EdgeSteps {
    int n = 0;
    std::vector<double> H;  // (i,j) -> (i+1,j), i in [0,n), j in [0,n]
    std::vector<double> V;  // (i,j) -> (i,j+1), i in [0,n], j in [0,n)
    double h(int i, int j) const { return H[size_t(i) + size_t(n) * j]; }
    double v(int i, int j) const { return V[size_t(i) + size_t(n + 1) * j]; }
    double cell(int i, int j) const { return h(i, j) + v(i + 1, j) - h(i, j + 1) - v(i, j); }
};

EdgeSteps edge_steps(const FaceField& f) {
    EdgeSteps es;
    es.n = f.n;
    es.H.resize(size_t(f.n) * (f.n + 1));
    es.V.resize(size_t(f.n + 1) * f.n);
    auto step = [&](size_t s, size_t t, int axis) {
        double gauge = 0.0;
        if (f.has_A()) {
            double As = axis == 0 ? f.A[s].x : f.A[s].y;
            double At = axis == 0 ? f.A[t].x : f.A[t].y;
            gauge = 0.5 * (As + At) * f.spacing;
        }
        return wrap_pi(std::arg(f.u[t] * std::conj(f.u[s])) - gauge);
    };
    for (int j = 0; j <= f.n; ++j)
        for (int i = 0; i < f.n; ++i)
            es.H[size_t(i) + size_t(f.n) * j] = step(f.idx(i, j), f.idx(i + 1, j), 0);
    for (int j = 0; j < f.n; ++j)
        for (int i = 0; i <= f.n; ++i)
            es.V[size_t(i) + size_t(f.n + 1) * j] = step(f.idx(i, j), f.idx(i, j + 1), 1);
    return es;
}

}  // namespace

FaceField extract_face(const LatticeField3& f, const GridSpec& g, const GridFace& face,
                       double eps, int oversample) {
    FaceField out;
    out.id = face;
    int a = (face.axis + 1) % 3, b = (face.axis + 2) % 3;
    double pitch = std::min(f.h, g.delta / 16.0);
    if (eps > 0 && eps < f.h) pitch = std::min(pitch, f.h / 3.0);
    out.n = std::max(16, int(std::ceil(g.delta / pitch))) * oversample;
    out.spacing = g.delta / out.n;
    Vec3 base{double(face.base[0]), double(face.base[1]), double(face.base[2])};
    out.origin3 = g.grid_to_world(base);
    Vec3 ea, eb;
    Vec3 ga{0, 0, 0}, gb{0, 0, 0};
    ga[a] = 1;
    gb[b] = 1;
    ea = g.R.apply(ga);
    eb = g.R.apply(gb);
    out.e_s = ea;
    out.e_t = eb;
    out.orientation = +1;  // normal = R * e_axis by the cyclic convention
    out.u.resize(size_t(out.n + 1) * (out.n + 1));
    if (f.has_A()) out.A.resize(out.u.size());
    for (int j = 0; j <= out.n; ++j)
        for (int i = 0; i <= out.n; ++i) {
            Vec3 w = out.pos(i, j);
            out.u[out.idx(i, j)] = f.interp_u(w);
            if (f.has_A()) {
                auto Aw = f.interp_A(w);
                Vec3 Av{Aw[0], Aw[1], Aw[2]};
                out.A[out.idx(i, j)] = Vec2{Av.dot(out.e_s), Av.dot(out.e_t)};
            }
        }
    return out;
}

FaceField make_face(const Vec3& origin3, const Vec3& e_s, const Vec3& e_t, double side, int n,
                    const std::function<cplx(const Vec3&)>& sample_u,
                    const std::function<Vec2(const Vec3&)>* sample_A) {
    FaceField out;
    out.n = n;
    out.spacing = side / n;
    out.origin3 = origin3;
    out.e_s = e_s;
    out.e_t = e_t;
    out.u.resize(size_t(n + 1) * (n + 1));
    if (sample_A) out.A.resize(out.u.size());
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            Vec3 w = out.pos(i, j);
            out.u[out.idx(i, j)] = sample_u(w);
            if (sample_A) out.A[out.idx(i, j)] = (*sample_A)(w);
        }
    return out;
}

FaceVortexSet detect_components(const FaceField& f) {
    const int N = f.n + 1;
    auto low = [&](int i, int j) { return std::abs(f.u[f.idx(i, j)]) <= 0.5; };

    for (int i = 0; i < N; ++i)
        if (low(i, 0) || low(i, f.n) || low(0, i) || low(f.n, i)) throw BoundaryTouch();

    std::vector<int> label(size_t(N) * N, -1);
    int nlab = 0;
    std::vector<std::vector<std::pair<int, int>>> comps;
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            if (!low(i, j) || label[f.idx(i, j)] >= 0) continue;
            comps.emplace_back();
            std::queue<std::pair<int, int>> q;
            q.push({i, j});
            label[f.idx(i, j)] = nlab;
            while (!q.empty()) {
                auto [ci, cj] = q.front();
                q.pop();
                comps[nlab].push_back({ci, cj});
                const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                for (int d = 0; d < 4; ++d) {
                    int ni = ci + di[d], nj = cj + dj[d];
                    if (ni < 0 || nj < 0 || ni >= N || nj >= N) continue;
                    if (!low(ni, nj) || label[f.idx(ni, nj)] >= 0) continue;
                    label[f.idx(ni, nj)] = nlab;
                    q.push({ni, nj});
                }
            }
            ++nlab;
        }

    FaceVortexSet out;
    EdgeSteps es = edge_steps(f);
    // Outer contour winding over all cells (degree additivity reference).
    for (int j = 0; j < f.n; ++j)
        for (int i = 0; i < f.n; ++i) out.face_total_winding += es.cell(i, j);

    // Components whose samples come within Chebyshev distance 2 share their
    // winding contours (the contour of one would thread the low-modulus set
    // of the other); at this resolution they are one component and are merged
    // before degrees are computed.
    std::vector<int> cluster(comps.size());
    for (size_t a = 0; a < comps.size(); ++a) cluster[a] = int(a);
    std::function<int(int)> find = [&](int x) {
        while (cluster[x] != x) x = cluster[x] = cluster[cluster[x]];
        return x;
    };
    for (size_t a = 0; a < comps.size(); ++a)
        for (size_t b = a + 1; b < comps.size(); ++b) {
            bool close = false;
            for (auto [ia, ja] : comps[a]) {
                for (auto [ib, jb] : comps[b])
                    if (std::abs(ia - ib) <= 2 && std::abs(ja - jb) <= 2) {
                        close = true;
                        break;
                    }
                if (close) break;
            }
            if (close) cluster[find(int(a))] = find(int(b));
        }
    std::vector<std::vector<std::pair<int, int>>> merged;
    {
        std::unordered_map<int, int> slot;
        for (size_t a = 0; a < comps.size(); ++a) {
            int r = find(int(a));
            auto it = slot.find(r);
            if (it == slot.end()) {
                slot[r] = int(merged.size());
                merged.push_back(comps[a]);
            } else {
                auto& dst = merged[it->second];
                dst.insert(dst.end(), comps[a].begin(), comps[a].end());
            }
        }
    }
    const auto& groups = merged;
    // membership map for contour-cleanliness checks
    std::vector<int> glabel(size_t(N) * N, -1);
    for (size_t gi = 0; gi < groups.size(); ++gi)
        for (auto [i, j] : groups[gi]) glabel[f.idx(i, j)] = int(gi);

    for (const auto& comp : groups) {
        // Cells incident to the component; their winding sum telescopes to the
        // contour one sample outside the component.
        std::vector<char> inC(size_t(f.n) * f.n, 0);
        for (auto [i, j] : comp)
            for (int dj = -1; dj <= 0; ++dj)
                for (int di = -1; di <= 0; ++di) {
                    int ci = i + di, cj = j + dj;
                    if (ci < 0 || cj < 0 || ci >= f.n || cj >= f.n) continue;
                    inC[size_t(ci) + size_t(f.n) * cj] = 1;
                }
        // Contour samples (adjacent to the component, outside it) must not
        // vanish; the cells' own zero nodes cancel pairwise.
        double wind = 0.0;
        for (int cj = 0; cj < f.n; ++cj)
            for (int ci = 0; ci < f.n; ++ci)
                if (inC[size_t(ci) + size_t(f.n) * cj]) wind += es.cell(ci, cj);
        for (auto [i, j] : comp) {
            const int di[8] = {1, -1, 0, 0, 1, 1, -1, -1}, dj[8] = {0, 0, 1, -1, 1, -1, 1, -1};
            for (int d = 0; d < 8; ++d) {
                int ni = i + di[d], nj = j + dj[d];
                if (ni < 0 || nj < 0 || ni >= N || nj >= N) continue;
                if (glabel[f.idx(ni, nj)] == glabel[f.idx(i, j)]) continue;
                if (std::abs(f.u[f.idx(ni, nj)]) < 1e-12) throw ZeroOnContour();
            }
        }
        int deg = int(std::lround(wind / (2.0 * M_PI)));

        FaceVortex v;
        v.degree = deg;
        v.sample_count = int(comp.size());
        Vec3 c{0, 0, 0};
        for (auto [i, j] : comp) c += f.pos(i, j);
        v.centroid = c / double(comp.size());
        for (auto [i, j] : comp) v.radius = std::max(v.radius, dist(f.pos(i, j), v.centroid));
        for (size_t a = 0; a < comp.size(); ++a)
            for (size_t b = a + 1; b < comp.size(); ++b)
                v.diameter = std::max(
                    v.diameter, dist(f.pos(comp[a].first, comp[a].second),
                                     f.pos(comp[b].first, comp[b].second)));
        // component gradient energy (covariant), sample-weighted
        for (auto [i, j] : comp) {
            cplx uc = f.u[f.idx(i, j)];
            for (int axis = 0; axis < 2; ++axis) {
                int i1 = i + (axis == 0), j1 = j + (axis == 1);
                int i0 = i - (axis == 0), j0 = j - (axis == 1);
                cplx du;
                if (i1 <= f.n && j1 <= f.n && i0 >= 0 && j0 >= 0)
                    du = (f.u[f.idx(i1, j1)] - f.u[f.idx(i0, j0)]) / (2.0 * f.spacing);
                else if (i1 <= f.n && j1 <= f.n)
                    du = (f.u[f.idx(i1, j1)] - uc) / f.spacing;
                else
                    du = (uc - f.u[f.idx(i0, j0)]) / f.spacing;
                if (f.has_A()) {
                    double Ak = axis == 0 ? f.A[f.idx(i, j)].x : f.A[f.idx(i, j)].y;
                    du -= cplx(0, 1) * Ak * uc;
                }
                v.grad_energy += std::norm(du) * f.spacing * f.spacing;
            }
        }
        if (deg != 0) {
            out.components.push_back(v);
            out.r_omega += v.diameter;
            out.I_omega += 1;
        } else {
            out.zero_degree_components += 1;
        }
    }
    return out;
}

FaceFluxes face_fluxes(const FaceField& f) {
    FaceFluxes out;
    out.n = f.n;
    out.winding.assign(size_t(f.n) * f.n, 0.0);
    out.fd.assign(out.winding.size(), 0.0);

    // in-plane current j(u,A)+A per sample
    std::vector<Vec2> w(f.u.size());
    for (int j = 0; j <= f.n; ++j)
        for (int i = 0; i <= f.n; ++i) {
            cplx uc = f.u[f.idx(i, j)];
            Vec2 val;
            for (int axis = 0; axis < 2; ++axis) {
                int i1 = i + (axis == 0), j1 = j + (axis == 1);
                int i0 = i - (axis == 0), j0 = j - (axis == 1);
                cplx du;
                if (i1 <= f.n && j1 <= f.n && i0 >= 0 && j0 >= 0)
                    du = (f.u[f.idx(i1, j1)] - f.u[f.idx(i0, j0)]) / (2.0 * f.spacing);
                else if (i1 <= f.n && j1 <= f.n)
                    du = (f.u[f.idx(i1, j1)] - uc) / f.spacing;
                else
                    du = (uc - f.u[f.idx(i0, j0)]) / f.spacing;
                double Ak = 0.0;
                if (f.has_A()) Ak = axis == 0 ? f.A[f.idx(i, j)].x : f.A[f.idx(i, j)].y;
                cplx Du = du - cplx(0, 1) * Ak * uc;
                double comp = std::imag(std::conj(uc) * Du) + Ak;
                (axis == 0 ? val.x : val.y) = comp;
            }
            w[f.idx(i, j)] = val;
        }

    EdgeSteps es = edge_steps(f);
    for (int j = 0; j < f.n; ++j)
        for (int i = 0; i < f.n; ++i) {
            out.winding[out.idx(i, j)] = es.cell(i, j);
            size_t n0 = f.idx(i, j), n1 = f.idx(i + 1, j), n2 = f.idx(i + 1, j + 1),
                   n3 = f.idx(i, j + 1);
            double circ = 0.0;
            circ += 0.5 * (w[n0].x + w[n1].x) * f.spacing;
            circ += 0.5 * (w[n1].y + w[n2].y) * f.spacing;
            circ -= 0.5 * (w[n2].x + w[n3].x) * f.spacing;
            circ -= 0.5 * (w[n3].y + w[n0].y) * f.spacing;
            out.fd[out.idx(i, j)] = circ;
        }
    return out;
}

namespace {

// 2D density |grad_A u|^2 + (1/2 eps^2)(1-|u|^2)^2 + |curl A|^2 at a sample.
double density2d(const FaceField& f, double eps, int i, int j) {
    cplx uc = f.u[f.idx(i, j)];
    double grad = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
        int i1 = i + (axis == 0), j1 = j + (axis == 1);
        int i0 = i - (axis == 0), j0 = j - (axis == 1);
        cplx du;
        if (i1 <= f.n && j1 <= f.n && i0 >= 0 && j0 >= 0)
            du = (f.u[f.idx(i1, j1)] - f.u[f.idx(i0, j0)]) / (2.0 * f.spacing);
        else if (i1 <= f.n && j1 <= f.n)
            du = (f.u[f.idx(i1, j1)] - uc) / f.spacing;
        else
            du = (uc - f.u[f.idx(i0, j0)]) / f.spacing;
        if (f.has_A()) {
            double Ak = axis == 0 ? f.A[f.idx(i, j)].x : f.A[f.idx(i, j)].y;
            du -= cplx(0, 1) * Ak * uc;
        }
        grad += std::norm(du);
    }
    double pot = std::pow(1.0 - std::norm(uc), 2) / (2.0 * eps * eps);
    double mag = 0.0;
    if (f.has_A()) {
        auto dA = [&](bool comp_y, int axis) {
            int i1 = i + (axis == 0), j1 = j + (axis == 1);
            int i0 = i - (axis == 0), j0 = j - (axis == 1);
            auto val = [&](int ii, int jj) {
                return comp_y ? f.A[f.idx(ii, jj)].y : f.A[f.idx(ii, jj)].x;
            };
            if (i1 <= f.n && j1 <= f.n && i0 >= 0 && j0 >= 0)
                return (val(i1, j1) - val(i0, j0)) / (2.0 * f.spacing);
            if (i1 <= f.n && j1 <= f.n) return (val(i1, j1) - val(i, j)) / f.spacing;
            return (val(i, j) - val(i0, j0)) / f.spacing;
        };
        double curl = dA(true, 0) - dA(false, 1);
        mag = curl * curl;
    }
    return grad + pot + mag;
}

}  // namespace

FaceEnergy face_energy_2d(const FaceField& f, double eps) {
    FaceEnergy out;
    double cell = f.spacing * f.spacing;
    for (int j = 0; j <= f.n; ++j)
        for (int i = 0; i <= f.n; ++i) {
            double wi = (i == 0 || i == f.n) ? 0.5 : 1.0;
            double wj = (j == 0 || j == f.n) ? 0.5 : 1.0;
            out.interior += wi * wj * cell * density2d(f, eps, i, j);
        }
    for (int i = 0; i <= f.n; ++i) {
        double w = (i == 0 || i == f.n) ? 0.5 : 1.0;
        out.boundary += w * f.spacing *
                        (density2d(f, eps, i, 0) + density2d(f, eps, i, f.n) +
                         density2d(f, eps, 0, i) + density2d(f, eps, f.n, i));
    }
    return out;
}

double face_energy_free(const FaceField& f, double eps) {
    double total = 0.0;
    double cell = f.spacing * f.spacing;
    for (int j = 0; j <= f.n; ++j)
        for (int i = 0; i <= f.n; ++i) {
            cplx uc = f.u[f.idx(i, j)];
            double grad = 0.0;
            for (int axis = 0; axis < 2; ++axis) {
                int i1 = i + (axis == 0), j1 = j + (axis == 1);
                int i0 = i - (axis == 0), j0 = j - (axis == 1);
                cplx du;
                if (i1 <= f.n && j1 <= f.n && i0 >= 0 && j0 >= 0)
                    du = (f.u[f.idx(i1, j1)] - f.u[f.idx(i0, j0)]) / (2.0 * f.spacing);
                else if (i1 <= f.n && j1 <= f.n)
                    du = (f.u[f.idx(i1, j1)] - uc) / f.spacing;
                else
                    du = (uc - f.u[f.idx(i0, j0)]) / f.spacing;
                grad += std::norm(du);
            }
            double pot = std::pow(1.0 - std::norm(uc), 2) / (4.0 * eps * eps);
            double wi = (i == 0 || i == f.n) ? 0.5 : 1.0;
            double wj = (j == 0 || j == f.n) ? 0.5 : 1.0;
            total += wi * wj * cell * (0.5 * grad + pot);
        }
    return total;
}

Estimate2D verify_2d_estimate(const FaceField& f, const FaceVortexSet& vs, double eps,
                              uint64_t seed, int family_size) {
    FaceFluxes fx = face_fluxes(f);
    FaceEnergy fe = face_energy_2d(f, eps);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double side = f.side();

    Estimate2D out;
    out.test_functions = family_size;
    for (int t = 0; t < family_size; ++t) {
        // Alternate tent bumps and clamped linear ramps, unit C^{0,1} norm.
        Vec3 x0 = f.pos(0, 0) + f.e_s * (uni(rng) * side) + f.e_t * (uni(rng) * side);
        double pairing = 0.0;
        if (t % 2 == 0) {
            double r = side * (0.1 + 0.9 * uni(rng));
            double c = std::min(1.0, r);
            auto xi = [&](const Vec3& p) {
                return c * std::max(0.0, 1.0 - dist(p, x0) / r);
            };
            for (int j = 0; j < f.n; ++j)
                for (int i = 0; i < f.n; ++i) {
                    Vec3 ctr = f.pos(i, j) + (f.e_s + f.e_t) * (0.5 * f.spacing);
                    pairing += fx.fd[fx.idx(i, j)] * xi(ctr);
                }
            for (const auto& v : vs.components) pairing -= 2.0 * M_PI * v.degree * xi(v.centroid);
        } else {
            double ang = 2.0 * M_PI * uni(rng);
            Vec3 dir = f.e_s * std::cos(ang) + f.e_t * std::sin(ang);
            double s = side * (0.05 + 0.45 * uni(rng));
            s = std::min(s, 1.0);
            auto xi = [&](const Vec3& p) {
                double v = (p - x0).dot(dir);
                return std::clamp(v, -s, s);
            };
            for (int j = 0; j < f.n; ++j)
                for (int i = 0; i < f.n; ++i) {
                    Vec3 ctr = f.pos(i, j) + (f.e_s + f.e_t) * (0.5 * f.spacing);
                    pairing += fx.fd[fx.idx(i, j)] * xi(ctr);
                }
            for (const auto& v : vs.components) pairing -= 2.0 * M_PI * v.degree * xi(v.centroid);
        }
        out.lhs_norm_estimate = std::max(out.lhs_norm_estimate, std::abs(pairing));
    }
    out.rhs_bound = std::max(eps, vs.r_omega) * (1.0 + fe.interior + fe.boundary);
    out.ratio = out.rhs_bound > 0 ? out.lhs_norm_estimate / out.rhs_bound : 0.0;
    return out;
}

}  // namespace gl3d
