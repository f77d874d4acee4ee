#include "gl3d/mollify.hpp"

#include <algorithm>
#include <cmath>

namespace gl3d {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.resize(n);
    w.resize(n);
    for (int i = 0; i < n; ++i) {
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        double dp = n * (t * p0 - p1) / (t * t - 1.0);
        x[i] = t;
        w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

double bump(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }
double bump_dr(double r) {
    if (r >= 1.0) return 0.0;
    double s = 1.0 - r * r;
    return bump(r) * (-2.0 * r / (s * s));
}

}  // namespace

MollifiedZeta mollify(const ZetaExact& z, double lambda, double rho, int nq) {
    MollifiedZeta mz;
    mz.base = z;
    mz.lambda = lambda;
    mz.rho = rho;
    int k = std::max(1, z.k);
    double lambda0 = std::pow(std::min(1.0, 0.1) * std::pow(2.0 * k, -6.0), 1.0 / rho);
    mz.lambda_warning = lambda > lambda0;

    std::vector<double> gx, gw;
    gauss_legendre(nq, gx, gw);
    // radial on [0,1] with r^2 weight, polar in cos(theta), uniform azimuth
    double N = 0.0;
    std::vector<double> rawW;
    for (int ir = 0; ir < nq; ++ir) {
        double r = 0.5 * (gx[ir] + 1.0);
        double wr = 0.5 * gw[ir] * r * r;
        for (int im = 0; im < nq; ++im) {
            double mu = gx[im];
            double wm = gw[im];
            double smu = std::sqrt(std::max(0.0, 1.0 - mu * mu));
            for (int ip = 0; ip < nq; ++ip) {
                double phi = 2.0 * M_PI * (ip + 0.5) / nq;
                double wp = 2.0 * M_PI / nq;
                Vec3 v{r * smu * std::cos(phi), r * smu * std::sin(phi), r * mu};
                double W = wr * wm * wp;
                mz.offsets.push_back(v * lambda);
                rawW.push_back(W);
                N += W * bump(r);
            }
        }
    }
    mz.weights.resize(rawW.size());
    mz.gradphi_w.resize(rawW.size());
    for (size_t q = 0; q < rawW.size(); ++q) {
        double r = mz.offsets[q].norm() / lambda;
        mz.weights[q] = rawW[q] * bump(r) / N;
        Vec3 dir = r > 0 ? mz.offsets[q] / (r * lambda) : Vec3{0, 0, 0};
        mz.gradphi_w[q] = dir * (rawW[q] * bump_dr(r) / (N * lambda));
    }
    return mz;
}

double MollifiedZeta::Eval::hess_norm() const {
    // spectral norm of the symmetrized 3x3 matrix by a few power iterations
    double S[9];
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) S[3 * a + b] = 0.5 * (hess[3 * a + b] + hess[3 * b + a]);
    Vec3 v{1.0, 0.7, 0.4};
    double len = 0.0;
    for (int it = 0; it < 60; ++it) {
        Vec3 w{S[0] * v.x + S[1] * v.y + S[2] * v.z, S[3] * v.x + S[4] * v.y + S[5] * v.z,
               S[6] * v.x + S[7] * v.y + S[8] * v.z};
        len = w.norm();
        if (len == 0) return 0;
        v = w / len;
    }
    return len;
}

double MollifiedZeta::eval(const Vec3& x) const {
    size_t n = offsets.size();
    std::vector<double> xs(n), ys(n), zs(n), val(n);
    for (size_t q = 0; q < n; ++q) {
        xs[q] = x.x - offsets[q].x;
        ys[q] = x.y - offsets[q].y;
        zs[q] = x.z - offsets[q].z;
    }
    base.eval_batch(xs.data(), ys.data(), zs.data(), n, val.data(), nullptr);
    double acc = 0.0;
    for (size_t q = 0; q < n; ++q) acc += weights[q] * val[q];
    return acc;
}

Vec3 MollifiedZeta::grad(const Vec3& x) const { return eval_full(x).grad; }

MollifiedZeta::Eval MollifiedZeta::eval_full(const Vec3& x) const {
    size_t n = offsets.size();
    std::vector<double> xs(n), ys(n), zs(n), val(n);
    std::vector<Vec3> gr(n);
    for (size_t q = 0; q < n; ++q) {
        xs[q] = x.x - offsets[q].x;
        ys[q] = x.y - offsets[q].y;
        zs[q] = x.z - offsets[q].z;
    }
    base.eval_batch(xs.data(), ys.data(), zs.data(), n, val.data(), gr.data());
    Eval out;
    for (size_t q = 0; q < n; ++q) {
        out.val += weights[q] * val[q];
        out.grad += gr[q] * weights[q];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) out.hess[3 * a + b] += gradphi_w[q][a] * gr[q][b];
    }
    return out;
}

std::vector<Interval> merge_intervals(std::vector<Interval> iv) {
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    std::vector<Interval> out;
    for (const auto& i : iv) {
        if (!out.empty() && i.lo <= out.back().hi) {
            out.back().hi = std::max(out.back().hi, i.hi);
        } else {
            out.push_back(i);
        }
    }
    return out;
}

double intervals_measure(std::vector<Interval> iv) {
    double m = 0;
    for (const auto& i : merge_intervals(std::move(iv))) m += i.hi - i.lo;
    return m;
}

CriticalSetReport critical_set_probe(const MollifiedZeta& mz, double kappa,
                                     const ProbeParams& params) {
    double thetaSq = std::pow(mz.lambda, 2.0 * mz.rho);
    if (kappa >= thetaSq / 3.0) throw KappaTooLarge();
    const ZetaExact& z = mz.base;
    int k = z.k;
    double plateauW = params.plateau_width > 0 ? params.plateau_width : 2.0 * mz.lambda;

    CriticalSetReport rep;
    rep.budget = size_t(std::llround(std::pow(2.0 * std::max(1, k), 8.0)));
    rep.cover_radius = params.cover_C * mz.lambda / (thetaSq - 3.0 * kappa);

    // slab planes between positive pairs
    struct Plane {
        Vec3 nu;
        double beta;   // plane {<y,nu> = beta}
        double level;  // constant value of the competing affine pieces there
    };
    std::vector<Plane> planes;
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            Vec3 d = z.points[i] - z.points[j];
            double n = d.norm();
            if (n < 1e-14) continue;
            Vec3 nu = d / n;
            double beta = 0.5 * ((z.points[i] + z.points[j]).dot(nu) -
                                 (z.zeta_star[i] - z.zeta_star[j]));
            double level = 0.5 * (z.zeta_star[i] + z.zeta_star[j] - n);
            planes.push_back({nu, beta, level});
        }

    // probe lattice over the inflated bounding box of the points
    Vec3 lo = z.points.empty() ? Vec3{0, 0, 0} : z.points[0], hi = lo;
    for (const Vec3& p : z.points)
        for (int d = 0; d < 3; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    double diam = std::max(1e-6, dist(lo, hi));
    double margin = params.margin_factor * diam + 4.0 * mz.lambda;
    lo -= Vec3{margin, margin, margin};
    hi += Vec3{margin, margin, margin};

    int G = params.grid_per_axis;
    for (int iz = 0; iz <= G; ++iz)
        for (int iy = 0; iy <= G; ++iy)
            for (int ix = 0; ix <= G; ++ix) {
                Vec3 x{lo.x + (hi.x - lo.x) * ix / G, lo.y + (hi.y - lo.y) * iy / G,
                       lo.z + (hi.z - lo.z) * iz / G};
                bool excluded = false;
                for (const Plane& pl : planes)
                    if (std::abs(x.dot(pl.nu) - pl.beta) <= 2.0 * mz.lambda) {
                        excluded = true;
                        break;
                    }
                if (!excluded && z.active_plateau_margin(x) <= plateauW) excluded = true;
                if (excluded) continue;
                Vec3 g = mz.grad(x);
                if (g.norm() < kappa) rep.bad_points.push_back(x);
            }

    // greedy cover
    std::vector<char> covered(rep.bad_points.size(), 0);
    for (size_t i = 0; i < rep.bad_points.size(); ++i) {
        if (covered[i]) continue;
        rep.cover_centers.push_back(rep.bad_points[i]);
        for (size_t j = i; j < rep.bad_points.size(); ++j)
            if (!covered[j] && dist(rep.bad_points[i], rep.bad_points[j]) <= rep.cover_radius)
                covered[j] = 1;
    }

    // excluded level values: cover images, slab levels, plateau levels
    std::vector<Interval> iv;
    for (const Vec3& c : rep.cover_centers) {
        double v = mz.eval(c);
        iv.push_back({v - rep.cover_radius, v + rep.cover_radius});
    }
    std::vector<Interval> planeIv;
    for (const Plane& pl : planes)
        planeIv.push_back({pl.level - 2.0 * mz.lambda, pl.level + 2.0 * mz.lambda});
    for (int i = 0; i < k; ++i)
        planeIv.push_back({z.zeta_star[i] - 2.0 * mz.lambda, z.zeta_star[i]});
    rep.plane_level_measure = intervals_measure(planeIv);
    rep.plane_level_budget = 2.0 * mz.lambda * double(k) * double(k);
    iv.insert(iv.end(), planeIv.begin(), planeIv.end());
    rep.excluded_levels = merge_intervals(iv);
    return rep;
}

}  // namespace gl3d
