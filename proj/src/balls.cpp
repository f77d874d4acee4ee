#include "gl3d/balls.hpp"

#include <algorithm>
#include <cmath>

namespace gl3d {

double ball_kernel(double t, double eps, double C0) {
    if (t <= 0) return 0.0;
    double t1 = M_PI * C0 * eps;
    if (t <= t1) return t / (C0 * eps);
    double B = M_PI - M_PI * std::log(M_PI * C0);  // continuity at t1
    return M_PI * std::log(t / eps) + B;
}

double ball_kernel_log_deviation(double C0) {
    // deviation extremes sit at t -> eps+ and at the branch point
    double atEps = 1.0 / C0;                         // (eps/(C0 eps)) - pi log 1
    double atT1 = M_PI * std::log(M_PI * C0) - M_PI; // |B|
    return std::max(atEps, atT1);
}

namespace {

struct GrowState {
    std::vector<Ball2> balls;
    std::vector<MergeEvent> merges;
};

// Merge any overlapping/tangent pair into the smallest enclosing disk until
// the family is disjoint.
void merge_pass(GrowState& st) {
    bool again = true;
    while (again) {
        again = false;
        for (size_t i = 0; i < st.balls.size() && !again; ++i)
            for (size_t j = i + 1; j < st.balls.size() && !again; ++j) {
                Ball2& A = st.balls[i];
                Ball2& B = st.balls[j];
                double d = (A.center - B.center).norm();
                if (d > A.radius + B.radius) continue;
                MergeEvent ev{A.center, B.center, A.radius, B.radius,
                              A.degree, B.degree, A.accumulated, B.accumulated};
                st.merges.push_back(ev);
                Ball2 M;
                if (d + B.radius <= A.radius) {
                    M = A;  // B inside A
                } else if (d + A.radius <= B.radius) {
                    M = B;
                } else {
                    M.radius = 0.5 * (d + A.radius + B.radius);
                    double t = (M.radius - A.radius) / d;
                    M.center = A.center + (B.center - A.center) * t;
                }
                M.degree = A.degree + B.degree;
                M.accumulated = A.accumulated + B.accumulated;
                st.balls[i] = M;
                st.balls.erase(st.balls.begin() + j);
                again = true;
            }
    }
}

double total_radius(const GrowState& st) {
    double r = 0;
    for (const auto& b : st.balls) r += b.radius;
    return r;
}

BallFamily grow_on_samples(const FaceField& face, const FaceVortexSet& vs, double eps,
                           double final_radius, const BallGrowthParams& params,
                           double face_energy) {
    BallFamily fam;
    fam.eps = eps;
    fam.C0 = params.C0;
    fam.M_eps = face_energy;
    if (vs.components.empty()) return fam;

    double side = face.side();
    double cap = params.radius_cap_fraction * side * std::sqrt(2.0);
    double r1 = std::min(final_radius, cap);

    GrowState st;
    for (const auto& c : vs.components) {
        Ball2 b;
        Vec3 rel = c.centroid - face.origin3;
        b.center = Vec2{rel.dot(face.e_s), rel.dot(face.e_t)};
        b.radius = c.diameter + 2.0 * face.spacing;
        b.degree = c.degree;
        b.accumulated = std::abs(c.degree) * ball_kernel(b.radius / std::max(1, std::abs(c.degree)), eps, params.C0);
        st.balls.push_back(b);
    }
    merge_pass(st);

    while (total_radius(st) < r1) {
        double f = params.growth_factor;
        // accumulate annulus bounds, then dilate in lockstep
        for (auto& b : st.balls) {
            int ad = std::max(1, std::abs(b.degree));
            double lo = ball_kernel(b.radius / ad, eps, params.C0);
            double hi = ball_kernel(b.radius * f / ad, eps, params.C0);
            b.accumulated += std::abs(b.degree) * (hi - lo);
            b.radius *= f;
        }
        merge_pass(st);
        for (const auto& b : st.balls) {
            if (b.degree == 0) continue;
            double ds = b.center.x, dt = b.center.y;
            double margin = std::min({ds, dt, side - ds, side - dt});
            if (b.radius > margin) throw BoundaryCollision();
        }
    }

    fam.balls = st.balls;
    fam.merges = st.merges;
    fam.total_radius = total_radius(st);
    for (const auto& b : st.balls) fam.lower_bound += b.accumulated;
    fam.lower_bound = std::max(0.0, fam.lower_bound);
    return fam;
}

}  // namespace

BallFamily grow_balls(const FaceField& face, double eps, double final_radius,
                      const BallGrowthParams& params) {
    FaceVortexSet vs = detect_components(face);
    double E = face_energy_free(face, eps);
    return grow_on_samples(face, vs, eps, final_radius, params, E);
}

BallFamily grow_balls_metric(const FaceField& face, double eps, const FaceMetric& metric,
                             double final_radius, const BallGrowthParams& params) {
    if (metric.g_tt <= 0 || metric.g_ww <= 0)
        throw std::runtime_error("balls: metric coefficients must be positive");
    double ss = std::sqrt(metric.g_tt), st = std::sqrt(metric.g_ww);
    if (ss == 1.0 && st == 1.0) {
        return grow_balls(face, eps, final_radius, params);
    }
    // Resample onto a square in rescaled coordinates. The rescaled face spans
    // ss*side x st*side; use a square of the larger side with the same sample
    // count, sampling back through the inverse map where defined.
    int n = face.n;
    double sideS = ss * face.side(), sideT = st * face.side();
    double side = std::max(sideS, sideT);
    FaceField rs;
    rs.n = n;
    rs.spacing = side / n;
    rs.origin3 = {0, 0, 0};
    rs.e_s = {1, 0, 0};
    rs.e_t = {0, 1, 0};
    rs.u.resize(size_t(n + 1) * (n + 1));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            // rescaled point (si, tj); preimage in original face coords
            double sp = i * rs.spacing, tp = j * rs.spacing;
            double s0 = sp / ss, t0 = tp / st;
            if (s0 <= face.side() && t0 <= face.side()) {
                // bilinear on original samples
                double gi = s0 / face.spacing, gj = t0 / face.spacing;
                int i0 = std::clamp(int(std::floor(gi)), 0, n - 1);
                int j0 = std::clamp(int(std::floor(gj)), 0, n - 1);
                double fi = gi - i0, fj = gj - j0;
                cplx v00 = face.u[face.idx(i0, j0)], v10 = face.u[face.idx(i0 + 1, j0)];
                cplx v01 = face.u[face.idx(i0, j0 + 1)], v11 = face.u[face.idx(i0 + 1, j0 + 1)];
                rs.u[rs.idx(i, j)] = (v00 * (1 - fi) + v10 * fi) * (1 - fj) +
                                     (v01 * (1 - fi) + v11 * fi) * fj;
            } else {
                rs.u[rs.idx(i, j)] = cplx(1, 0);  // padding far from the data
            }
        }
    BallFamily fam = grow_balls(rs, eps, final_radius, params);
    // map centers back to original face coordinates (ellipse centers)
    for (auto& b : fam.balls) {
        b.center = Vec2{b.center.x / ss, b.center.y / st};
    }
    return fam;
}

double weighted_slice_energy(const FaceField& face, double eps, const FaceMetric& metric) {
    double gs = metric.g_tt, gt = metric.g_ww;
    double jac = std::sqrt(gs * gt);
    double total = 0.0;
    double cell = face.spacing * face.spacing;
    int n = face.n;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            cplx uc = face.u[face.idx(i, j)];
            double g2[2] = {0, 0};
            for (int axis = 0; axis < 2; ++axis) {
                int i1 = i + (axis == 0), j1 = j + (axis == 1);
                int i0 = i - (axis == 0), j0 = j - (axis == 1);
                cplx du;
                if (i1 <= n && j1 <= n && i0 >= 0 && j0 >= 0)
                    du = (face.u[face.idx(i1, j1)] - face.u[face.idx(i0, j0)]) / (2.0 * face.spacing);
                else if (i1 <= n && j1 <= n)
                    du = (face.u[face.idx(i1, j1)] - uc) / face.spacing;
                else
                    du = (uc - face.u[face.idx(i0, j0)]) / face.spacing;
                g2[axis] = std::norm(du);
            }
            double pot = std::pow(1.0 - std::norm(uc), 2) / (4.0 * eps * eps);
            double wi = (i == 0 || i == n) ? 0.5 : 1.0;
            double wj = (j == 0 || j == n) ? 0.5 : 1.0;
            total += wi * wj * cell * jac * (0.5 * (g2[0] / gs + g2[1] / gt) + pot);
        }
    return total;
}

}  // namespace gl3d
