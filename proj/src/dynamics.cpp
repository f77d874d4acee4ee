#include "gl3d/dynamics.hpp"

#include <cmath>

namespace gl3d {

namespace {

// centered difference with one-sided fallback, over an arbitrary node field
template <typename Get>
auto ddiff(const SpaceTimeField& stf, int it, int ix, int iy, int axis, Get get)
    -> decltype(get(0, 0, 0)) {
    int c[3] = {it, ix, iy};
    int lo[3] = {it, ix, iy}, hi[3] = {it, ix, iy};
    lo[axis] -= 1;
    hi[axis] += 1;
    bool okLo = lo[axis] >= 0;
    bool okHi = hi[axis] < stf.f.dims[axis];
    if (okLo && okHi)
        return (get(hi[0], hi[1], hi[2]) - get(lo[0], lo[1], lo[2])) / (2.0 * stf.h());
    if (okHi) return (get(hi[0], hi[1], hi[2]) - get(c[0], c[1], c[2])) / stf.h();
    return (get(c[0], c[1], c[2]) - get(lo[0], lo[1], lo[2])) / stf.h();
}

}  // namespace

NodeScalarField space_vorticity(const SpaceTimeField& stf) {
    const LatticeField3& f = stf.f;
    NodeScalarField J;
    J.dims = f.dims;
    J.v.assign(f.size(), 0.0);
    auto u_at = [&](int t, int x, int y) { return f.u[f.idx(t, x, y)]; };
    // w = <grad u, iu> + (1-|u|^2) B per node, then J = curl w
    NodeVec2Field w;
    w.dims = f.dims;
    w.v.assign(f.size(), Vec2{});
    for (int iy = 0; iy < f.dims[2]; ++iy)
        for (int ix = 0; ix < f.dims[1]; ++ix)
            for (int it = 0; it < f.dims[0]; ++it) {
                cplx uc = u_at(it, ix, iy);
                cplx dux = ddiff(stf, it, ix, iy, 1, u_at);
                cplx duy = ddiff(stf, it, ix, iy, 2, u_at);
                double Bx = f.has_A() ? f.A[f.idx(it, ix, iy)][1] : 0.0;
                double By = f.has_A() ? f.A[f.idx(it, ix, iy)][2] : 0.0;
                double m = 1.0 - std::norm(uc);
                w.v[w.idx(it, ix, iy)] =
                    Vec2{std::imag(std::conj(uc) * dux) + m * Bx,
                         std::imag(std::conj(uc) * duy) + m * By};
            }
    for (int iy = 0; iy < f.dims[2]; ++iy)
        for (int ix = 0; ix < f.dims[1]; ++ix)
            for (int it = 0; it < f.dims[0]; ++it) {
                double dwy_dx =
                    ddiff(stf, it, ix, iy, 1, [&](int t, int x, int y) { return w.v[w.idx(t, x, y)].y; });
                double dwx_dy =
                    ddiff(stf, it, ix, iy, 2, [&](int t, int x, int y) { return w.v[w.idx(t, x, y)].x; });
                J.v[J.idx(it, ix, iy)] = dwy_dx - dwx_dy;
            }
    return J;
}

NodeVec2Field velocity_field(const SpaceTimeField& stf) {
    const LatticeField3& f = stf.f;
    if (f.dims[0] < 3)
        throw FieldError("velocity: at least three time slices are required");
    NodeVec2Field V;
    V.dims = f.dims;
    V.v.assign(f.size(), Vec2{});
    auto u_at = [&](int t, int x, int y) { return f.u[f.idx(t, x, y)]; };
    auto m_at = [&](int t, int x, int y) { return 1.0 - std::norm(f.u[f.idx(t, x, y)]); };
    for (int iy = 0; iy < f.dims[2]; ++iy)
        for (int ix = 0; ix < f.dims[1]; ++ix)
            for (int it = 0; it < f.dims[0]; ++it) {
                cplx dut = ddiff(stf, it, ix, iy, 0, u_at);
                cplx dux = ddiff(stf, it, ix, iy, 1, u_at);
                cplx duy = ddiff(stf, it, ix, iy, 2, u_at);
                // 2 <i du/dt, grad^perp u> with <a,b> = Re(conj(a) b) and
                // grad^perp = (-d_y, d_x)
                double t1x = 2.0 * std::real(std::conj(cplx(0, 1) * dut) * (-duy));
                double t1y = 2.0 * std::real(std::conj(cplx(0, 1) * dut) * dux);
                double t2x = 0, t2y = 0, t3x = 0, t3y = 0;
                if (f.has_A()) {
                    // d/dt[(1-|u|^2) B^perp], B^perp = (-B_y, B_x)
                    t2x = ddiff(stf, it, ix, iy, 0, [&](int t, int x, int y) {
                        return -m_at(t, x, y) * f.A[f.idx(t, x, y)][2];
                    });
                    t2y = ddiff(stf, it, ix, iy, 0, [&](int t, int x, int y) {
                        return m_at(t, x, y) * f.A[f.idx(t, x, y)][1];
                    });
                    // grad^perp[(1-|u|^2) Phi] = (-d_y, d_x) of the product
                    t3x = -ddiff(stf, it, ix, iy, 2, [&](int t, int x, int y) {
                        return m_at(t, x, y) * f.A[f.idx(t, x, y)][0];
                    });
                    t3y = ddiff(stf, it, ix, iy, 1, [&](int t, int x, int y) {
                        return m_at(t, x, y) * f.A[f.idx(t, x, y)][0];
                    });
                }
                V.v[V.idx(it, ix, iy)] = Vec2{t1x + t2x - t3x, t1y + t2y - t3y};
            }
    return V;
}

ContinuityReport continuity_residual(const SpaceTimeField& stf) {
    NodeScalarField J = space_vorticity(stf);
    NodeVec2Field V = velocity_field(stf);
    ContinuityReport rep;
    rep.residual.dims = stf.f.dims;
    rep.residual.v.assign(stf.f.size(), 0.0);
    rep.slice_l1.assign(stf.nt(), 0.0);
    double cell = stf.h() * stf.h() * stf.h();
    for (int iy = 0; iy < stf.ny(); ++iy)
        for (int ix = 0; ix < stf.nx(); ++ix)
            for (int it = 0; it < stf.nt(); ++it) {
                double dJdt = ddiff(stf, it, ix, iy, 0,
                                    [&](int t, int x, int y) { return J.v[J.idx(t, x, y)]; });
                double divV =
                    ddiff(stf, it, ix, iy, 1,
                          [&](int t, int x, int y) { return V.v[V.idx(t, x, y)].x; }) +
                    ddiff(stf, it, ix, iy, 2,
                          [&](int t, int x, int y) { return V.v[V.idx(t, x, y)].y; });
                double r = dJdt + divV;
                rep.residual.v[rep.residual.idx(it, ix, iy)] = r;
                rep.linf = std::max(rep.linf, std::abs(r));
                rep.l1 += std::abs(r) * cell;
                rep.slice_l1[it] += std::abs(r) * stf.h() * stf.h();
            }
    return rep;
}

double slice_vorticity_integral(const NodeScalarField& J, const SpaceTimeField& stf, int it) {
    double total = 0;
    double cell = stf.h() * stf.h();
    for (int iy = 0; iy < stf.ny(); ++iy)
        for (int ix = 0; ix < stf.nx(); ++ix) {
            double wx = (ix == 0 || ix == stf.nx() - 1) ? 0.5 : 1.0;
            double wy = (iy == 0 || iy == stf.ny() - 1) ? 0.5 : 1.0;
            total += wx * wy * cell * J.v[J.idx(it, ix, iy)];
        }
    return total;
}

ProductEstimateReport product_estimate_check(const SpaceTimeField& stf, const SpaceTimeWeight& fw,
                                             const SpaceTimeVector& X, double Lambda, double eps,
                                             const PolyhedralCurrent& nu, double C_logM) {
    const LatticeField3& f = stf.f;
    // compact support check: weights vanish on the outermost node layers
    for (int iy = 0; iy < stf.ny(); ++iy)
        for (int ix = 0; ix < stf.nx(); ++ix)
            for (int it = 0; it < stf.nt(); ++it) {
                bool boundary = it == 0 || ix == 0 || iy == 0 || it == stf.nt() - 1 ||
                                ix == stf.nx() - 1 || iy == stf.ny() - 1;
                if (!boundary) continue;
                Vec3 p = f.node_pos(it, ix, iy);
                Vec2 xv = X(p);
                if (std::abs(fw(p)) > 1e-12 || std::abs(xv.x) > 1e-12 || std::abs(xv.y) > 1e-12)
                    throw UnsupportedGeometry();
            }

    ProductEstimateReport rep;
    rep.M_eps = std::exp(std::sqrt(std::abs(std::log(eps))));

    // left-hand side quadrature
    double num = 0, den = 0;
    double cell = stf.h() * stf.h() * stf.h();
    auto u_at = [&](int t, int x, int y) { return f.u[f.idx(t, x, y)]; };
    for (int iy = 0; iy < stf.ny(); ++iy)
        for (int ix = 0; ix < stf.nx(); ++ix)
            for (int it = 0; it < stf.nt(); ++it) {
                Vec3 p = f.node_pos(it, ix, iy);
                double fv = fw(p);
                Vec2 xv = X(p);
                cplx uc = u_at(it, ix, iy);
                cplx dut = ddiff(stf, it, ix, iy, 0, u_at);
                cplx dux = ddiff(stf, it, ix, iy, 1, u_at);
                cplx duy = ddiff(stf, it, ix, iy, 2, u_at);
                if (f.has_A()) {
                    double Phi = f.A[f.idx(it, ix, iy)][0];
                    double Bx = f.A[f.idx(it, ix, iy)][1];
                    double By = f.A[f.idx(it, ix, iy)][2];
                    dut -= cplx(0, 1) * Phi * uc;
                    dux -= cplx(0, 1) * Bx * uc;
                    duy -= cplx(0, 1) * By * uc;
                }
                double tpart = fv * fv * std::norm(dut);
                cplx xdot = xv.x * dux + xv.y * duy;
                double xpart = std::norm(xdot);
                num += cell * tpart;
                den += cell * xpart;
            }
    if (Lambda <= 0) Lambda = den > 0 ? std::sqrt(num / std::max(den, 1e-300)) : 1.0;
    rep.lambda_balance = Lambda;
    rep.lhs = num / Lambda + Lambda * den;

    // current pairings by line quadrature along the segments
    double wedge = 0, corr = 0;
    for (const auto& s : nu.segments) {
        double L = dist(s.a, s.b);
        if (L == 0) continue;
        Vec3 tau = (s.b - s.a) / L;
        int n = std::max(4, int(std::ceil(L / (0.25 * stf.h()))));
        double acc = 0, accCorr = 0;
        for (int q = 0; q < n; ++q) {
            Vec3 p = s.a + (s.b - s.a) * ((q + 0.5) / n);
            double fv = fw(p);
            Vec2 xv = X(p);
            // tangent components along the space axes (axis1, axis2)
            acc += fv * (-xv.y * tau.y + xv.x * tau.z);
            accCorr += std::max(std::abs(tau.y), std::abs(tau.z));
        }
        wedge += 2.0 * M_PI * s.multiplicity * (L / n) * acc;
        corr += 2.0 * M_PI * std::abs(s.multiplicity) * (L / n) * accCorr;
    }
    rep.wedge_pairing = wedge;
    rep.correction = corr;
    rep.main_term =
        (std::abs(std::log(eps)) - C_logM * std::log(rep.M_eps)) * std::abs(wedge);
    rep.slack = rep.lhs - (rep.main_term - rep.correction);
    return rep;
}

}  // namespace gl3d
