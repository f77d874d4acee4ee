#include "gl3d/energy.hpp"

#include <cmath>

#include "gl3d/kernels.hpp"

namespace gl3d {

namespace {

// Centered difference with one-sided fallback at lattice/mask boundaries.
template <typename Get>
auto diff_axis(const LatticeField3& f, int ix, int iy, int iz, int axis, Get get)
    -> decltype(get(size_t(0))) {
    int c[3] = {ix, iy, iz};
    int lo[3] = {ix, iy, iz}, hi[3] = {ix, iy, iz};
    lo[axis] -= 1;
    hi[axis] += 1;
    bool okLo = lo[axis] >= 0 && f.in_domain(lo[0], lo[1], lo[2]);
    bool okHi = hi[axis] < f.dims[axis] && f.in_domain(hi[0], hi[1], hi[2]);
    if (okLo && okHi)
        return (get(f.idx(hi[0], hi[1], hi[2])) - get(f.idx(lo[0], lo[1], lo[2]))) / (2.0 * f.h);
    if (okHi) return (get(f.idx(hi[0], hi[1], hi[2])) - get(f.idx(c[0], c[1], c[2]))) / f.h;
    if (okLo) return (get(f.idx(c[0], c[1], c[2])) - get(f.idx(lo[0], lo[1], lo[2]))) / f.h;
    return get(f.idx(c[0], c[1], c[2])) * 0.0;
}

Vec3 curl_A(const LatticeField3& f, int ix, int iy, int iz) {
    if (!f.has_A()) return {0, 0, 0};
    auto dA = [&](int comp, int axis) {
        return diff_axis(f, ix, iy, iz, axis, [&](size_t i) { return f.A[i][comp]; });
    };
    return {dA(2, 1) - dA(1, 2), dA(0, 2) - dA(2, 0), dA(1, 0) - dA(0, 1)};
}

double node_density(const LatticeField3& f, double eps, int ix, int iy, int iz, bool with_A,
                    const Vec3* H_ex, double* excess) {
    size_t n = f.idx(ix, iy, iz);
    cplx uc = f.u[n];
    double grad = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
        cplx du = diff_axis(f, ix, iy, iz, axis, [&](size_t i) { return f.u[i]; });
        if (with_A && f.has_A()) du -= cplx(0, 1) * f.A[n][axis] * uc;
        grad += std::norm(du);
    }
    double mod2 = std::norm(uc);
    double pot = (1.0 - mod2) * (1.0 - mod2) / (4.0 * eps * eps);
    double mag = 0.0;
    if (with_A && f.has_A()) {
        Vec3 H = curl_A(f, ix, iy, iz);
        mag = 0.5 * H.norm2();
        if (H_ex && excess) *excess = 0.5 * (H - *H_ex).norm2();
    } else if (H_ex && excess) {
        *excess = 0.5 * H_ex->norm2();
    }
    return 0.5 * grad + pot + mag;
}

}  // namespace

std::vector<double> energy_density(const LatticeField3& f, double eps) {
    std::vector<double> d(f.size(), 0.0);
    for (int iz = 0; iz < f.dims[2]; ++iz)
        for (int iy = 0; iy < f.dims[1]; ++iy)
            for (int ix = 0; ix < f.dims[0]; ++ix) {
                if (!f.in_domain(ix, iy, iz)) continue;
                d[f.idx(ix, iy, iz)] = node_density(f, eps, ix, iy, iz, true, nullptr, nullptr);
            }
    return d;
}

EnergyReport energy(const LatticeField3& f, double eps, const NodePredicate& region,
                    std::optional<Vec3> H_ex) {
    if (eps <= 0) throw FieldError("energy: eps must be positive");
    const int nx = f.dims[0], ny = f.dims[1], nz = f.dims[2];
    std::vector<uint8_t> sel(f.size(), 0);
    size_t nsel = 0;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                if (f.in_domain(ix, iy, iz) && region(ix, iy, iz)) {
                    sel[f.idx(ix, iy, iz)] = 1;
                    ++nsel;
                }
    if (nsel == 0) throw EmptyRegion();

    // Node values; computed once, cells average their corners.
    std::vector<double> dF(f.size(), 0.0), dE(f.size(), 0.0), dX;
    if (H_ex) dX.assign(f.size(), 0.0);
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                size_t n = f.idx(ix, iy, iz);
                if (!sel[n]) continue;
                double ex = 0.0;
                dF[n] = node_density(f, eps, ix, iy, iz, true, H_ex ? &*H_ex : nullptr,
                                     H_ex ? &ex : nullptr);
                if (H_ex) dX[n] = ex;
                dE[n] = node_density(f, eps, ix, iy, iz, false, nullptr, nullptr);
            }

    EnergyReport rep;
    double cellVol = f.h * f.h * f.h;
    double excess = 0.0;
    for (int iz = 0; iz < nz - 1; ++iz)
        for (int iy = 0; iy < ny - 1; ++iy)
            for (int ix = 0; ix < nx - 1; ++ix) {
                int cnt = 0;
                double sF = 0, sE = 0, sX = 0;
                for (int dz = 0; dz < 2; ++dz)
                    for (int dy = 0; dy < 2; ++dy)
                        for (int dx = 0; dx < 2; ++dx) {
                            size_t n = f.idx(ix + dx, iy + dy, iz + dz);
                            if (!sel[n]) continue;
                            ++cnt;
                            sF += dF[n];
                            sE += dE[n];
                            if (H_ex) sX += dX[n];
                        }
                if (cnt == 0) continue;
                double w = cellVol * (double(cnt) / 8.0);
                rep.F_eps += w * (sF / cnt);
                rep.E_eps += w * (sE / cnt);
                if (H_ex) excess += w * (sX / cnt);
                rep.region_volume += w;
            }
    if (H_ex) rep.GL_eps_excess = excess;
    return rep;
}

size_t PlaquetteField::plaq_index(int c, int i, int j, int k) const {
    auto cnt = plaq_counts(c);
    return size_t(i) + size_t(cnt[0]) * (size_t(j) + size_t(cnt[1]) * size_t(k));
}

std::array<int, 3> PlaquetteField::plaq_counts(int c) const {
    int a = (c + 1) % 3, b = (c + 2) % 3;
    return {dims[a] - 1, dims[b] - 1, dims[c]};
}

namespace {

double wrap_pi(double a) {
    // principal branch in (-pi, pi]
    double w = std::remainder(a, 2.0 * M_PI);
    if (w <= -M_PI) w += 2.0 * M_PI;
    return w;
}

}  // namespace

PlaquetteField discrete_vorticity(const LatticeField3& f) {
    PlaquetteField out;
    out.dims = f.dims;
    const bool hasA = f.has_A();

    // j(u,A)+A per node, for the finite-difference estimator.
    std::vector<std::array<double, 3>> w(f.size());
    for (int iz = 0; iz < f.dims[2]; ++iz)
        for (int iy = 0; iy < f.dims[1]; ++iy)
            for (int ix = 0; ix < f.dims[0]; ++ix) {
                size_t n = f.idx(ix, iy, iz);
                if (!f.in_domain(ix, iy, iz)) {
                    w[n] = {0, 0, 0};
                    continue;
                }
                cplx uc = f.u[n];
                for (int axis = 0; axis < 3; ++axis) {
                    cplx du = diff_axis(f, ix, iy, iz, axis, [&](size_t i) { return f.u[i]; });
                    double Ak = hasA ? f.A[n][axis] : 0.0;
                    cplx Du = du - cplx(0, 1) * Ak * uc;
                    w[n][axis] = std::imag(std::conj(uc) * Du) + Ak;
                }
            }

    // Per-edge phase steps in the canonical +axis direction; plaquettes use
    // them with signs, so reversed traversal is the exact negation and the
    // per-cell closedness identity holds without tie-breaking artifacts.
    std::array<std::vector<double>, 3> steps;
    for (int axis = 0; axis < 3; ++axis) {
        steps[axis].assign(f.size(), 0.0);
        for (int iz = 0; iz < f.dims[2]; ++iz)
            for (int iy = 0; iy < f.dims[1]; ++iy)
                for (int ix = 0; ix < f.dims[0]; ++ix) {
                    int tx = ix + (axis == 0), ty = iy + (axis == 1), tz = iz + (axis == 2);
                    if (tx >= f.dims[0] || ty >= f.dims[1] || tz >= f.dims[2]) continue;
                    if (!f.in_domain(ix, iy, iz) || !f.in_domain(tx, ty, tz)) continue;
                    size_t s = f.idx(ix, iy, iz), t = f.idx(tx, ty, tz);
                    if (std::norm(f.u[s]) == 0.0 || std::norm(f.u[t]) == 0.0) throw ZeroModulus();
                    double gauge = 0.0;
                    if (hasA) gauge = 0.5 * (f.A[s][axis] + f.A[t][axis]) * f.h;
                    steps[axis][s] = wrap_pi(std::arg(f.u[t] * std::conj(f.u[s])) - gauge);
                }
    }

    for (int c = 0; c < 3; ++c) {
        auto cnt = out.plaq_counts(c);
        out.winding[c].assign(size_t(cnt[0]) * cnt[1] * cnt[2], 0.0);
        out.fd[c].assign(out.winding[c].size(), 0.0);
        int a = (c + 1) % 3, b = (c + 2) % 3;
        for (int k = 0; k < cnt[2]; ++k)
            for (int j = 0; j < cnt[1]; ++j)
                for (int i = 0; i < cnt[0]; ++i) {
                    int base[3];
                    base[a] = i;
                    base[b] = j;
                    base[c] = k;
                    // corner loop n0 -> n1 -> n2 -> n3 -> n0
                    int corner[4][3];
                    for (int q = 0; q < 4; ++q)
                        for (int d = 0; d < 3; ++d) corner[q][d] = base[d];
                    corner[1][a] += 1;
                    corner[2][a] += 1;
                    corner[2][b] += 1;
                    corner[3][b] += 1;
                    bool allIn = true;
                    size_t ni[4];
                    for (int q = 0; q < 4; ++q) {
                        if (!f.in_domain(corner[q][0], corner[q][1], corner[q][2])) allIn = false;
                        ni[q] = f.idx(corner[q][0], corner[q][1], corner[q][2]);
                    }
                    size_t pi = out.plaq_index(c, i, j, k);
                    if (!allIn) continue;
                    double wind = steps[a][ni[0]] + steps[b][ni[1]] - steps[a][ni[3]] - steps[b][ni[0]];
                    double circ = 0.0;
                    for (int q = 0; q < 4; ++q) {
                        size_t s = ni[q], t = ni[(q + 1) % 4];
                        int axis = (q % 2 == 0) ? a : b;
                        double dir = (q < 2) ? 1.0 : -1.0;
                        circ += 0.5 * (w[s][axis] + w[t][axis]) * f.h * dir;
                    }
                    out.winding[c][pi] = wind;
                    out.fd[c][pi] = circ;
                }
    }
    return out;
}

double cell_flux_divergence(const PlaquetteField& p, int i, int j, int k) {
    // Outward flux over the six faces of cell (i,j,k). For normal axis c with
    // in-plane axes (a,b), the plaquette index order is (ia, ib, ic).
    auto flux = [&](int c, int ia, int ib, int ic) { return p.winding[c][p.plaq_index(c, ia, ib, ic)]; };
    int cell[3] = {i, j, k};
    double div = 0.0;
    for (int c = 0; c < 3; ++c) {
        int a = (c + 1) % 3, b = (c + 2) % 3;
        div += flux(c, cell[a], cell[b], cell[c] + 1) - flux(c, cell[a], cell[b], cell[c]);
    }
    return div;
}

double vorticity_mass(const PlaquetteField& p, double h) {
    double total = 0.0;
    int nx = p.dims[0], ny = p.dims[1], nz = p.dims[2];
    for (int k = 0; k + 1 < nz; ++k)
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i) {
                int cell[3] = {i, j, k};
                Vec3 v;
                for (int c = 0; c < 3; ++c) {
                    int a = (c + 1) % 3, b = (c + 2) % 3;
                    double f0 = p.winding[c][p.plaq_index(c, cell[a], cell[b], cell[c])];
                    double f1 = p.winding[c][p.plaq_index(c, cell[a], cell[b], cell[c] + 1)];
                    v[c] = 0.5 * (f0 + f1);
                }
                total += h * v.norm();
            }
    return total;
}

}  // namespace gl3d
