#include "gl3d/certify.hpp"

#include <algorithm>
#include <cmath>

namespace gl3d {

double exact_degree_integral(std::vector<double> zp, std::vector<double> zn) {
    // breakpoints partition the t axis; d(t) is constant between them
    std::vector<std::pair<double, int>> bps;
    for (double v : zp) bps.push_back({v, +1});
    for (double v : zn) bps.push_back({v, -1});
    std::sort(bps.begin(), bps.end());
    if (bps.empty()) return 0.0;
    double integral = 0.0;
    int above_p = 0, above_n = 0;
    // walk from the top breakpoint down
    for (int i = int(bps.size()) - 1; i > 0; --i) {
        if (bps[i].second > 0)
            ++above_p;
        else
            ++above_n;
        integral += double(above_p - above_n) * (bps[i].first - bps[i - 1].first);
    }
    return integral;
}

namespace {

// area of the intersection polygon between plane {<g, x - c> = off} and the
// axis-aligned box [lo, hi]
double plane_box_area(const Vec3& lo, const Vec3& hi, const Vec3& g, const Vec3& c, double off) {
    double gn = g.norm();
    if (gn < 1e-14) return 0.0;
    Vec3 n = g / gn;
    double d0 = (c.dot(n)) + off / gn;  // plane: <n, x> = d0
    // collect edge intersections
    std::vector<Vec3> pts;
    const double L[3] = {lo.x, lo.y, lo.z}, H[3] = {hi.x, hi.y, hi.z};
    for (int axis = 0; axis < 3; ++axis) {
        int a = (axis + 1) % 3, b = (axis + 2) % 3;
        for (int sa = 0; sa < 2; ++sa)
            for (int sb = 0; sb < 2; ++sb) {
                Vec3 p0, p1;
                p0[axis] = L[axis];
                p1[axis] = H[axis];
                p0[a] = p1[a] = sa ? H[a] : L[a];
                p0[b] = p1[b] = sb ? H[b] : L[b];
                double v0 = p0.dot(n) - d0, v1 = p1.dot(n) - d0;
                if ((v0 <= 0 && v1 > 0) || (v0 > 0 && v1 <= 0)) {
                    double t = v0 / (v0 - v1);
                    pts.push_back(p0 + (p1 - p0) * t);
                }
            }
    }
    if (pts.size() < 3) return 0.0;
    // order by angle in the plane
    Vec3 ref = (pts[0] - pts[1]).normalized();
    Vec3 up = n.cross(ref);
    Vec3 ctr{0, 0, 0};
    for (const Vec3& p : pts) ctr += p;
    ctr = ctr / double(pts.size());
    std::sort(pts.begin(), pts.end(), [&](const Vec3& p, const Vec3& q) {
        double ap = std::atan2((p - ctr).dot(up), (p - ctr).dot(ref));
        double aq = std::atan2((q - ctr).dot(up), (q - ctr).dot(ref));
        return ap < aq;
    });
    double area = 0;
    for (size_t i = 1; i + 1 < pts.size(); ++i)
        area += 0.5 * (pts[i] - pts[0]).cross(pts[i + 1] - pts[0]).norm();
    return area;
}

double interp_density_world(const LatticeField3& f, const std::vector<double>& density,
                            const Vec3& p) {
    auto clamp01 = [](double t) { return t < 0 ? 0.0 : (t > 1 ? 1.0 : t); };
    double gx = (p.x - f.origin.x) / f.h;
    double gy = (p.y - f.origin.y) / f.h;
    double gz = (p.z - f.origin.z) / f.h;
    int ix = std::clamp(int(std::floor(gx)), 0, f.dims[0] - 2);
    int iy = std::clamp(int(std::floor(gy)), 0, f.dims[1] - 2);
    int iz = std::clamp(int(std::floor(gz)), 0, f.dims[2] - 2);
    double fx = clamp01(gx - ix), fy = clamp01(gy - iy), fz = clamp01(gz - iz);
    auto at = [&](int dx, int dy, int dz) { return density[f.idx(ix + dx, iy + dy, iz + dz)]; };
    double v00 = at(0, 0, 0) * (1 - fx) + at(1, 0, 0) * fx;
    double v10 = at(0, 1, 0) * (1 - fx) + at(1, 1, 0) * fx;
    double v01 = at(0, 0, 1) * (1 - fx) + at(1, 0, 1) * fx;
    double v11 = at(0, 1, 1) * (1 - fx) + at(1, 1, 1) * fx;
    return (v00 * (1 - fy) + v10 * fy) * (1 - fz) + (v01 * (1 - fy) + v11 * fy) * fz;
}

}  // namespace

double level_surface_energy(const LatticeField3& field, const std::vector<double>& density,
                            const MollifiedZeta& mz, const GridSpec& grid,
                            const std::array<int, 3>& cube, double t) {
    // iterate lattice cells whose center lies in the grid cube
    Vec3 cLo = grid.grid_to_world(Vec3{double(cube[0]), double(cube[1]), double(cube[2])});
    Vec3 cHi = grid.grid_to_world(
        Vec3{double(cube[0] + 1), double(cube[1] + 1), double(cube[2] + 1)});
    Vec3 bLo{std::min(cLo.x, cHi.x), std::min(cLo.y, cHi.y), std::min(cLo.z, cHi.z)};
    Vec3 bHi{std::max(cLo.x, cHi.x), std::max(cLo.y, cHi.y), std::max(cLo.z, cHi.z)};
    // (for rotated grids the bounding box over-covers; membership test below)
    double h = field.h;
    int ix0 = std::max(0, int(std::floor((bLo.x - field.origin.x) / h)) - 1);
    int iy0 = std::max(0, int(std::floor((bLo.y - field.origin.y) / h)) - 1);
    int iz0 = std::max(0, int(std::floor((bLo.z - field.origin.z) / h)) - 1);
    int ix1 = std::min(field.dims[0] - 2, int(std::ceil((bHi.x - field.origin.x) / h)));
    int iy1 = std::min(field.dims[1] - 2, int(std::ceil((bHi.y - field.origin.y) / h)));
    int iz1 = std::min(field.dims[2] - 2, int(std::ceil((bHi.z - field.origin.z) / h)));

    double total = 0.0;
    for (int iz = iz0; iz <= iz1; ++iz)
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix) {
                Vec3 lo = field.node_pos(ix, iy, iz);
                Vec3 hi = lo + Vec3{h, h, h};
                Vec3 ctr = lo + Vec3{h / 2, h / 2, h / 2};
                Vec3 g = grid.world_to_grid(ctr);
                if (int(std::floor(g.x)) != cube[0] || int(std::floor(g.y)) != cube[1] ||
                    int(std::floor(g.z)) != cube[2])
                    continue;
                auto ev = mz.eval_full(ctr);
                if (ev.grad.norm() < 1e-12) continue;
                // linearized level set: <grad, x - ctr> = t - val
                double area = plane_box_area(lo, hi, ev.grad, ctr, (t - ev.val));
                if (area > 0) total += area * interp_density_world(field, density, ctr);
            }
    return total;
}

namespace {

struct BadLevels {
    std::vector<Interval> intervals;
    double t_kappa = 0, u_lambda = 0, v_gamma = 0, zeta_planes = 0;
};

BadLevels assemble_bad_levels(const LatticeField3& field, const std::vector<double>& density,
                              const GridSpec& grid, const VortexCurrentBuild& build,
                              const CubeAssembly& ca, const MollifiedZeta& mz, double kappa,
                              double M_eps, const CertificateParams& prm, double t_lo,
                              double t_hi) {
    BadLevels out;
    // critical-set levels and plane/plateau levels
    ProbeParams pp;
    pp.grid_per_axis = 16;
    auto probe = critical_set_probe(mz, kappa, pp);
    for (const auto& iv : probe.excluded_levels) out.intervals.push_back(iv);
    out.zeta_planes = probe.plane_level_measure;
    {
        std::vector<Interval> tk;
        for (const Vec3& c : probe.cover_centers) {
            double v = mz.eval(c);
            tk.push_back({v - probe.cover_radius, v + probe.cover_radius});
        }
        out.t_kappa = intervals_measure(tk);
    }

    // component levels on the cube faces (the low-modulus sets)
    for (int axis = 0; axis < 3; ++axis)
        for (int side = 0; side < 2; ++side) {
            GridFace f;
            f.axis = axis;
            f.base = ca.cube;
            f.base[axis] += side;
            const FaceVortexSet* vs = build.find_face(f);
            if (!vs) continue;
            for (const auto& comp : vs->components) {
                double v = mz.eval(comp.centroid);
                double halfw = comp.radius + mz.lambda * mz.lambda;
                out.intervals.push_back({v - halfw, v + halfw});
                out.u_lambda += 2 * halfw;
            }
        }

    // slice-energy screening
    if (prm.gamma_slice > 0 && t_hi > t_lo) {
        double threshold = M_eps / prm.gamma_slice;
        int N = prm.screening_levels;
        double step = (t_hi - t_lo) / N;
        for (int s = 0; s < N; ++s) {
            double t = t_lo + (s + 0.5) * step;
            double se = level_surface_energy(field, density, mz, grid, ca.cube, t);
            if (se > threshold) {
                out.intervals.push_back({t - 0.5 * step, t + 0.5 * step});
                out.v_gamma += step;
            }
        }
    }
    return out;
}

double measure_within(std::vector<Interval> iv, double lo, double hi) {
    double m = 0;
    for (const auto& i : merge_intervals(std::move(iv))) {
        double a = std::max(lo, i.lo), b = std::min(hi, i.hi);
        if (b > a) m += b - a;
    }
    return m;
}

}  // namespace

Certificate coarea_certificate(const LatticeField3& field, const GridSpec& grid,
                               const VortexCurrentBuild& build, double eps,
                               const CertificateParams& params) {
    CertificateParams prm = params;
    if (prm.lambda <= 0) prm.lambda = grid.delta / 32.0;
    if (prm.kappa <= 0) prm.kappa = std::pow(prm.lambda, 2.0 * prm.rho) / 6.0;
    if (prm.kappa >= std::pow(prm.lambda, 2.0 * prm.rho) / 3.0) throw ParamsInfeasible();

    Certificate cert;
    cert.region_tag = "kept-cubes";
    cert.lambda = prm.lambda;
    cert.kappa = prm.kappa;
    cert.rho = prm.rho;
    cert.gamma_slice = prm.gamma_slice;
    cert.M_eps = energy(field, eps, all_nodes()).F_eps;
    cert.correction =
        std::log(prm.C1 * cert.M_eps / (prm.lambda * prm.lambda * prm.kappa * prm.gamma_slice));
    cert.log_factor = std::log(1.0 / eps) - cert.correction;

    std::vector<double> density = energy_density(field, eps);

    double sum_good = 0.0, sum_bad = 0.0;
    for (const auto& ca : build.cubes) {
        if (ca.cfg.k() == 0) continue;
        auto zb = build_zeta_pipeline(ca.cfg, prm.theta_displace, ZetaVariant::Euclid, nullptr,
                                      nullptr, prm.seed);
        MollifiedZeta mz = mollify(zb.zeta, prm.lambda, prm.rho);

        std::vector<double> zp, zn;
        for (const Vec3& p : ca.cfg.positives) zp.push_back(mz.eval(p));
        for (const Vec3& n : ca.cfg.negatives) zn.push_back(mz.eval(n));
        double integ = exact_degree_integral(zp, zn);
        double t_lo = std::min(*std::min_element(zp.begin(), zp.end()),
                               *std::min_element(zn.begin(), zn.end()));
        double t_hi = std::max(*std::max_element(zp.begin(), zp.end()),
                               *std::max_element(zn.begin(), zn.end()));

        BadLevels bl = assemble_bad_levels(field, density, grid, build, ca, mz, prm.kappa,
                                           cert.M_eps, prm, t_lo, t_hi);
        double bad = measure_within(bl.intervals, t_lo, t_hi);

        CubeCertificate cc;
        cc.cube = ca.cube;
        cc.k = int(ca.cfg.k());
        cc.integral_d = integ;
        cc.bad_measure = bad;
        cc.t_kappa = bl.t_kappa;
        cc.u_lambda = bl.u_lambda;
        cc.v_gamma = bl.v_gamma;
        cc.zeta_planes = bl.zeta_planes;
        cc.good_integral = std::max(0.0, integ - double(cc.k) * bad);
        cert.cubes.push_back(cc);

        cert.integral_d += integ;
        sum_good += cc.good_integral;
        sum_bad += double(cc.k) * bad;
        cert.nu_mass += [&] {
            double m = 0;
            for (const auto& s : build.current.segments)
                if (s.provenance == ca.index)
                    m += 2.0 * M_PI * std::abs(s.multiplicity) * dist(s.a, s.b);
            return m;
        }();
    }
    cert.bad_level_budget = sum_bad;
    cert.error_budget = M_PI * std::max(0.0, cert.log_factor) * sum_bad;
    cert.bound = std::max(0.0, M_PI * cert.log_factor * sum_good);

    // measured energy over the cubes carrying configurations
    auto pred = [&](int ix, int iy, int iz) {
        Vec3 g = grid.world_to_grid(field.node_pos(ix, iy, iz));
        for (const auto& cc : cert.cubes) {
            if (int(std::floor(g.x)) == cc.cube[0] && int(std::floor(g.y)) == cc.cube[1] &&
                int(std::floor(g.z)) == cc.cube[2])
                return true;
        }
        return false;
    };
    if (!cert.cubes.empty()) cert.measured_energy = energy(field, eps, pred).E_eps;
    return cert;
}

Certificate boundary_certificate(const LatticeField3& field, const GridSpec& grid,
                                 const VortexCurrentBuild& build, double eps,
                                 const CertificateParams& params) {
    if (field.domain.kind != DomainKind::Ball) throw DomainNotSupported();
    CertificateParams prm = params;
    if (prm.lambda <= 0) prm.lambda = grid.delta / 32.0;
    if (prm.kappa <= 0) prm.kappa = std::pow(prm.lambda, 2.0 * prm.rho) / 6.0;
    if (prm.kappa >= std::pow(prm.lambda, 2.0 * prm.rho) / 3.0) throw ParamsInfeasible();
    if (prm.tau_boundary <= 0) prm.tau_boundary = grid.delta;

    Certificate cert;
    cert.region_tag = "boundary-region";
    cert.lambda = prm.lambda;
    cert.kappa = prm.kappa;
    cert.rho = prm.rho;
    cert.gamma_slice = prm.gamma_slice;
    cert.M_eps = energy(field, eps, all_nodes()).F_eps;
    cert.correction =
        std::log(prm.C1 * cert.M_eps / (prm.lambda * prm.lambda * prm.kappa * prm.gamma_slice));
    cert.log_factor = std::log(1.0 / eps) - cert.correction;

    if (!build.theta_nonempty || build.theta.aug.k() == 0) return cert;

    // polyhedral boundary substitution for the distance oracle
    auto poly = approximate_boundary(field.domain, prm.tau_boundary, prm.seed);
    auto oracle = poly.oracle();
    std::vector<Vec3> extra = poly.normals;

    const SignedConfig& aug = build.theta.aug;
    auto zb = build_zeta_pipeline(aug, prm.theta_displace, ZetaVariant::Boundary, &field.domain,
                                  &oracle, prm.seed, extra);
    MollifiedZeta mz = mollify(zb.zeta, prm.lambda, prm.rho);

    std::vector<double> zp, zn;
    for (const Vec3& p : aug.positives) zp.push_back(mz.eval(p));
    for (const Vec3& n : aug.negatives) zn.push_back(mz.eval(n));
    double integ = exact_degree_integral(zp, zn);
    cert.integral_d = integ;
    double t_lo = std::min(*std::min_element(zp.begin(), zp.end()),
                           *std::min_element(zn.begin(), zn.end()));
    double t_hi = std::max(*std::max_element(zp.begin(), zp.end()),
                           *std::max_element(zn.begin(), zn.end()));

    std::vector<Interval> bad;
    // critical-set probe on the boundary variant
    ProbeParams pp;
    pp.grid_per_axis = 16;
    auto probe = critical_set_probe(mz, prm.kappa, pp);
    for (const auto& iv : probe.excluded_levels) bad.push_back(iv);

    // component levels on the boundary faces
    double u_lambda = 0;
    FaceList fl = enumerate_faces(grid);
    for (size_t i = 0; i < fl.faces.size(); ++i) {
        if (fl.interior[i]) continue;
        const FaceVortexSet* vs = build.find_face(fl.faces[i]);
        if (!vs) continue;
        for (const auto& comp : vs->components) {
            double v = mz.eval(comp.centroid);
            double halfw = comp.radius + mz.lambda * mz.lambda;
            bad.push_back({v - halfw, v + halfw});
            u_lambda += 2 * halfw;
        }
    }

    // levels of the near-boundary collar (the variant is constant on the
    // boundary polyhedron)
    double c_bdry = 0;
    for (int i = 0; i < zb.zeta.k; ++i)
        c_bdry = std::max(c_bdry, zb.zeta.table.zstar[i] - zb.zeta.db_points[i]);
    double collar = 2.0 * prm.lambda + 2.0 * prm.tau_boundary * prm.tau_boundary;
    bad.push_back({c_bdry - collar, c_bdry + collar});
    cert.boundary_levels = 2 * collar;

    double badm = measure_within(bad, t_lo, t_hi);
    int kTheta = int(aug.k());
    double good = std::max(0.0, integ - double(kTheta) * badm);
    cert.bad_level_budget = double(kTheta) * badm;
    cert.error_budget = M_PI * std::max(0.0, cert.log_factor) * cert.bad_level_budget;
    cert.bound = std::max(0.0, M_PI * cert.log_factor * good);

    for (const auto& s : build.current.segments)
        if (s.provenance < 0) cert.nu_mass += 2.0 * M_PI * std::abs(s.multiplicity) * dist(s.a, s.b);

    auto pred = [&](int ix, int iy, int iz) {
        Vec3 w = field.node_pos(ix, iy, iz);
        if (!field.domain.contains(w)) return false;
        Vec3 g = grid.world_to_grid(w);
        return !grid.is_kept(int(std::floor(g.x)), int(std::floor(g.y)), int(std::floor(g.z)));
    };
    cert.measured_energy = energy(field, eps, pred).E_eps;
    return cert;
}

}  // namespace gl3d
