#include "gl3d/pipeline.hpp"

#include <cmath>

namespace gl3d {

namespace {

json grid_to_json(const GridSpec& g) {
    json j;
    j["origin"] = {g.b.x, g.b.y, g.b.z};
    j["rotation"] = {{g.R.m[0], g.R.m[1], g.R.m[2]},
                     {g.R.m[3], g.R.m[4], g.R.m[5]},
                     {g.R.m[6], g.R.m[7], g.R.m[8]}};
    j["delta"] = g.delta;
    j["implied_gamma"] = g.implied_gamma;
    json cubes = json::array();
    auto sorted = g.kept_cubes;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& c : sorted) cubes.push_back({c[0], c[1], c[2]});
    j["kept_cubes"] = cubes;
    return j;
}

GridSpec grid_from_json(const json& j) {
    GridSpec g;
    g.b = {j["origin"][0], j["origin"][1], j["origin"][2]};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) g.R.m[3 * r + c] = j["rotation"][r][c];
    g.delta = j["delta"];
    if (j.contains("implied_gamma")) g.implied_gamma = j["implied_gamma"];
    for (const auto& c : j["kept_cubes"]) g.kept_cubes.push_back({c[0], c[1], c[2]});
    g.finalize();
    return g;
}

json segments_to_json(const PolyhedralCurrent& cur) {
    json segs = json::array();
    for (const auto& s : cur.segments)
        segs.push_back({s.a.x, s.a.y, s.a.z, s.b.x, s.b.y, s.b.z, s.multiplicity});
    return segs;
}

json provenance_to_json(const PolyhedralCurrent& cur) {
    json p = json::array();
    for (const auto& s : cur.segments) p.push_back(s.provenance);
    return p;
}

json cert_to_json(const Certificate& c) {
    json j;
    j["region"] = c.region_tag;
    j["bound"] = c.bound;
    j["measured_energy"] = c.measured_energy;
    j["nu_mass"] = c.nu_mass;
    j["log_factor"] = c.log_factor;
    j["correction"] = c.correction;
    j["M_eps"] = c.M_eps;
    j["lambda"] = c.lambda;
    j["kappa"] = c.kappa;
    j["rho"] = c.rho;
    j["gamma_slice"] = c.gamma_slice;
    j["integral_d"] = c.integral_d;
    j["bad_level_budget"] = c.bad_level_budget;
    j["error_budget"] = c.error_budget;
    if (c.region_tag == "boundary-region") j["boundary_levels"] = c.boundary_levels;
    json cubes = json::array();
    for (const auto& cc : c.cubes) {
        json cj;
        cj["cube"] = {cc.cube[0], cc.cube[1], cc.cube[2]};
        cj["k"] = cc.k;
        cj["integral_d"] = cc.integral_d;
        cj["bad_measure"] = cc.bad_measure;
        cj["t_kappa"] = cc.t_kappa;
        cj["u_lambda"] = cc.u_lambda;
        cj["v_gamma"] = cc.v_gamma;
        cj["zeta_planes"] = cc.zeta_planes;
        cj["good_integral"] = cc.good_integral;
        cubes.push_back(cj);
    }
    j["cubes"] = cubes;
    return j;
}

}  // namespace

json truth_to_json(const std::vector<Polyline>& truth) {
    json fils = json::array();
    for (const auto& pl : truth) {
        json pts = json::array();
        for (const Vec3& p : pl.points) pts.push_back({p.x, p.y, p.z});
        fils.push_back({{"points", pts}, {"multiplicity", pl.multiplicity}});
    }
    return json{{"filaments", fils}};
}

std::vector<Polyline> truth_from_json(const json& j) {
    std::vector<Polyline> out;
    for (const auto& f : j.at("filaments")) {
        Polyline pl;
        pl.multiplicity = f.at("multiplicity");
        for (const auto& p : f.at("points")) pl.points.push_back({p[0], p[1], p[2]});
        out.push_back(pl);
    }
    return out;
}

AnalyzeResult analyze_field(const LatticeField3& field, const AnalyzeConfig& cfg,
                            const std::vector<Polyline>* truth) {
    AnalyzeResult res;
    GridSearchParams gp;
    gp.delta = cfg.delta;
    gp.trials = cfg.trials;
    gp.seed = cfg.seed;
    gp.C_grid = cfg.C_grid;
    res.grid = choose_grid(field, cfg.eps, gp);
    res.build = build_vortex_current(field, res.grid, cfg.eps);

    CertificateParams cp = cfg.cert;
    cp.seed = cfg.seed;
    res.interior = coarea_certificate(field, res.grid, res.build, cfg.eps, cp);
    bool boundaryPath = field.domain.kind == DomainKind::Ball;
    if (boundaryPath) {
        try {
            res.boundary = boundary_certificate(field, res.grid, res.build, cfg.eps, cp);
        } catch (const DomainNotSupported&) {
            boundaryPath = false;
        }
    }

    res.norm1 = dual_norm_estimate(field, res.build, res.grid, cfg.eps, 1.0, cfg.seed);
    res.norm_gamma = cfg.gamma == 1.0
                         ? res.norm1
                         : dual_norm_estimate(field, res.build, res.grid, cfg.eps, cfg.gamma,
                                              cfg.seed);

    double F = energy(field, cfg.eps, all_nodes()).F_eps;
    res.support_vol = support_volume(res.build, res.grid, field.domain);
    res.support_budget = 20.0 * res.grid.delta * (1.0 + res.grid.delta * F);
    res.boundary_residual = res.build.current.boundary_residual(field.domain, 1e-6);
    res.total_mass = res.build.current.mass();
    double margin = cfg.interior_margin > 0 ? cfg.interior_margin : 2.0 * cfg.delta;
    {
        MassRegion inner;
        if (field.domain.kind == DomainKind::Ball) {
            inner = MassRegion::ball(field.domain.center, field.domain.radius - margin);
        } else {
            Vec3 m{margin, margin, margin};
            inner = MassRegion::box(field.domain.lo + m, field.domain.hi - m);
        }
        res.interior_mass = res.build.current.mass(inner);
    }

    json rep;
    rep["version"] = artifact_version();
    rep["format"] = {{"report", 1}, {"glf3", 1}};
    rep["config"] = {{"eps", cfg.eps},      {"delta", cfg.delta},   {"trials", cfg.trials},
                     {"seed", cfg.seed},    {"C_grid", cfg.C_grid}, {"gamma", cfg.gamma},
                     {"lambda", cp.lambda}, {"rho", cp.rho},        {"kappa", cp.kappa},
                     {"gamma_slice", cp.gamma_slice}, {"C1", cp.C1},
                     {"domain", field.domain.to_string()}};
    rep["seed"] = cfg.seed;
    rep["grid"] = grid_to_json(res.grid);

    json vsets = json::array();
    {
        // deterministic face order: sort by key
        std::vector<const FaceDetection*> dets;
        for (const auto& d : res.build.detections) dets.push_back(&d);
        std::sort(dets.begin(), dets.end(), [](const FaceDetection* a, const FaceDetection* b) {
            auto ka = std::array<int, 4>{a->face.axis, a->face.base[0], a->face.base[1],
                                         a->face.base[2]};
            auto kb = std::array<int, 4>{b->face.axis, b->face.base[0], b->face.base[1],
                                         b->face.base[2]};
            return ka < kb;
        });
        for (const FaceDetection* d : dets) {
            if (d->vs.I_omega == 0) continue;
            json fj;
            fj["axis"] = d->face.axis;
            fj["base"] = {d->face.base[0], d->face.base[1], d->face.base[2]};
            fj["r_omega"] = d->vs.r_omega;
            json comps = json::array();
            for (const auto& c : d->vs.components)
                comps.push_back({{"centroid", {c.centroid.x, c.centroid.y, c.centroid.z}},
                                 {"degree", c.degree},
                                 {"diameter", c.diameter}});
            fj["components"] = comps;
            vsets.push_back(fj);
        }
    }
    rep["vortex_sets"] = vsets;
    rep["current"] = {{"prefactor", 2.0 * M_PI},
                      {"segments", segments_to_json(res.build.current)},
                      {"provenance", provenance_to_json(res.build.current)},
                      {"grid_reference", "grid"},
                      {"mass", res.total_mass},
                      {"interior_mass", res.interior_mass},
                      {"boundary_residual", res.boundary_residual}};
    json certs = json::array();
    certs.push_back(cert_to_json(res.interior));
    if (res.boundary) certs.push_back(cert_to_json(*res.boundary));
    rep["certificates"] = certs;
    rep["lower_bound_mode"] = res.boundary ? "interior+boundary" : "interior-only";
    rep["norm_estimates"] = json::array(
        {{{"gamma", 1.0},
          {"estimate", res.norm1.norm_estimate},
          {"mean_value_term", res.norm1.mean_value_term},
          {"exact_point_part", res.norm1.exact_point_part},
          {"field_residual", res.norm1.field_residual},
          {"est_gamma0", res.norm1.est_gamma0}},
         {{"gamma", cfg.gamma}, {"estimate", res.norm_gamma.norm_estimate}}});
    rep["checks"] = {{"quantized_multiplicity", true},
                     {"boundary_residual_zero", res.boundary_residual == 0.0},
                     {"support_volume", res.support_vol},
                     {"support_budget", res.support_budget},
                     {"support_within_budget", res.support_vol <= res.support_budget},
                     {"interior_certificate_sound",
                      res.interior.bound <= res.interior.measured_energy + 1e-9},
                     {"boundary_certificate_sound",
                      !res.boundary || res.boundary->bound <= res.boundary->measured_energy + 1e-9}};
    if (truth) {
        double dH = current_truth_hausdorff(res.build.current, *truth, field.h / 2);
        double truthLen = 0;
        for (const auto& pl : *truth) truthLen += pl.length();
        rep["truth"] = {{"hausdorff", dH},
                        {"length", truthLen},
                        {"mass_ratio", truthLen > 0 ? res.total_mass / (2 * M_PI * truthLen) : 0.0}};
    }
    res.report = rep;
    return res;
}

std::vector<std::string> verify_report(const json& report, const LatticeField3& field) {
    std::vector<std::string> issues;
    AnalyzeConfig cfg;
    cfg.eps = report.at("config").at("eps");
    cfg.delta = report.at("config").at("delta");
    cfg.trials = report.at("config").at("trials");
    cfg.seed = report.at("config").at("seed");
    cfg.C_grid = report.at("config").at("C_grid");
    cfg.gamma = report.at("config").at("gamma");

    // quick structural checks against the stored current first
    GridSpec g = grid_from_json(report.at("grid"));
    PolyhedralCurrent stored;
    for (const auto& s : report.at("current").at("segments"))
        stored.segments.push_back({{s[0], s[1], s[2]}, {s[3], s[4], s[5]}, s[6], 0});
    double res = stored.boundary_residual(field.domain, 1e-6);
    if (res != 0.0) issues.push_back("stored current has nonzero interior boundary residual");

    // full deterministic replay
    json fresh = analyze_field(field, cfg).report;
    for (const char* key : {"grid", "vortex_sets", "current", "certificates", "norm_estimates"}) {
        if (canonical_dump(fresh.at(key)) != canonical_dump(report.at(key)))
            issues.push_back(std::string("section mismatch on replay: ") + key);
    }
    return issues;
}

}  // namespace gl3d
