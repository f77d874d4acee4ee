#include <cstdio>
#include <cstdlib>

#include "doctest.h"
#include "gl3d/pipeline.hpp"

using namespace gl3d;

namespace {

AnalyzeConfig small_cfg(double eps, double delta, uint64_t seed) {
    AnalyzeConfig cfg;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("canonical dump: sorted keys, stable floats") {
    json j;
    j["beta"] = 0.1;
    j["alpha"] = 1.0 / 3.0;
    j["list"] = {1, 2.5, -3};
    std::string a = canonical_dump(j);
    std::string b = canonical_dump(j);
    CHECK(a == b);
    CHECK(a.find("\"alpha\"") < a.find("\"beta\""));
    CHECK(a.find("0.33333333333333331") != std::string::npos);
}

TEST_CASE("analyze is deterministic: same seed gives byte-identical reports") {
    SynthParams p;
    p.kind = SynthKind::StraightLine;
    auto sr = synth_field(p, {48, 48, 48}, 1.0 / 47, 0.03);
    auto cfg = small_cfg(0.03, 12.0 / 47, 7);
    auto r1 = analyze_field(sr.field, cfg, &sr.truth);
    auto r2 = analyze_field(sr.field, cfg, &sr.truth);
    CHECK(canonical_dump(r1.report) == canonical_dump(r2.report));
}

TEST_CASE("verify passes on an authentic report and flags tampering") {
    SynthParams p;
    p.kind = SynthKind::StraightLine;
    auto sr = synth_field(p, {48, 48, 48}, 1.0 / 47, 0.03);
    auto cfg = small_cfg(0.03, 12.0 / 47, 7);
    auto res = analyze_field(sr.field, cfg, &sr.truth);
    CHECK(verify_report(res.report, sr.field).empty());

    json tampered = res.report;
    REQUIRE(!tampered["current"]["segments"].empty());
    tampered["current"]["segments"][0][6] =
        int(tampered["current"]["segments"][0][6]) + 1;  // flip a multiplicity
    auto issues = verify_report(tampered, sr.field);
    CHECK(!issues.empty());
}

TEST_CASE("truth round trip through JSON") {
    std::vector<Polyline> truth(1);
    truth[0].points = {{0, 0, 0}, {0.5, 0.25, 1}};
    truth[0].multiplicity = -2;
    auto back = truth_from_json(json::parse(canonical_dump(truth_to_json(truth))));
    REQUIRE(back.size() == 1);
    CHECK(back[0].multiplicity == -2);
    CHECK(dist(back[0].points[1], truth[0].points[1]) == 0.0);
}

TEST_CASE("report carries the contract checks") {
    SynthParams p;
    p.kind = SynthKind::Ring;
    auto sr = synth_field(p, {48, 48, 48}, 1.0 / 47, 0.03);
    auto cfg = small_cfg(0.03, 12.0 / 47, 7);
    auto res = analyze_field(sr.field, cfg, &sr.truth);
    const json& checks = res.report["checks"];
    CHECK(checks["quantized_multiplicity"] == true);
    CHECK(checks["boundary_residual_zero"] == true);
    CHECK(checks["support_within_budget"] == true);
    CHECK(checks["interior_certificate_sound"] == true);
    CHECK(res.report["lower_bound_mode"] == "interior-only");
}

#ifdef GLVORT_BIN
namespace {
int run_cli(const std::string& args) {
    std::string cmd = std::string(GLVORT_BIN) + " " + args + " 2>/dev/null";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}
}  // namespace

TEST_CASE("command line: synth round trip, analyze determinism, tamper detection") {
    CHECK(run_cli("synth --kind straight_line --dims 40 --eps 0.03 --out cli_f.glf3") == 0);
    LatticeField3 f = read_glf3("cli_f.glf3");
    write_glf3(f, "cli_f2.glf3");
    CHECK(read_text_file("cli_f.glf3") == read_text_file("cli_f2.glf3"));

    CHECK(run_cli("analyze cli_f.glf3 --eps 0.03 --delta 0.25 --seed 7 --out cli_r1.json "
                  "--truth cli_f.glf3.truth.json") == 0);
    CHECK(run_cli("analyze cli_f.glf3 --eps 0.03 --delta 0.25 --seed 7 --out cli_r2.json "
                  "--truth cli_f.glf3.truth.json") == 0);
    CHECK(read_text_file("cli_r1.json") == read_text_file("cli_r2.json"));

    CHECK(run_cli("verify cli_r1.json cli_f.glf3") == 0);
    json rep = json::parse(read_text_file("cli_r1.json"));
    REQUIRE(!rep["current"]["segments"].empty());
    rep["current"]["segments"][0][6] = int(rep["current"]["segments"][0][6]) + 1;
    write_text_file("cli_tampered.json", canonical_dump(rep));
    CHECK(run_cli("verify cli_tampered.json cli_f.glf3") == 3);

    CHECK(run_cli("lower-bound cli_f.glf3 --eps 0.03 --delta 0.25 --seed 7 --out cli_lb.json") == 0);
    json lb = json::parse(read_text_file("cli_lb.json"));
    CHECK(lb.contains("certificates"));

    CHECK(run_cli("dynamics cli_f.glf3 --eps 0.03 --out cli_dyn.json") == 0);
    CHECK(run_cli("bogus-subcommand") == 2);
    for (const char* p : {"cli_f.glf3", "cli_f2.glf3", "cli_f.glf3.truth.json", "cli_r1.json",
                          "cli_r2.json", "cli_tampered.json", "cli_lb.json", "cli_dyn.json"})
        std::remove(p);
}
#endif

TEST_CASE("ball domain reports the boundary certificate") {
    SynthParams p;
    p.kind = SynthKind::StraightLine;
    p.ball_domain = true;
    auto sr = synth_field(p, {48, 48, 48}, 1.0 / 47, 0.03);
    auto cfg = small_cfg(0.03, 9.0 / 47, 7);
    auto res = analyze_field(sr.field, cfg, &sr.truth);
    CHECK(res.boundary.has_value());
    CHECK(res.report["lower_bound_mode"] == "interior+boundary");
    CHECK(res.report["checks"]["boundary_certificate_sound"] == true);
}
