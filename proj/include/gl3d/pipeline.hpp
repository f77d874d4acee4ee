#pragma once

// End-to-end analysis: grid choice, detection, current assembly, certificates
// (interior, plus boundary when the domain supports it, else the interior-only
// fallback restricted away from the boundary), norm estimates, and the
// canonical report.

#include <optional>

#include "gl3d/certify.hpp"
#include "gl3d/dynamics.hpp"
#include "gl3d/report.hpp"

namespace gl3d {

inline const char* artifact_version() { return "glvort 1.0.0"; }

struct AnalyzeConfig {
    double eps = 0.02;
    double delta = 0.125;
    int trials = 200;
    uint64_t seed = 7;
    double C_grid = 100.0;
    double gamma = 0.5;  // second norm estimate alongside gamma = 1
    CertificateParams cert;
    CurrentBuildParams current;
    double interior_margin = -1.0;  // Omega_eps margin for the fallback; default 2 delta
};

struct AnalyzeResult {
    GridSpec grid;
    VortexCurrentBuild build;
    Certificate interior;
    std::optional<Certificate> boundary;  // absent on the interior-only fallback
    DualNormEstimate norm1;
    DualNormEstimate norm_gamma;
    double support_vol = 0.0;
    double support_budget = 0.0;  // C delta (1 + delta F)
    double boundary_residual = 0.0;
    double total_mass = 0.0;
    double interior_mass = 0.0;  // restricted away from the boundary (fallback region)
    json report;
};

AnalyzeResult analyze_field(const LatticeField3& field, const AnalyzeConfig& cfg,
                            const std::vector<Polyline>* truth = nullptr);

// Re-runs the pipeline recorded in a report against the field and compares
// the deterministic parts byte for byte. Returns a list of mismatches (empty
// when the report is authentic).
std::vector<std::string> verify_report(const json& report, const LatticeField3& field);

json truth_to_json(const std::vector<Polyline>& truth);
std::vector<Polyline> truth_from_json(const json& j);

}  // namespace gl3d
