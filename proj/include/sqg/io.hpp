#pragma once

#include "sqg/solver.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace sqg {

/// Binary field checkpoint:
///   magic "SQGF" | version u8 = 1 | ndim u8 | per-axis sizes u32 LE |
///   alpha f64 LE | t f64 LE | row-major f64 LE samples.
struct Checkpoint {
    GridSpec grid;   // L is not stored; defaults to 2*pi unless set by the caller
    double t = 0.0;
    std::vector<double> samples;
};

void write_checkpoint(const std::filesystem::path& path, const RealField& field, double t);
Checkpoint read_checkpoint(const std::filesystem::path& path, double L = kTwoPi);

/// Norm series as RFC-4180 CSV with LF line endings, columns
/// t,l2,sup,h_alpha_half, 17 significant digits.
void write_norms_csv(const std::filesystem::path& path, const std::vector<NormSample>& norms);

/// Versioned diagnostics report envelope: {"schema": "sqg-report/1",
/// "kind": ..., "params": {...}, "results": {...}}.
nlohmann::json make_report(const std::string& kind, nlohmann::json params,
                           nlohmann::json results);
void write_report(const std::filesystem::path& path, const nlohmann::json& report);

/// Structural validation of a report against the published schema
/// (docs/report-schema.md). Throws validation_error on violations.
void validate_report(const nlohmann::json& report);

/// Run configuration loaded from JSON ("sqg-run/1"); unknown keys anywhere in
/// the document are rejected.
struct RunConfigFile {
    SolverConfig solver;
    // diagnostics parameters
    double c0 = 0.6;
    double a_frac = 0.99;
    double shrink_rho = 0.5;
    std::vector<double> level_fractions{0.0, 0.25, 0.5};
    double z_min = 1e-4, z_max = 8.0;
    int z_count = 48;
    std::string output_dir = ".";
    std::string prefix = "run";
};

RunConfigFile parse_run_config(const nlohmann::json& doc);
RunConfigFile load_run_config(const std::filesystem::path& path);

} // namespace sqg
