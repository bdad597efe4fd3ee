#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "otb/analysis.hpp"
#include "otb/inference.hpp"
#include "otb/sample.hpp"

namespace otb {

enum class AnalysisMode { bounds, cdf_curve, quantile };

/// Batch-run description, normally loaded from a JSON config file. See
/// README for the config schema.
struct RunConfig {
    std::string input;
    SampleSchema schema;
    AnalysisMode mode = AnalysisMode::bounds;

    std::string parameter = "identity";
    ParameterOptions param_opts;
    std::optional<std::vector<int>> subset;

    double tau = 0.5;                           // quantile mode
    int grid_cap = 0;                           // 0 = mode default (5000 / 200)
    std::optional<std::vector<double>> grid;    // explicit delta grid

    std::optional<ClassBounds> class_override;  // custom (L, ||c||_inf)
    std::optional<Rectangle> rect;

    BootstrapConfig boot;
    bool inference = true;                      // bounds mode only

    std::string report_path;                    // empty = stdout
    std::optional<std::string> draws_path;
    std::optional<std::string> curve_path;

    nlohmann::ordered_json raw;                 // config echo for the report
};

RunConfig load_run_config(const std::string& path);

struct Report {
    nlohmann::ordered_json doc;
    std::string draws_csv;   // nonempty when draws were requested
    std::string curve_csv;   // nonempty when a curve file was requested
};

/// load -> validate -> measures -> bounds -> inference, per cfg.mode.
/// Module errors propagate as the otb exception types.
Report run_analysis(const RunConfig& cfg);

/// Write the report (stdout when report_path is empty) and any requested
/// delimited files. Deterministic: identical reports serialize to identical
/// bytes.
void emit_report(const Report& report, const RunConfig& cfg);

}  // namespace otb
