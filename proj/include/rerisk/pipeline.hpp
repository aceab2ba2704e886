#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rerisk/config.hpp"
#include "rerisk/io.hpp"
#include "rerisk/risk.hpp"
#include "rerisk/var.hpp"

namespace rerisk {

enum class Command { Describe, Pca, Risk, Predict, UnitRoot, Synth, Report };

[[nodiscard]] Command parse_command(std::string_view name);
[[nodiscard]] const char* to_string(Command c);

struct SmoothingRule {
    std::string series;
    int window = 3;
    std::string label;  ///< defaults to "<series>_MA<window>"
};

struct PanelGroup {
    std::string name;
    std::vector<std::string> series;
    int factors = 0;  ///< 0: smallest count reaching 90% of variance
};

/// Everything a run needs, resolved from a config file. Relative paths are
/// taken relative to the config file's directory.
struct RunConfig {
    std::string source;  ///< config path, for messages

    // [input]
    std::string returns_path;
    Layout layout = Layout::Wide;
    std::string constituents_path;
    std::string index_label = "VW_INDEX";
    std::string market;

    // [smooth]
    std::vector<SmoothingRule> smoothing;

    // [describe]
    std::vector<std::string> describe_series;  ///< empty: every series
    int correlogram_lags = 24;

    // [panel NAME]
    std::vector<PanelGroup> panels;

    // [risk]
    std::vector<std::string> risk_series;  ///< empty: every series
    RiskConfig risk;
    std::vector<Basis> bases{Basis::RawReturns};
    std::string residual_panel;  ///< panel whose factors define residuals

    // [unitroot]
    std::vector<std::string> unitroot_series;

    // [predict]
    std::vector<std::string> var_series;
    std::string lag_policy = "bic";  ///< bic | aic | fixed
    int p_max = 8;
    int p_fixed = 0;
    int forecast_horizon = 6;
    int irf_horizon = 24;
    int n_boot = 1000;
    int workers = 1;
    std::vector<std::string> ordering;  ///< Cholesky order, default var_series order

    // [synth NAME]
    std::vector<Config::Section> synth;

    // [output]
    std::string output_dir = "out";
    std::uint64_t seed = 20090531;

    /// Throws ValidationError for out-of-range values, e.g. fractiles
    /// outside (0.5, 1) or negative counts.
    static RunConfig from_config(const Config& cfg);
    static RunConfig load(const std::string& path);
};

struct RunResult {
    int exit_status = 0;
    std::vector<std::string> files;  ///< relative to the output directory
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

/// Runs one command and writes its artifacts plus summary.json and
/// manifest.json into config.output_dir. Stage failures are collected, not
/// thrown; exit_status is 0 exactly when no error was recorded.
[[nodiscard]] RunResult run(Command command, const RunConfig& config);

/// Writes the bundled synthetic dataset (returns.csv, constituents.csv) and a
/// matching rerisk.ini into `dir`.
void write_demo(const std::string& dir, std::uint64_t seed = 20090531);

}  // namespace rerisk
