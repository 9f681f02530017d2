#pragma once

#include "corrfilt/harness.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corrfilt {

struct ScenarioInfo {
    std::string_view name;
    std::string_view description;
};

inline constexpr std::array<ScenarioInfo, 4> builtin_scenarios{{
    {"stage-switch", "all six algorithms, output-noise alpha 1.8 then 1.3, state carried over"},
    {"matched-pair", "MCC vs BCNMCC over the same two stages with per-stage step sizes"},
    {"sigma-sweep", "steady-state MSD of MCC and BCNMCC for kernel bandwidth 3..7"},
    {"input-variance-sweep", "steady-state MSD of MCC and BCNMCC for input-noise variance 0.15..0.35"},
}};
inline constexpr std::string_view custom_scenario = "custom";

inline constexpr std::array<double, 5> default_sigma_grid{3.0, 4.0, 5.0, 6.0, 7.0};
inline constexpr std::array<double, 5> default_input_variance_grid{0.15, 0.2, 0.25, 0.3, 0.35};
inline constexpr double stage_switch_first_alpha = 1.8;

/// Per-algorithm filter settings; unset fields fall back to the experiment-wide ones.
struct FilterSpec {
    double step_size = 0.0;
    std::optional<double> sigma;
    std::optional<double> epsilon;
};

/// One configured stage. Unset fields take the scenario's built-in values.
struct StageSpec {
    std::optional<std::size_t> iterations;
    std::optional<AlphaStableParams> output_noise;
    std::map<Algorithm, double> step_sizes;
};

struct ExperimentConfig {
    std::string scenario = "stage-switch";
    /// Empty selects the scenario's default set.
    std::vector<Algorithm> algorithms;
    SystemModel model;
    double sigma = 4.0;
    double epsilon = 0.001;
    std::map<Algorithm, FilterSpec> filters;
    VarEstParams varest;
    std::size_t trials = 200;
    /// Iterations per stage.
    std::size_t iterations = 5000;
    std::optional<std::uint64_t> seed;
    std::filesystem::path output_dir = "results";
    bool plot = false;
    std::size_t workers = 0;
    CompensationWeight compensation = CompensationWeight::observed;
    VarianceMode variance_mode = VarianceMode::estimated;
    std::vector<StageSpec> stages;
    /// Empty selects the built-in grid of a sweep scenario.
    std::vector<double> sweep_values;
    std::size_t steady_state_window = 200;

    /// Throws config_error when a referenced algorithm lacks a FilterSpec.
    FilterConfig filter_config(Algorithm algorithm) const;
    /// Algorithms the scenario will run.
    std::vector<Algorithm> resolved_algorithms() const;
    /// The stage list after applying built-in defaults.
    ScenarioSchedule resolved_schedule() const;
    /// Throws config_error on any invariant violation.
    void validate() const;
};

bool is_known_scenario(std::string_view name) noexcept;

struct SummaryRow {
    std::string key;
    std::vector<double> values;
};

/// Steady-state MSD (dB) per algorithm per stage or sweep point.
struct SummaryTable {
    std::string key_name;
    std::vector<std::string> columns;
    std::vector<SummaryRow> rows;
};

struct SweepSeries {
    std::string axis;
    std::vector<double> points;
    /// One ssMSD series per algorithm, aligned with `points`.
    std::vector<std::pair<Algorithm, std::vector<double>>> steady_state;
};

struct ScenarioResult {
    std::string scenario;
    std::vector<MsdCurve> curves;
    std::vector<std::size_t> stage_boundaries;
    SummaryTable summary;
    std::optional<SweepSeries> sweep;
    CurveMetadata metadata;
};

/// Executes the configured scenario. Throws config_error for an unknown
/// scenario name (listing the valid ones) and run_error on divergence.
ScenarioResult run_scenario(const ExperimentConfig& config, std::uint64_t config_hash = 0);

} // namespace corrfilt
