#include "corrfilt/experiment.hpp"

#include "corrfilt/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace corrfilt {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

bool is_sweep(std::string_view scenario) { return scenario == "sigma-sweep" || scenario == "input-variance-sweep"; }

std::string valid_scenario_list() {
    std::string out;
    for (const auto& info : builtin_scenarios) {
        out += std::string(info.name) + ", ";
    }
    return out + std::string(custom_scenario);
}

EnsembleSettings ensemble_settings(const ExperimentConfig& config, std::uint64_t config_hash) {
    EnsembleSettings settings;
    settings.trials = config.trials;
    settings.master_seed = config.seed.value_or(0);
    settings.workers = config.workers;
    settings.options.variance_mode = config.variance_mode;
    settings.options.compensation = config.compensation;
    settings.options.varest = config.varest;
    settings.config_hash = config_hash;
    return settings;
}

/// Steady state of each stage, with the window clipped to the stage length.
SummaryTable stage_summary(const std::vector<MsdCurve>& curves, const ScenarioSchedule& schedule,
                           std::size_t window) {
    SummaryTable table;
    table.key_name = "stage";
    for (const auto& curve : curves) {
        table.columns.push_back(curve.label);
    }
    std::size_t end = 0;
    for (std::size_t s = 0; s < schedule.stages.size(); ++s) {
        end += schedule.stages[s].iterations;
        const std::size_t w = std::min(window, schedule.stages[s].iterations);
        SummaryRow row{std::to_string(s + 1), {}};
        for (const auto& curve : curves) {
            row.values.push_back(steady_state_msd(std::span<const double>(curve.values_db).first(end), w));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ScenarioResult run_staged(const ExperimentConfig& config, std::uint64_t config_hash) {
    const auto schedule = config.resolved_schedule();
    const auto settings = ensemble_settings(config, config_hash);
    ScenarioResult result;
    result.scenario = config.scenario;
    result.stage_boundaries = schedule.boundaries();
    result.metadata = {settings.master_seed, config_hash};
    for (const auto algorithm : config.resolved_algorithms()) {
        result.curves.push_back(
            run_ensemble(config.model, algorithm, config.filter_config(algorithm), schedule, settings));
    }
    result.summary = stage_summary(result.curves, schedule, config.steady_state_window);
    return result;
}

ScenarioResult run_sweep(const ExperimentConfig& config, std::uint64_t config_hash) {
    const bool sigma_axis = config.scenario == "sigma-sweep";
    std::vector<double> points = config.sweep_values;
    if (points.empty()) {
        points = sigma_axis ? std::vector<double>(default_sigma_grid.begin(), default_sigma_grid.end())
                            : std::vector<double>(default_input_variance_grid.begin(),
                                                  default_input_variance_grid.end());
    }
    const auto schedule = config.resolved_schedule();
    const auto settings = ensemble_settings(config, config_hash);
    const auto algorithms = config.resolved_algorithms();
    const std::size_t window = std::min(config.steady_state_window, schedule.total_iterations());

    ScenarioResult result;
    result.scenario = config.scenario;
    result.metadata = {settings.master_seed, config_hash};
    SweepSeries sweep;
    sweep.axis = sigma_axis ? "sigma" : "input_noise_variance";
    sweep.points = points;
    for (const auto algorithm : algorithms) {
        sweep.steady_state.emplace_back(algorithm, std::vector<double>{});
    }

    result.summary.key_name = sweep.axis;
    for (const auto algorithm : algorithms) {
        result.summary.columns.emplace_back(to_string(algorithm));
    }

    for (const double point : points) {
        SystemModel model = config.model;
        if (!sigma_axis) {
            model.input_noise = GaussianParams(0.0, point);
        }
        SummaryRow row{format_value(point), {}};
        for (std::size_t a = 0; a < algorithms.size(); ++a) {
            auto cfg = config.filter_config(algorithms[a]);
            if (sigma_axis) {
                cfg = cfg.with_kernel_bandwidth(point);
            }
            MsdCurve curve = run_ensemble(model, algorithms[a], cfg, schedule, settings);
            curve.label = std::string(to_string(algorithms[a])) + "[" + (sigma_axis ? "sigma=" : "var_in=") +
                          format_value(point) + "]";
            const double ss = steady_state_msd(curve, window);
            sweep.steady_state[a].second.push_back(ss);
            row.values.push_back(ss);
            result.curves.push_back(std::move(curve));
        }
        result.summary.rows.push_back(std::move(row));
    }
    result.sweep = std::move(sweep);
    return result;
}

} // namespace

bool is_known_scenario(std::string_view name) noexcept {
    if (name == custom_scenario) {
        return true;
    }
    return std::any_of(builtin_scenarios.begin(), builtin_scenarios.end(),
                       [&](const ScenarioInfo& info) { return info.name == name; });
}

FilterConfig ExperimentConfig::filter_config(Algorithm algorithm) const {
    const auto it = filters.find(algorithm);
    if (it == filters.end()) {
        throw config_error("filters." + std::string(to_string(algorithm)) + " is missing (no step size configured)");
    }
    const auto& spec = it->second;
    try {
        return FilterConfig(spec.step_size, spec.sigma.value_or(sigma), spec.epsilon.value_or(epsilon), model.taps());
    } catch (const config_error& e) {
        throw config_error("filters." + std::string(to_string(algorithm)) + ": " + e.what());
    }
}

std::vector<Algorithm> ExperimentConfig::resolved_algorithms() const {
    if (!algorithms.empty()) {
        return algorithms;
    }
    if (scenario == "stage-switch") {
        return {all_algorithms.begin(), all_algorithms.end()};
    }
    if (scenario == "matched-pair" || is_sweep(scenario)) {
        return {Algorithm::mcc, Algorithm::bcnmcc};
    }
    throw config_error("algorithms: the custom scenario needs an explicit algorithm list");
}

ScenarioSchedule ExperimentConfig::resolved_schedule() const {
    std::vector<AlphaStableParams> builtin_noise;
    if (scenario == "stage-switch" || scenario == "matched-pair") {
        builtin_noise = {model.output_noise.with_alpha(stage_switch_first_alpha), model.output_noise};
    } else {
        builtin_noise = {model.output_noise};
    }

    ScenarioSchedule schedule;
    const std::size_t count = stages.empty() ? builtin_noise.size() : stages.size();
    for (std::size_t s = 0; s < count; ++s) {
        Stage stage;
        stage.iterations = iterations;
        stage.output_noise = s < builtin_noise.size() ? builtin_noise[s] : model.output_noise;
        if (s < stages.size()) {
            const auto& spec = stages[s];
            stage.iterations = spec.iterations.value_or(iterations);
            if (spec.output_noise) {
                stage.output_noise = *spec.output_noise;
            }
            stage.step_sizes = spec.step_sizes;
        }
        schedule.stages.push_back(std::move(stage));
    }
    return schedule;
}

void ExperimentConfig::validate() const {
    if (!is_known_scenario(scenario)) {
        throw config_error("scenario: unknown scenario '" + scenario + "' (valid: " + valid_scenario_list() + ")");
    }
    if (trials == 0) {
        throw config_error("trials must be >= 1");
    }
    if (iterations == 0) {
        throw config_error("iterations must be >= 1");
    }
    if (steady_state_window == 0) {
        throw config_error("steady_state_window must be >= 1");
    }
    if (!seed) {
        throw config_error("seed is required (set it in the config, pass --seed, or export CORRFILT_SEED)");
    }
    model.validate();
    varest.validate();
    for (const auto algorithm : resolved_algorithms()) {
        (void)filter_config(algorithm);
    }
    for (std::size_t s = 0; s < stages.size(); ++s) {
        if (stages[s].iterations && *stages[s].iterations == 0) {
            throw config_error("stages[" + std::to_string(s) + "].iterations must be >= 1");
        }
    }
    resolved_schedule().validate();
    if (!sweep_values.empty() && !is_sweep(scenario)) {
        throw config_error("sweep_values is only meaningful for sweep scenarios");
    }
    for (const double v : sweep_values) {
        if (scenario == "sigma-sweep" && !(v > 0.0)) {
            throw config_error("sweep_values: kernel bandwidths must be > 0");
        }
        if (scenario == "input-variance-sweep" && !(v >= 0.0)) {
            throw config_error("sweep_values: variances must be >= 0");
        }
    }
}

ScenarioResult run_scenario(const ExperimentConfig& config, std::uint64_t config_hash) {
    config.validate();
    if (is_sweep(config.scenario)) {
        return run_sweep(config, config_hash);
    }
    return run_staged(config, config_hash);
}

} // namespace corrfilt
