// Picks step sizes so every algorithm matches the initial convergence speed
// of a reference NMCC filter, then picks BCNMCC's second-stage step size so
// its steady state matches MCC's. Prints the result as config JSON.

#include "corrfilt/config.hpp"
#include "corrfilt/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <functional>
#include <iostream>

namespace {

using namespace corrfilt;

// Mean MSD (dB) over the first `window` iterations.
double initial_speed(const ExperimentConfig& config, Algorithm algorithm, double mu, const Stage& first,
                     std::size_t window, const EnsembleSettings& settings) {
    ScenarioSchedule schedule{{Stage{window, first.output_noise, {}}}};
    const auto cfg = FilterConfig(mu, config.sigma, config.epsilon, config.model.taps());
    const auto curve = run_ensemble(config.model, algorithm, cfg, schedule, settings);
    double acc = 0.0;
    for (const double v : curve.values_db) {
        acc += v;
    }
    return acc / static_cast<double>(curve.values_db.size());
}

// Geometric bisection for an increasing-or-decreasing f(mu) = target.
double solve(const std::function<double(double)>& f, double target, double lo, double hi, bool decreasing) {
    for (int i = 0; i < 30; ++i) {
        const double mid = std::sqrt(lo * hi);
        const bool above = f(mid) > target;
        if (above == decreasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::sqrt(lo * hi);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Calibrate per-algorithm step sizes to a reference NMCC convergence speed"};
    std::string config_path;
    double reference_step = 0.05;
    std::size_t trials = 100;
    std::size_t window = 200;
    std::uint64_t seed = 1;
    app.add_option("--config", config_path, "base experiment config")->required();
    app.add_option("--reference-step", reference_step, "NMCC step size that sets the target speed");
    app.add_option("--trials", trials, "trials per evaluation");
    app.add_option("--window", window, "initial iterations compared");
    app.add_option("--seed", seed, "calibration seed (kept apart from experiment seeds)");
    CLI11_PARSE(app, argc, argv);

    try {
        auto config = load_config(config_path);
        config.scenario = "stage-switch";
        config.stages.clear();
        const auto schedule = config.resolved_schedule();
        const Stage& first = schedule.stages.front();

        EnsembleSettings settings;
        settings.trials = trials;
        settings.master_seed = seed;
        settings.options.variance_mode = config.variance_mode;
        settings.options.compensation = config.compensation;
        settings.options.varest = config.varest;

        const double target = initial_speed(config, Algorithm::nmcc, reference_step, first, window, settings);
        std::cerr << "target initial MSD " << target << " dB (NMCC, mu=" << reference_step << ")\n";

        nlohmann::json filters = nlohmann::json::object();
        std::map<Algorithm, double> steps;
        for (const auto algorithm : all_algorithms) {
            double mu = reference_step;
            if (algorithm != Algorithm::nmcc) {
                const bool normalized = algorithm != Algorithm::lms && algorithm != Algorithm::mcc;
                mu = solve([&](double m) { return initial_speed(config, algorithm, m, first, window, settings); },
                           target, normalized ? 1e-3 : 1e-4, normalized ? 1.5 : 0.1, true);
            }
            steps[algorithm] = mu;
            filters[std::string(to_string(algorithm))] = {{"step_size", std::round(mu * 1e5) / 1e5}};
            std::cerr << display_name(algorithm) << ": mu=" << mu << "\n";
        }

        // Second stage of the matched pair: MCC keeps its step size, BCNMCC
        // takes whatever step size reaches MCC's steady-state MSD.
        auto two_stage = config;
        two_stage.scenario = "matched-pair";
        two_stage.filters.clear();
        two_stage.filters[Algorithm::mcc] = {steps[Algorithm::mcc], {}, {}};
        two_stage.filters[Algorithm::bcnmcc] = {steps[Algorithm::bcnmcc], {}, {}};
        const auto pair_schedule = two_stage.resolved_schedule();
        const std::size_t stage_two = pair_schedule.stages[1].iterations;
        auto stage_two_ss = [&](Algorithm algorithm, double mu2) {
            auto sched = pair_schedule;
            sched.stages[1].step_sizes[algorithm] = mu2;
            const auto curve =
                run_ensemble(two_stage.model, algorithm, two_stage.filter_config(algorithm), sched, settings);
            return steady_state_msd(curve, std::min(window, stage_two));
        };
        const double mcc_ss = stage_two_ss(Algorithm::mcc, steps[Algorithm::mcc]);
        const double bcnmcc_mu2 =
            solve([&](double m) { return stage_two_ss(Algorithm::bcnmcc, m); }, mcc_ss, steps[Algorithm::bcnmcc],
                  1.5, false);
        std::cerr << "matched-pair stage 2: MCC ssMSD " << mcc_ss << " dB, BCNMCC mu2=" << bcnmcc_mu2 << "\n";

        nlohmann::json out;
        out["filters"] = filters;
        out["matched_pair_stages"] = nlohmann::json::array(
            {{{"step_sizes",
               {{"mcc", std::round(steps[Algorithm::mcc] * 1e5) / 1e5},
                {"bcnmcc", std::round(steps[Algorithm::bcnmcc] * 1e5) / 1e5}}}},
             {{"step_sizes",
               {{"mcc", std::round(steps[Algorithm::mcc] * 1e5) / 1e5},
                {"bcnmcc", std::round(bcnmcc_mu2 * 1e5) / 1e5}}}}});
        std::cout << out.dump(2) << "\n";
    } catch (const std::exception& e) {
        std::cerr << "calibration failed: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
