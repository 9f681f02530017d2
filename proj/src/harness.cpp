#include "corrfilt/harness.hpp"

#include "corrfilt/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace corrfilt {

namespace {

enum stream_id : std::uint64_t { input_stream = 0, input_noise_stream = 1, output_noise_stream = 2 };

bool all_finite(const WeightVector& weights) {
    for (const double w : weights.taps()) {
        if (!std::isfinite(w)) {
            return false;
        }
    }
    return true;
}

} // namespace

void SystemModel::validate() const {
    if (true_weights.squared_norm() == 0.0) {
        throw config_error("true_weights must not be the zero vector");
    }
    if (input_noise.mean() != 0.0) {
        throw config_error("input noise must be zero-mean");
    }
}

SampleGenerator::SampleGenerator(const SystemModel& model, std::uint64_t trial_seed)
    : model_(model),
      input_source_(trial_seed, input_stream),
      input_noise_source_(trial_seed, input_noise_stream),
      output_noise_source_(trial_seed, output_noise_stream),
      sample_{Regressor(model.taps()), Regressor(model.taps()), 0.0, 0.0, Regressor(model.taps())} {}

const Sample& SampleGenerator::next(const AlphaStableParams& output_noise) {
    sample_.clean.push(sample_gaussian(input_source_, model_.input));
    sample_.input_noise.push(sample_gaussian(input_noise_source_, model_.input_noise));
    auto noisy = sample_.clean.taps();
    auto eta = sample_.input_noise.taps();
    // Rebuilding the noisy window from the two delay lines keeps u + eta exact.
    std::vector<double> observed(noisy.size());
    for (std::size_t l = 0; l < observed.size(); ++l) {
        observed[l] = noisy[l] + eta[l];
    }
    sample_.noisy = Regressor(std::move(observed));
    sample_.output_noise = model_.output_noise_enabled ? sample_alpha_stable(output_noise_source_, output_noise) : 0.0;
    sample_.desired = predict(model_.true_weights, sample_.clean) + sample_.output_noise;
    return sample_;
}

std::size_t ScenarioSchedule::total_iterations() const noexcept {
    std::size_t total = 0;
    for (const auto& stage : stages) {
        total += stage.iterations;
    }
    return total;
}

std::vector<std::size_t> ScenarioSchedule::boundaries() const {
    std::vector<std::size_t> out;
    std::size_t at = 0;
    for (std::size_t s = 0; s + 1 < stages.size(); ++s) {
        at += stages[s].iterations;
        out.push_back(at);
    }
    return out;
}

void ScenarioSchedule::validate() const {
    if (stages.empty()) {
        throw config_error("schedule needs at least one stage");
    }
    for (std::size_t s = 0; s < stages.size(); ++s) {
        if (stages[s].iterations == 0) {
            throw config_error("stages[" + std::to_string(s) + "].iterations must be positive");
        }
        for (const auto& [algorithm, mu] : stages[s].step_sizes) {
            if (!(mu > 0.0) || !std::isfinite(mu)) {
                throw config_error("stages[" + std::to_string(s) + "].step_sizes." + std::string(to_string(algorithm)) +
                                   " must be > 0");
            }
        }
    }
}

std::string_view to_string(VarianceMode mode) noexcept {
    return mode == VarianceMode::estimated ? "estimated" : "oracle";
}

std::optional<VarianceMode> parse_variance_mode(std::string_view name) noexcept {
    if (name == "estimated") {
        return VarianceMode::estimated;
    }
    if (name == "oracle") {
        return VarianceMode::oracle;
    }
    return std::nullopt;
}

double msd(const WeightVector& weights, const WeightVector& true_weights) {
    if (weights.size() != true_weights.size()) {
        throw std::invalid_argument("msd: length mismatch");
    }
    const double reference = true_weights.squared_norm();
    if (reference == 0.0) {
        throw std::invalid_argument("msd: true weight vector is zero");
    }
    double deviation = 0.0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const double d = true_weights[l] - weights[l];
        deviation += d * d;
    }
    return deviation / reference;
}

double to_db(double ratio) noexcept {
    if (!(ratio > 0.0)) {
        return db_floor;
    }
    return std::max(10.0 * std::log10(ratio), db_floor);
}

std::vector<double> run_trial(const SystemModel& model, Algorithm algorithm, const FilterConfig& cfg,
                              const ScenarioSchedule& schedule, const TrialOptions& options,
                              std::uint64_t trial_seed) {
    model.validate();
    if (cfg.taps() != model.taps()) {
        throw config_error("filter has " + std::to_string(cfg.taps()) + " taps but the system has " +
                           std::to_string(model.taps()));
    }
    SampleGenerator generator(model, trial_seed);
    AdaptiveFilter filter(algorithm, cfg, options.compensation);
    NoiseVarianceEstimator estimator(model.taps(), options.varest);
    const bool compensated = is_bias_compensated(algorithm);

    std::vector<double> out;
    out.reserve(schedule.total_iterations());
    for (const auto& stage : schedule.stages) {
        if (const auto it = stage.step_sizes.find(algorithm); it != stage.step_sizes.end()) {
            filter.set_step_size(it->second);
        }
        for (std::size_t k = 0; k < stage.iterations; ++k) {
            out.push_back(msd(filter.weights(), model.true_weights));
            const Sample& sample = generator.next(stage.output_noise);

            StepContext ctx;
            ctx.output_noise = sample.output_noise;
            if (compensated) {
                if (options.variance_mode == VarianceMode::oracle) {
                    ctx.input_noise_variance = model.input_noise.variance();
                } else {
                    const double error = sample.desired - predict(filter.weights(), sample.noisy);
                    estimator.update_error_power(error);
                    estimator.update_weight_power(filter.weights());
                    ctx.input_noise_variance =
                        estimator.estimate_input_variance(sample.noisy, cfg.regularization()).value;
                }
            }
            const StepOutcome& step = filter.adapt(sample.noisy, sample.desired, ctx);
            if (!all_finite(filter.weights())) {
                char msg[256];
                std::snprintf(msg, sizeof msg, "%s trial (seed %llu) diverged at iteration %zu, last error %g",
                              std::string(display_name(algorithm)).c_str(),
                              static_cast<unsigned long long>(trial_seed), out.size() - 1, step.error);
                throw run_error(msg);
            }
        }
    }
    return out;
}

MsdCurve reduce_trials(std::span<const std::vector<double>> sequences) {
    if (sequences.empty()) {
        throw std::invalid_argument("reduce_trials: no trials");
    }
    const std::size_t length = sequences.front().size();
    std::vector<double> mean(length, 0.0);
    for (const auto& seq : sequences) {
        if (seq.size() != length) {
            throw std::invalid_argument("reduce_trials: trial lengths differ (" + std::to_string(seq.size()) +
                                        " vs " + std::to_string(length) + ")");
        }
        for (std::size_t i = 0; i < length; ++i) {
            mean[i] += seq[i];
        }
    }
    MsdCurve curve;
    curve.trials = sequences.size();
    curve.values_db.reserve(length);
    const auto n = static_cast<double>(sequences.size());
    for (const double total : mean) {
        curve.values_db.push_back(to_db(total / n));
    }
    return curve;
}

double steady_state_msd(std::span<const double> values_db, std::size_t window) {
    if (window == 0) {
        throw std::invalid_argument("steady_state_msd: window must be positive");
    }
    if (values_db.size() < window) {
        throw std::invalid_argument("steady_state_msd: curve has " + std::to_string(values_db.size()) +
                                    " points, window is " + std::to_string(window));
    }
    double acc = 0.0;
    for (const double v : values_db.last(window)) {
        acc += v;
    }
    return acc / static_cast<double>(window);
}

double steady_state_msd(const MsdCurve& curve, std::size_t window) { return steady_state_msd(curve.values_db, window); }

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) noexcept {
    return derive_seed(master_seed, 0x7472000000000000ULL + index);
}

MsdCurve run_ensemble(const SystemModel& model, Algorithm algorithm, const FilterConfig& cfg,
                      const ScenarioSchedule& schedule, const EnsembleSettings& settings) {
    if (settings.trials == 0) {
        throw config_error("trials must be >= 1");
    }
    std::vector<std::vector<double>> sequences(settings.trials);
    std::size_t workers = settings.workers != 0 ? settings.workers : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, settings.trials);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (std::size_t t = next++; t < settings.trials; t = next++) {
            try {
                sequences[t] = run_trial(model, algorithm, cfg, schedule, settings.options,
                                         trial_seed(settings.master_seed, t));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = settings.trials;
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    MsdCurve curve = reduce_trials(sequences);
    curve.algorithm = algorithm;
    curve.label = std::string(to_string(algorithm));
    curve.metadata = {settings.master_seed, settings.config_hash};
    for (const auto& stage : schedule.stages) {
        const auto it = stage.step_sizes.find(algorithm);
        curve.step_sizes.push_back(it != stage.step_sizes.end() ? it->second
                                   : curve.step_sizes.empty() ? cfg.step_size()
                                                              : curve.step_sizes.back());
    }
    return curve;
}

} // namespace corrfilt
