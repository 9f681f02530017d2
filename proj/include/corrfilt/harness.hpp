#pragma once

#include "corrfilt/filters.hpp"
#include "corrfilt/noisegen.hpp"
#include "corrfilt/varest.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corrfilt {

/// MSD values are floored here so exact recovery stays plottable.
inline constexpr double db_floor = -320.0;

/// d(i) = u(i)^T w_true + v(i), observed input u(i) + eta(i).
struct SystemModel {
    WeightVector true_weights{std::vector<double>{-0.3, -0.9, 0.8, -0.7, 0.6}};
    GaussianParams input{1.0, 1.0};
    /// Zero-mean white Gaussian input noise.
    GaussianParams input_noise{0.0, 0.25};
    AlphaStableParams output_noise{1.3, 0.0, 0.2, 0.0};
    /// false selects the noiseless v == 0 mode.
    bool output_noise_enabled = true;

    std::size_t taps() const noexcept { return true_weights.size(); }
    /// Throws config_error for a zero true system or nonzero input-noise mean.
    void validate() const;
};

struct Sample {
    Regressor clean;
    Regressor noisy;
    double desired = 0.0;
    double output_noise = 0.0;
    /// eta(i) ... eta(i - L + 1)
    Regressor input_noise;
};

/// Draws the signal model for one trial from three independent streams
/// (input, input noise, output noise) of the trial seed. Histories start
/// zero-padded.
class SampleGenerator {
public:
    SampleGenerator(const SystemModel& model, std::uint64_t trial_seed);

    const Sample& next() { return next(model_.output_noise); }
    /// Same, with the output noise drawn from `output_noise` (staged schedules).
    const Sample& next(const AlphaStableParams& output_noise);

private:
    SystemModel model_;
    SeededSource input_source_;
    SeededSource input_noise_source_;
    SeededSource output_noise_source_;
    Sample sample_;
};

struct Stage {
    std::size_t iterations = 0;
    AlphaStableParams output_noise;
    /// Per-algorithm step size for this stage; missing entries keep the
    /// filter's configured step size.
    std::map<Algorithm, double> step_sizes;
};

/// Filter state carries over across stage boundaries.
struct ScenarioSchedule {
    std::vector<Stage> stages;

    std::size_t total_iterations() const noexcept;
    /// Cumulative start index of every stage after the first.
    std::vector<std::size_t> boundaries() const;
    void validate() const;
};

enum class VarianceMode { estimated, oracle };

std::string_view to_string(VarianceMode mode) noexcept;
std::optional<VarianceMode> parse_variance_mode(std::string_view name) noexcept;

struct TrialOptions {
    VarianceMode variance_mode = VarianceMode::estimated;
    CompensationWeight compensation = CompensationWeight::observed;
    VarEstParams varest;
};

/// ||w_true - w||^2 / ||w_true||^2. Throws std::invalid_argument on a zero
/// true system or length mismatch.
double msd(const WeightVector& weights, const WeightVector& true_weights);

/// 10 log10(ratio), floored at db_floor.
double to_db(double ratio) noexcept;

/**
 * Runs one algorithm over one data realisation. Entry i of the result is the
 * normalised deviation of the weights w(i) used at iteration i, so entry 0 is
 * exactly 1 for w(0) = 0. Throws run_error when the weights stop being finite.
 */
std::vector<double> run_trial(const SystemModel& model, Algorithm algorithm, const FilterConfig& cfg,
                              const ScenarioSchedule& schedule, const TrialOptions& options,
                              std::uint64_t trial_seed);

struct CurveMetadata {
    std::uint64_t master_seed = 0;
    std::uint64_t config_hash = 0;
};

struct MsdCurve {
    Algorithm algorithm = Algorithm::nmcc;
    std::string label;
    /// Step size per stage, for legends.
    std::vector<double> step_sizes;
    std::vector<double> values_db;
    std::size_t trials = 0;
    CurveMetadata metadata;
};

/// Ensemble mean per iteration (ascending trial order), then dB. Throws
/// std::invalid_argument when empty or lengths differ.
MsdCurve reduce_trials(std::span<const std::vector<double>> sequences);

/// Mean of the last `window` dB values. Throws std::invalid_argument when the
/// curve is shorter than the window or the window is zero.
double steady_state_msd(std::span<const double> values_db, std::size_t window = 200);
double steady_state_msd(const MsdCurve& curve, std::size_t window = 200);

struct EnsembleSettings {
    std::size_t trials = 200;
    std::uint64_t master_seed = 0;
    /// 0 picks the number of hardware threads.
    std::size_t workers = 0;
    TrialOptions options;
    std::uint64_t config_hash = 0;
};

/// Seed of trial `index`; shared by every algorithm so they see the same data.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t index) noexcept;

/// Runs the trials of one algorithm concurrently and reduces them in trial
/// order, so the result does not depend on the worker count.
MsdCurve run_ensemble(const SystemModel& model, Algorithm algorithm, const FilterConfig& cfg,
                      const ScenarioSchedule& schedule, const EnsembleSettings& settings);

} // namespace corrfilt
