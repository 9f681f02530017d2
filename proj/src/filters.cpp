#include "corrfilt/filters.hpp"

#include "corrfilt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace corrfilt {

namespace {

struct AlgorithmInfo {
    Algorithm algorithm;
    std::string_view key;
    std::string_view display;
};

constexpr std::array<AlgorithmInfo, 6> algorithm_table{{
    {Algorithm::lms, "lms", "LMS"},
    {Algorithm::nlms, "nlms", "NLMS"},
    {Algorithm::mcc, "mcc", "MCC"},
    {Algorithm::nmcc, "nmcc", "NMCC"},
    {Algorithm::bcnlms, "bcnlms", "BCNLMS"},
    {Algorithm::bcnmcc, "bcnmcc", "BCNMCC"},
}};

void check_lengths(const WeightVector& weights, const Regressor& input, const FilterConfig& cfg) {
    if (weights.size() != cfg.taps()) {
        throw std::invalid_argument("weight vector has " + std::to_string(weights.size()) +
                                    " taps, filter config expects " + std::to_string(cfg.taps()));
    }
    if (input.size() != weights.size()) {
        throw std::invalid_argument("regressor has " + std::to_string(input.size()) + " taps, weights have " +
                                    std::to_string(weights.size()));
    }
}

// w + gain * u, where gain already folds in mu, the kernel weight and e.
WeightVector add_scaled(const WeightVector& weights, const Regressor& input, double gain) {
    WeightVector out = weights;
    for (std::size_t l = 0; l < out.size(); ++l) {
        out[l] += gain * input[l];
    }
    return out;
}

StepOutcome plain_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg,
                       bool kernelized, bool normalized) {
    check_lengths(weights, input, cfg);
    StepOutcome out;
    out.error = desired - predict(weights, input);
    out.kernel_weight = kernelized ? kernel_weight(out.error, cfg.kernel_bandwidth()) : 1.0;
    out.bias_vector.assign(weights.size(), 0.0);

    double gain = cfg.step_size() * out.kernel_weight * out.error;
    if (normalized) {
        const double power = input.squared_norm() + cfg.regularization();
        if (power == 0.0) {
            out.updated_weights = weights;
            out.skipped = true;
            return out;
        }
        gain /= power;
    }
    out.updated_weights = add_scaled(weights, input, gain);
    return out;
}

StepOutcome compensated_step(const WeightVector& weights, const Regressor& input, double desired,
                             double input_noise_variance, const FilterConfig& cfg, bool kernelized,
                             std::optional<double> compensation_kernel) {
    check_lengths(weights, input, cfg);
    if (!(input_noise_variance >= 0.0)) {
        throw std::invalid_argument("input noise variance must be >= 0");
    }
    StepOutcome out;
    out.error = desired - predict(weights, input);
    out.kernel_weight = kernelized ? kernel_weight(out.error, cfg.kernel_bandwidth()) : 1.0;

    const double power = input.squared_norm() + cfg.regularization();
    if (power == 0.0) {
        out.bias_vector.assign(weights.size(), 0.0);
        out.updated_weights = weights;
        out.skipped = true;
        return out;
    }

    const double factor = kernelized ? compensation_kernel.value_or(out.kernel_weight) : 1.0;
    out.bias_vector = bias_vector(weights, input, input_noise_variance, factor, cfg);
    const double gain = cfg.step_size() * out.kernel_weight * out.error / power;
    out.updated_weights = weights;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        out.updated_weights[l] += out.bias_vector[l] + gain * input[l];
    }
    return out;
}

} // namespace

std::string_view to_string(Algorithm algorithm) noexcept {
    for (const auto& info : algorithm_table) {
        if (info.algorithm == algorithm) {
            return info.key;
        }
    }
    return "?";
}

std::string_view display_name(Algorithm algorithm) noexcept {
    for (const auto& info : algorithm_table) {
        if (info.algorithm == algorithm) {
            return info.display;
        }
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
    for (const auto& info : algorithm_table) {
        if (info.key == name) {
            return info.algorithm;
        }
    }
    return std::nullopt;
}

bool is_bias_compensated(Algorithm algorithm) noexcept {
    return algorithm == Algorithm::bcnlms || algorithm == Algorithm::bcnmcc;
}

bool uses_kernel(Algorithm algorithm) noexcept {
    return algorithm == Algorithm::mcc || algorithm == Algorithm::nmcc || algorithm == Algorithm::bcnmcc;
}

std::string_view to_string(CompensationWeight mode) noexcept {
    return mode == CompensationWeight::observed ? "observed" : "oracle";
}

std::optional<CompensationWeight> parse_compensation_weight(std::string_view name) noexcept {
    if (name == "observed") {
        return CompensationWeight::observed;
    }
    if (name == "oracle") {
        return CompensationWeight::oracle;
    }
    return std::nullopt;
}

WeightVector::WeightVector(std::size_t taps) : taps_(taps, 0.0) {
    if (taps == 0) {
        throw config_error("weight vector needs at least one tap");
    }
}

WeightVector::WeightVector(std::vector<double> taps) : taps_(std::move(taps)) {
    if (taps_.empty()) {
        throw config_error("weight vector needs at least one tap");
    }
    if (!std::all_of(taps_.begin(), taps_.end(), [](double x) { return std::isfinite(x); })) {
        throw config_error("weight vector entries must be finite");
    }
}

double WeightVector::squared_norm() const noexcept {
    double acc = 0.0;
    for (const double w : taps_) {
        acc += w * w;
    }
    return acc;
}

Regressor::Regressor(std::size_t taps) : taps_(taps, 0.0) {
    if (taps == 0) {
        throw config_error("regressor needs at least one tap");
    }
}

Regressor::Regressor(std::vector<double> taps) : taps_(std::move(taps)) {
    if (taps_.empty()) {
        throw config_error("regressor needs at least one tap");
    }
}

void Regressor::push(double newest) noexcept {
    std::shift_right(taps_.begin(), taps_.end(), 1);
    taps_.front() = newest;
}

double Regressor::squared_norm() const noexcept {
    double acc = 0.0;
    for (const double u : taps_) {
        acc += u * u;
    }
    return acc;
}

FilterConfig::FilterConfig(double step_size, double kernel_bandwidth, double regularization, std::size_t taps)
    : step_size_(step_size), kernel_bandwidth_(kernel_bandwidth), regularization_(regularization), taps_(taps) {
    if (!(step_size > 0.0) || !std::isfinite(step_size)) {
        throw config_error("step_size must be > 0, got " + std::to_string(step_size));
    }
    if (!(kernel_bandwidth > 0.0) || !std::isfinite(kernel_bandwidth)) {
        throw config_error("sigma (kernel bandwidth) must be > 0, got " + std::to_string(kernel_bandwidth));
    }
    if (!(regularization >= 0.0) || !std::isfinite(regularization)) {
        throw config_error("epsilon must be >= 0, got " + std::to_string(regularization));
    }
    if (taps == 0) {
        throw config_error("filter needs at least one tap");
    }
}

FilterConfig FilterConfig::with_step_size(double step_size) const {
    return {step_size, kernel_bandwidth_, regularization_, taps_};
}

FilterConfig FilterConfig::with_kernel_bandwidth(double kernel_bandwidth) const {
    return {step_size_, kernel_bandwidth, regularization_, taps_};
}

double kernel_weight(double error, double sigma) {
    if (!(sigma > 0.0)) {
        throw config_error("kernel bandwidth must be > 0");
    }
    return std::exp(-(error * error) / (2.0 * sigma * sigma));
}

double predict(const WeightVector& weights, const Regressor& input) {
    if (weights.size() != input.size()) {
        throw std::invalid_argument("predict: regressor has " + std::to_string(input.size()) +
                                    " taps, weights have " + std::to_string(weights.size()));
    }
    double acc = 0.0;
    for (std::size_t l = 0; l < weights.size(); ++l) {
        acc += input[l] * weights[l];
    }
    return acc;
}

StepOutcome lms_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg) {
    return plain_step(weights, input, desired, cfg, false, false);
}

StepOutcome nlms_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg) {
    return plain_step(weights, input, desired, cfg, false, true);
}

StepOutcome mcc_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg) {
    return plain_step(weights, input, desired, cfg, true, false);
}

StepOutcome nmcc_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg) {
    return plain_step(weights, input, desired, cfg, true, true);
}

std::vector<double> bias_vector(const WeightVector& weights, const Regressor& input, double input_noise_variance,
                                double kernel_factor, const FilterConfig& cfg) {
    if (!(input_noise_variance >= 0.0)) {
        throw std::invalid_argument("bias_vector: input noise variance must be >= 0");
    }
    if (weights.size() != input.size()) {
        throw std::invalid_argument("bias_vector: length mismatch");
    }
    const double power = input.squared_norm() + cfg.regularization();
    std::vector<double> out(weights.size(), 0.0);
    if (power == 0.0 || input_noise_variance == 0.0) {
        return out;
    }
    const double scale = cfg.step_size() * kernel_factor * input_noise_variance / power;
    for (std::size_t l = 0; l < out.size(); ++l) {
        out[l] = scale * weights[l];
    }
    return out;
}

StepOutcome bcnmcc_step(const WeightVector& weights, const Regressor& input, double desired,
                        double input_noise_variance, const FilterConfig& cfg,
                        std::optional<double> compensation_kernel) {
    return compensated_step(weights, input, desired, input_noise_variance, cfg, true, compensation_kernel);
}

StepOutcome bcnlms_step(const WeightVector& weights, const Regressor& input, double desired,
                        double input_noise_variance, const FilterConfig& cfg) {
    return compensated_step(weights, input, desired, input_noise_variance, cfg, false, std::nullopt);
}

AdaptiveFilter::AdaptiveFilter(Algorithm algorithm, FilterConfig cfg, CompensationWeight compensation)
    : algorithm_(algorithm), cfg_(cfg), compensation_(compensation), weights_(cfg.taps()) {}

const StepOutcome& AdaptiveFilter::adapt(const Regressor& input, double desired, const StepContext& ctx) {
    switch (algorithm_) {
    case Algorithm::lms:
        last_ = lms_step(weights_, input, desired, cfg_);
        break;
    case Algorithm::nlms:
        last_ = nlms_step(weights_, input, desired, cfg_);
        break;
    case Algorithm::mcc:
        last_ = mcc_step(weights_, input, desired, cfg_);
        break;
    case Algorithm::nmcc:
        last_ = nmcc_step(weights_, input, desired, cfg_);
        break;
    case Algorithm::bcnlms:
        last_ = bcnlms_step(weights_, input, desired, ctx.input_noise_variance, cfg_);
        break;
    case Algorithm::bcnmcc: {
        std::optional<double> factor;
        if (compensation_ == CompensationWeight::oracle) {
            if (!ctx.output_noise) {
                throw std::invalid_argument("oracle compensation weight needs the true output noise");
            }
            factor = kernel_weight(*ctx.output_noise, cfg_.kernel_bandwidth());
        }
        last_ = bcnmcc_step(weights_, input, desired, ctx.input_noise_variance, cfg_, factor);
        break;
    }
    }
    weights_ = last_.updated_weights;
    return last_;
}

} // namespace corrfilt
