#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace corrfilt {

enum class Algorithm { lms, nlms, mcc, nmcc, bcnlms, bcnmcc };

inline constexpr std::array<Algorithm, 6> all_algorithms{
    Algorithm::lms, Algorithm::nlms, Algorithm::mcc, Algorithm::nmcc, Algorithm::bcnlms, Algorithm::bcnmcc};

std::string_view to_string(Algorithm algorithm) noexcept;
/// Display name, e.g. "BCNMCC".
std::string_view display_name(Algorithm algorithm) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

bool is_bias_compensated(Algorithm algorithm) noexcept;
bool uses_kernel(Algorithm algorithm) noexcept;

/// How the compensation term's kernel factor exp(-v^2 / 2 sigma^2) is
/// evaluated. The true output noise v is unobservable; `observed` uses the
/// a-priori error instead, `oracle` consumes v supplied by the harness.
enum class CompensationWeight { observed, oracle };

std::string_view to_string(CompensationWeight mode) noexcept;
std::optional<CompensationWeight> parse_compensation_weight(std::string_view name) noexcept;

/// Filter tap coefficients. Fixed length >= 1.
class WeightVector {
public:
    /// Zero vector of the given length.
    explicit WeightVector(std::size_t taps);
    /// Throws config_error when empty or when any entry is non-finite.
    explicit WeightVector(std::vector<double> taps);

    std::size_t size() const noexcept { return taps_.size(); }
    double operator[](std::size_t i) const noexcept { return taps_[i]; }
    double& operator[](std::size_t i) noexcept { return taps_[i]; }
    std::span<const double> taps() const noexcept { return taps_; }
    std::span<double> taps() noexcept { return taps_; }

    double squared_norm() const noexcept;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;

private:
    std::vector<double> taps_;
};

/// Tap-delay-line input window, newest sample first.
class Regressor {
public:
    /// Zero-padded window of the given length.
    explicit Regressor(std::size_t taps);
    explicit Regressor(std::vector<double> taps);

    /// Shifts `newest` in at position 0 and drops the oldest sample.
    void push(double newest) noexcept;

    std::size_t size() const noexcept { return taps_.size(); }
    double operator[](std::size_t i) const noexcept { return taps_[i]; }
    std::span<const double> taps() const noexcept { return taps_; }

    double squared_norm() const noexcept;

private:
    std::vector<double> taps_;
};

/// Step size mu, kernel bandwidth sigma, regularisation epsilon, tap count L.
/// Validated on construction.
class FilterConfig {
public:
    FilterConfig(double step_size, double kernel_bandwidth, double regularization, std::size_t taps);

    double step_size() const noexcept { return step_size_; }
    double kernel_bandwidth() const noexcept { return kernel_bandwidth_; }
    double regularization() const noexcept { return regularization_; }
    std::size_t taps() const noexcept { return taps_; }

    FilterConfig with_step_size(double step_size) const;
    FilterConfig with_kernel_bandwidth(double kernel_bandwidth) const;

private:
    double step_size_;
    double kernel_bandwidth_;
    double regularization_;
    std::size_t taps_;
};

struct StepOutcome {
    double error = 0.0;
    /// Correntropy weight applied to the error-driven term, in (0, 1]. Always 1
    /// for the LMS-family algorithms.
    double kernel_weight = 1.0;
    /// Compensation term added to the weights; zero for non-BC algorithms.
    std::vector<double> bias_vector;
    WeightVector updated_weights{std::size_t{1}};
    /// Set when u = 0 and epsilon = 0 left the normalised update undefined.
    bool skipped = false;
};

/// exp(-e^2 / (2 sigma^2)). Throws config_error when sigma <= 0.
double kernel_weight(double error, double sigma);

/// u^T w. Throws std::invalid_argument on length mismatch.
double predict(const WeightVector& weights, const Regressor& input);

StepOutcome lms_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg);
StepOutcome nlms_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg);
StepOutcome mcc_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg);
StepOutcome nmcc_step(const WeightVector& weights, const Regressor& input, double desired, const FilterConfig& cfg);

/// B = mu * kernel_factor * input_noise_variance * w / (u^T u + epsilon).
std::vector<double> bias_vector(const WeightVector& weights, const Regressor& input, double input_noise_variance,
                                double kernel_factor, const FilterConfig& cfg);

/**
 * Bias-compensated NMCC:
 *
 *   w+ = w + B + mu * exp(-e^2 / 2 sigma^2) * e * u / (u^T u + epsilon)
 *
 * with B from bias_vector(). `compensation_kernel` overrides the kernel factor
 * inside B; when absent it is evaluated on the observed error e.
 */
StepOutcome bcnmcc_step(const WeightVector& weights, const Regressor& input, double desired,
                        double input_noise_variance, const FilterConfig& cfg,
                        std::optional<double> compensation_kernel = std::nullopt);

/// bcnmcc_step with both kernel factors fixed to 1.
StepOutcome bcnlms_step(const WeightVector& weights, const Regressor& input, double desired,
                        double input_noise_variance, const FilterConfig& cfg);

/// Per-step side information the BC algorithms need.
struct StepContext {
    double input_noise_variance = 0.0;
    /// True output noise; required only in CompensationWeight::oracle mode.
    std::optional<double> output_noise;
};

/// Owns the weights of one adaptive filter and dispatches to the update rule
/// of its algorithm. Starts from w(0) = 0.
class AdaptiveFilter {
public:
    AdaptiveFilter(Algorithm algorithm, FilterConfig cfg,
                   CompensationWeight compensation = CompensationWeight::observed);

    const StepOutcome& adapt(const Regressor& input, double desired, const StepContext& ctx = {});

    Algorithm algorithm() const noexcept { return algorithm_; }
    const FilterConfig& config() const noexcept { return cfg_; }
    const WeightVector& weights() const noexcept { return weights_; }

    void set_step_size(double step_size) { cfg_ = cfg_.with_step_size(step_size); }

private:
    Algorithm algorithm_;
    FilterConfig cfg_;
    CompensationWeight compensation_;
    WeightVector weights_;
    StepOutcome last_;
};

} // namespace corrfilt
