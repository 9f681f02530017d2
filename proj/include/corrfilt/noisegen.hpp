#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string_view>

namespace corrfilt {

/// Recorded in every output header so results can be regenerated.
inline constexpr std::string_view generator_name = "xoshiro256++ (splitmix64 seeding)";

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Mixes a master seed with an index (trial number, stream id) into an
/// independent 64-bit seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/**
 * xoshiro256++ engine, period 2^256 - 1. Satisfies
 * std::uniform_random_bit_generator so it can drive <random> distributions,
 * although the samplers below do their own transforms for bit-exact
 * portability across standard libraries.
 */
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

private:
    std::array<std::uint64_t, 4> state_{};
};

class GaussianParams {
public:
    GaussianParams() = default;
    /// Throws config_error when variance < 0 or either value is non-finite.
    GaussianParams(double mean, double variance);

    double mean() const noexcept { return mean_; }
    double variance() const noexcept { return variance_; }

private:
    double mean_ = 0.0;
    double variance_ = 1.0;
};

/**
 * Parameters of the alpha-stable law with characteristic function
 *
 *   f(t) = exp{ j theta t - gamma |t|^alpha [1 + j beta sgn(t) S(t, alpha)] },
 *   S = tan(alpha pi / 2)      for alpha != 1,
 *   S = (2 / pi) log|t|        for alpha == 1.
 *
 * gamma is the dispersion (scale^alpha), theta the location.
 */
class AlphaStableParams {
public:
    AlphaStableParams() = default;
    /// Throws config_error unless 0 < alpha <= 2, |beta| <= 1, gamma > 0, theta finite.
    AlphaStableParams(double alpha, double beta, double gamma, double theta);

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return beta_; }
    double gamma() const noexcept { return gamma_; }
    double theta() const noexcept { return theta_; }

    /// Scale parameter gamma^(1/alpha).
    double scale() const noexcept;

    AlphaStableParams with_alpha(double alpha) const { return {alpha, beta_, gamma_, theta_}; }

    friend bool operator==(const AlphaStableParams&, const AlphaStableParams&) = default;

private:
    double alpha_ = 2.0;
    double beta_ = 0.0;
    double gamma_ = 1.0;
    double theta_ = 0.0;
};

/// One reproducible random stream. Identical (seed, stream) pairs yield
/// identical sequences on every platform. Single owner, not thread-safe.
class SeededSource {
public:
    SeededSource(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform_open() noexcept;
    double standard_exponential() noexcept;
    /// Box-Muller; the second variate of each pair is cached.
    double standard_normal() noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    Xoshiro256pp engine_;
    std::optional<double> spare_normal_;
};

double sample_gaussian(SeededSource& source, const GaussianParams& params) noexcept;

/// Chambers-Mallows-Stuck draw matching AlphaStableParams' characteristic function.
double sample_alpha_stable(SeededSource& source, const AlphaStableParams& params) noexcept;

/// Closed-form characteristic function of the alpha-stable law at t.
std::complex<double> alpha_stable_cf(const AlphaStableParams& params, double t) noexcept;

/// (1/N) sum_k exp(j t x_k). Throws std::invalid_argument on an empty sample set.
std::complex<double> empirical_cf(std::span<const double> samples, double t);

} // namespace corrfilt
