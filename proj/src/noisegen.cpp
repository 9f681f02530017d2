#include "corrfilt/noisegen.hpp"

#include "corrfilt/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace corrfilt {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

} // namespace

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    auto z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    std::uint64_t x = master;
    const auto a = splitmix64(x);
    std::uint64_t y = a ^ (index * 0xD1B54A32D192ED03ULL + 0x8CB92BA72F3D8DD7ULL);
    splitmix64(y);
    return splitmix64(y);
}

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) noexcept {
    auto x = seed;
    for (auto& s : state_) {
        s = splitmix64(x);
    }
}

Xoshiro256pp::result_type Xoshiro256pp::operator()() noexcept {
    const auto result = rotl(state_[0] + state_[3], 23) + state_[0];
    const auto t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

GaussianParams::GaussianParams(double mean, double variance) : mean_(mean), variance_(variance) {
    if (!std::isfinite(mean)) {
        throw config_error("gaussian mean must be finite");
    }
    if (!std::isfinite(variance) || variance < 0.0) {
        throw config_error("gaussian variance must be finite and >= 0, got " + std::to_string(variance));
    }
}

AlphaStableParams::AlphaStableParams(double alpha, double beta, double gamma, double theta)
    : alpha_(alpha), beta_(beta), gamma_(gamma), theta_(theta) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
        throw config_error("alpha-stable alpha must lie in (0, 2], got " + std::to_string(alpha));
    }
    if (!(beta >= -1.0 && beta <= 1.0)) {
        throw config_error("alpha-stable beta must lie in [-1, 1], got " + std::to_string(beta));
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw config_error("alpha-stable gamma must be > 0, got " + std::to_string(gamma));
    }
    if (!std::isfinite(theta)) {
        throw config_error("alpha-stable theta must be finite");
    }
}

double AlphaStableParams::scale() const noexcept { return std::pow(gamma_, 1.0 / alpha_); }

SeededSource::SeededSource(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream), engine_(derive_seed(seed, stream)) {}

double SeededSource::uniform_open() noexcept {
    // (k + 0.5) / 2^53 for k in [0, 2^53) never hits 0 or 1.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double SeededSource::standard_exponential() noexcept { return -std::log(uniform_open()); }

double SeededSource::standard_normal() noexcept {
    if (spare_normal_) {
        const double z = *spare_normal_;
        spare_normal_.reset();
        return z;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open()));
    const double angle = 2.0 * std::numbers::pi * uniform_open();
    spare_normal_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

double sample_gaussian(SeededSource& source, const GaussianParams& params) noexcept {
    return params.mean() + std::sqrt(params.variance()) * source.standard_normal();
}

double sample_alpha_stable(SeededSource& source, const AlphaStableParams& params) noexcept {
    using std::numbers::pi;
    const double alpha = params.alpha();
    const double scale = params.scale();
    const double v = pi * (source.uniform_open() - 0.5);
    const double w = source.standard_exponential();

    if (alpha == 1.0) {
        // Same skewness sign convention as the textbook S1 parametrisation.
        const double beta = params.beta();
        const double half_pi_bv = 0.5 * pi + beta * v;
        const double x =
            (2.0 / pi) * (half_pi_bv * std::tan(v) - beta * std::log((0.5 * pi * w * std::cos(v)) / half_pi_bv));
        return scale * x + (2.0 / pi) * beta * scale * std::log(scale) + params.theta();
    }

    // The +j beta convention of the characteristic function is the mirror
    // image of the S1 form for alpha != 1, hence the sign flip.
    const double beta = -params.beta();
    const double tan_term = beta * std::tan(0.5 * pi * alpha);
    const double shift = std::atan(tan_term) / alpha;
    const double stretch = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha));
    const double arg = alpha * (v + shift);
    const double x = stretch * std::sin(arg) / std::pow(std::cos(v), 1.0 / alpha) *
                     std::pow(std::cos(v - arg) / w, (1.0 - alpha) / alpha);
    return scale * x + params.theta();
}

std::complex<double> alpha_stable_cf(const AlphaStableParams& params, double t) noexcept {
    using std::numbers::pi;
    if (t == 0.0) {
        return {1.0, 0.0};
    }
    const double abs_t = std::abs(t);
    const double sgn = t > 0.0 ? 1.0 : -1.0;
    const double skew = params.alpha() == 1.0 ? (2.0 / pi) * std::log(abs_t) : std::tan(0.5 * pi * params.alpha());
    const double magnitude = params.gamma() * std::pow(abs_t, params.alpha());
    const std::complex<double> exponent{-magnitude, params.theta() * t - magnitude * params.beta() * sgn * skew};
    return std::exp(exponent);
}

std::complex<double> empirical_cf(std::span<const double> samples, double t) {
    if (samples.empty()) {
        throw std::invalid_argument("empirical_cf: empty sample set");
    }
    double re = 0.0;
    double im = 0.0;
    for (const double x : samples) {
        re += std::cos(t * x);
        im += std::sin(t * x);
    }
    const auto n = static_cast<double>(samples.size());
    return {re / n, im / n};
}

} // namespace corrfilt
