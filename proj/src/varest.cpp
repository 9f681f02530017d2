#include "corrfilt/varest.hpp"

#include "corrfilt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace corrfilt {

void VarEstParams::validate() const {
    if (!(forgetting >= 0.0 && forgetting < 1.0)) {
        throw config_error("varest.forgetting must lie in [0, 1), got " + std::to_string(forgetting));
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw config_error("varest.kappa must be > 0, got " + std::to_string(kappa));
    }
    if (clip) {
        if (!(clip->quantile > 0.0 && clip->quantile <= 1.0)) {
            throw config_error("varest.clip.quantile must lie in (0, 1]");
        }
        if (clip->window == 0) {
            throw config_error("varest.clip.window must be >= 1");
        }
    }
}

NoiseVarianceEstimator::NoiseVarianceEstimator(std::size_t taps, VarEstParams params, VarEstState initial)
    : taps_(taps), params_(params), state_(initial) {
    if (taps == 0) {
        throw config_error("variance estimator needs at least one tap");
    }
    params_.validate();
    if (!(initial.error_power >= 0.0) || !(initial.weight_power >= 0.0)) {
        throw config_error("variance estimator powers must be >= 0");
    }
    if (params_.clip) {
        recent_.reserve(params_.clip->window);
    }
}

double NoiseVarianceEstimator::clipped(double squared_error) {
    if (!params_.clip) {
        return squared_error;
    }
    const auto& clip = *params_.clip;
    double out = squared_error;
    if (recent_.size() == clip.window) {
        auto sorted = recent_;
        const auto rank = static_cast<std::size_t>(std::ceil(clip.quantile * static_cast<double>(sorted.size()))) - 1;
        std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank), sorted.end());
        out = std::min(squared_error, sorted[rank]);
        recent_[recent_next_] = squared_error;
        recent_next_ = (recent_next_ + 1) % clip.window;
    } else {
        recent_.push_back(squared_error);
    }
    return out;
}

double NoiseVarianceEstimator::update_error_power(double error) {
    const double a = params_.forgetting;
    state_.error_power = a * state_.error_power + (1.0 - a) * clipped(error * error);
    return state_.error_power;
}

double NoiseVarianceEstimator::update_weight_power(const WeightVector& weights) {
    if (weights.size() != taps_) {
        throw std::invalid_argument("update_weight_power: expected " + std::to_string(taps_) + " taps, got " +
                                    std::to_string(weights.size()));
    }
    const double a = params_.forgetting;
    state_.weight_power =
        a * state_.weight_power + (1.0 - a) * weights.squared_norm() / static_cast<double>(taps_);
    return state_.weight_power;
}

InputVarianceEstimate NoiseVarianceEstimator::estimate_input_variance(const Regressor& input,
                                                                      double regularization) const {
    InputVarianceEstimate out;
    if (state_.error_power == 0.0) {
        return out;
    }
    double power = input.squared_norm();
    if (power == 0.0) {
        power += regularization;
        out.regularized = true;
    }
    const auto taps = static_cast<double>(taps_);
    // A zero power even after regularisation sends the last term to +inf and
    // the estimate to 0.
    const double input_term = power > 0.0 ? state_.error_power * taps / power : HUGE_VAL;
    out.value = state_.error_power / (taps * state_.weight_power + params_.kappa + input_term);
    return out;
}

} // namespace corrfilt
