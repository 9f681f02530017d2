#pragma once

#include "corrfilt/filters.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace corrfilt {

/// Clips e^2 at the given quantile of the last `window` values before it
/// enters the error-power recursion.
struct OutlierClip {
    double quantile = 0.95;
    std::size_t window = 64;
};

struct VarEstParams {
    /// Forgetting factor a in [0, 1).
    double forgetting = 0.3;
    /// Input-output noise ratio kappa > 0.
    double kappa = 5.0;
    /// Off unless set.
    std::optional<OutlierClip> clip;

    /// Throws config_error on out-of-range values.
    void validate() const;
};

/// Recursive power estimates; both start at zero.
struct VarEstState {
    double error_power = 0.0;
    double weight_power = 0.0;
};

struct InputVarianceEstimate {
    double value = 0.0;
    /// u^T u was zero and epsilon was substituted in the denominator.
    bool regularized = false;
};

/**
 * Input-noise variance estimator:
 *
 *   s_e(i)  = a s_e(i-1) + (1 - a) e^2(i)
 *   s_w(i)  = a s_w(i-1) + (1 - a) w^T(i) w(i) / L
 *   var(i)  = s_e / (L s_w + kappa + s_e L / (u^T u))
 *
 * Constant-size state per trial.
 */
class NoiseVarianceEstimator {
public:
    explicit NoiseVarianceEstimator(std::size_t taps, VarEstParams params = {}, VarEstState initial = {});

    double update_error_power(double error);
    /// Throws std::invalid_argument when the weight length differs from L.
    double update_weight_power(const WeightVector& weights);
    InputVarianceEstimate estimate_input_variance(const Regressor& input, double regularization) const;

    const VarEstState& state() const noexcept { return state_; }
    const VarEstParams& params() const noexcept { return params_; }
    std::size_t taps() const noexcept { return taps_; }

private:
    double clipped(double squared_error);

    std::size_t taps_;
    VarEstParams params_;
    VarEstState state_;
    std::vector<double> recent_;  // ring buffer for the optional clip
    std::size_t recent_next_ = 0;
};

} // namespace corrfilt
