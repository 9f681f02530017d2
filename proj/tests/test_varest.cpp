#include "corrfilt/errors.hpp"
#include "corrfilt/varest.hpp"
#include "frozen_oracles.hpp"
#include "test_support.hpp"

using namespace corrfilt;

namespace {

VarEstParams params(double a, double kappa = 5.0) {
    VarEstParams p;
    p.forgetting = a;
    p.kappa = kappa;
    return p;
}

} // namespace

TEST(VarEstParams, Validation) {
    EXPECT_THROW(params(1.0).validate(), config_error);
    EXPECT_THROW(params(-0.1).validate(), config_error);
    EXPECT_THROW(params(0.5, 0.0).validate(), config_error);
    EXPECT_NO_THROW(params(0.0).validate());
    EXPECT_THROW(NoiseVarianceEstimator(5, params(0.9), {-1.0, 0.0}), config_error);
}

TEST(ErrorPower, Example) {
    NoiseVarianceEstimator est(5, params(0.9), {1.0, 0.0});
    EXPECT_TRUE(near_rel(est.update_error_power(2.0), oracle::err_power_a09));
}

TEST(ErrorPower, DecaysWithZeroError) {
    NoiseVarianceEstimator est(5, params(0.9), {1.0, 0.0});
    double prev = 1.0;
    for (int i = 0; i < 50; ++i) {
        const double next = est.update_error_power(0.0);
        EXPECT_DOUBLE_EQ(next, 0.9 * prev);
        prev = next;
    }
}

TEST(ErrorPower, ConvergesToConstantSquaredError) {
    const auto steps = static_cast<int>(oracle::fixed_point_steps_a09);
    for (double start : {0.0, 10.0}) {
        NoiseVarianceEstimator est(5, params(0.9), {start, 0.0});
        double s = 0;
        for (int i = 0; i < steps; ++i) s = est.update_error_power(1.0);
        EXPECT_NEAR(s, 1.0, 1e-6 * std::max(1.0, start)) << "start " << start;
    }
}

TEST(ErrorPower, SingleOutlierEntersWithWeightOneMinusA) {
    NoiseVarianceEstimator est(5, params(0.9), {0.5, 0.0});
    const double after = est.update_error_power(1e6);
    EXPECT_TRUE(near_rel(after - 0.9 * 0.5, 0.1 * 1e12));
}

TEST(WeightPower, Example) {
    NoiseVarianceEstimator est(5, params(0.9));
    EXPECT_TRUE(near_rel(est.update_weight_power(WeightVector(std::vector<double>{-0.3, -0.9, 0.8, -0.7, 0.6})),
                         oracle::weight_power_true_system));
}

TEST(WeightPower, FixedPoints) {
    NoiseVarianceEstimator zero(3, params(0.9), {0.0, 4.0});
    for (int i = 0; i < 400; ++i) zero.update_weight_power(WeightVector(3));
    EXPECT_LT(zero.state().weight_power, 1e-12);

    const WeightVector w(std::vector<double>{1.0, 2.0, 2.0});
    NoiseVarianceEstimator est(3, params(0.9));
    for (int i = 0; i < 400; ++i) est.update_weight_power(w);
    EXPECT_NEAR(est.state().weight_power, 9.0 / 3.0, 1e-12);
}

TEST(WeightPower, RejectsLengthMismatch) {
    NoiseVarianceEstimator est(5, params(0.9));
    EXPECT_THROW(est.update_weight_power(WeightVector(4)), std::invalid_argument);
}

TEST(InputVariance, Example) {
    NoiseVarianceEstimator est(5, params(0.9, 5.0), {1.0, 0.2});
    // u^T u = 10
    const Regressor u(std::vector<double>{1, 1, 2, 2, 0});
    const auto r = est.estimate_input_variance(u, 0.001);
    EXPECT_TRUE(near_rel(r.value, oracle::input_variance_example));
    EXPECT_FALSE(r.regularized);
}

TEST(InputVariance, ZeroErrorPowerGivesZero) {
    NoiseVarianceEstimator est(5, params(0.9), {0.0, 0.3});
    EXPECT_EQ(est.estimate_input_variance(Regressor(std::vector<double>{1, 2, 3, 4, 5}), 0.001).value, 0.0);
}

TEST(InputVariance, ZeroInputFallsBackToEpsilon) {
    NoiseVarianceEstimator est(5, params(0.9), {1.0, 0.2});
    const auto r = est.estimate_input_variance(Regressor(5), 0.001);
    EXPECT_TRUE(r.regularized);
    EXPECT_TRUE(std::isfinite(r.value));
    EXPECT_GE(r.value, 0.0);
}

TEST(InputVariance, MonotoneInErrorPowerAndKappa) {
    const Regressor u(std::vector<double>{1, 1, 2, 2, 0});
    double prev = -1;
    for (double se = 0.0; se <= 5.0; se += 0.25) {
        const double v = NoiseVarianceEstimator(5, params(0.9, 5.0), {se, 0.2}).estimate_input_variance(u, 0).value;
        EXPECT_GE(v, 0.0);
        EXPECT_GT(v, prev);
        prev = v;
    }
    prev = 1e300;
    for (double kappa = 0.5; kappa <= 20.0; kappa += 0.5) {
        const double v = NoiseVarianceEstimator(5, params(0.9, kappa), {1.0, 0.2}).estimate_input_variance(u, 0).value;
        EXPECT_LT(v, prev);
        prev = v;
    }
}

TEST(OutlierClip, BoundsImpulsiveErrors) {
    VarEstParams p = params(0.9);
    p.clip = OutlierClip{0.9, 32};
    NoiseVarianceEstimator clipped(5, p);
    NoiseVarianceEstimator plain(5, params(0.9));
    for (int i = 0; i < 64; ++i) {
        clipped.update_error_power(1.0);
        plain.update_error_power(1.0);
    }
    EXPECT_DOUBLE_EQ(clipped.state().error_power, plain.state().error_power);
    clipped.update_error_power(1e6);
    plain.update_error_power(1e6);
    EXPECT_LE(clipped.state().error_power, 1.0 + 1e-12);
    EXPECT_GT(plain.state().error_power, 1e10);
}
