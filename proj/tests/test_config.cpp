#include "corrfilt/config.hpp"
#include "corrfilt/errors.hpp"

#include <gtest/gtest.h>

#include <string>

using namespace corrfilt;

namespace {

const std::string config_dir = CORRFILT_CONFIG_DIR;

std::string minimal(const std::string& extra = "") {
    return R"({"scenario": "custom", "algorithms": ["nmcc"], "filters": {"nmcc": {"step_size": 0.05}}, "seed": 1)" +
           extra + "}";
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const config_error& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(ParseConfig, ShippedDefaults) {
    const auto c = load_config(config_dir + "/paper_defaults.json");
    EXPECT_EQ(c.scenario, "stage-switch");
    EXPECT_EQ(c.sigma, 4.0);
    EXPECT_EQ(c.epsilon, 0.001);
    EXPECT_EQ(c.varest.kappa, 5.0);
    EXPECT_EQ(c.model.input_noise.variance(), 0.25);
    EXPECT_EQ(c.trials, 200u);
    EXPECT_EQ(c.model.output_noise, AlphaStableParams(1.3, 0, 0.2, 0));
    EXPECT_EQ(c.model.true_weights, WeightVector(std::vector<double>{-0.3, -0.9, 0.8, -0.7, 0.6}));
    EXPECT_EQ(c.model.input.mean(), 1.0);
    EXPECT_EQ(c.model.input.variance(), 1.0);
    EXPECT_EQ(c.resolved_algorithms().size(), 6u);
    ASSERT_TRUE(c.seed.has_value());

    const auto schedule = c.resolved_schedule();
    ASSERT_EQ(schedule.stages.size(), 2u);
    EXPECT_EQ(schedule.stages[0].output_noise.alpha(), 1.8);
    EXPECT_EQ(schedule.stages[1].output_noise.alpha(), 1.3);
}

TEST(ParseConfig, ShippedConfigsValidate) {
    for (const char* name : {"paper_defaults", "matched_pair", "sigma_sweep", "input_variance_sweep"}) {
        EXPECT_NO_THROW(load_config(config_dir + "/" + name + ".json").validate()) << name;
    }
}

TEST(ParseConfig, PerAlgorithmOverrides) {
    const auto c = parse_config(
        R"({"scenario": "custom", "algorithms": ["mcc"], "sigma": 4, "filters": {"mcc": {"step_size": 0.01, "sigma": 2, "epsilon": 0.5}}, "seed": 1})");
    const auto f = c.filter_config(Algorithm::mcc);
    EXPECT_EQ(f.step_size(), 0.01);
    EXPECT_EQ(f.kernel_bandwidth(), 2.0);
    EXPECT_EQ(f.regularization(), 0.5);
}

TEST(ParseConfig, TrialsZeroNamesField) {
    EXPECT_NE(error_of(minimal(R"(, "trials": 0)")).find("trials"), std::string::npos);
}

TEST(ParseConfig, UnknownKeySuggestsNearest) {
    const auto msg = error_of(minimal(R"(, "sigm": 4)"));
    EXPECT_NE(msg.find("'sigm'"), std::string::npos) << msg;
    EXPECT_NE(msg.find("did you mean 'sigma'"), std::string::npos) << msg;
}

TEST(ParseConfig, UnknownNestedKeyReportsPath) {
    const auto msg = error_of(minimal(R"(, "varest": {"kapa": 5})"));
    EXPECT_NE(msg.find("varest.kapa"), std::string::npos) << msg;
    EXPECT_NE(msg.find("varest.kappa"), std::string::npos) << msg;
}

TEST(ParseConfig, DistinctErrorsNameTheField) {
    EXPECT_NE(error_of("{\"scenario\": ").find("malformed JSON"), std::string::npos);
    EXPECT_NE(error_of(R"({"filters": {}})").find("'scenario'"), std::string::npos);
    EXPECT_NE(error_of(R"({"scenario": "custom", "filters": {"nmcc": {}}, "seed": 1})").find("filters.nmcc.step_size"),
              std::string::npos);
    EXPECT_NE(error_of(R"({"scenario": "custom", "algorithms": ["lms"], "filters": {"nmcc": {"step_size": 0.1}}, "seed": 1})")
                  .find("lms"),
              std::string::npos);
    EXPECT_NE(error_of(minimal(R"(, "trials": "many")")).find("trials"), std::string::npos);
    EXPECT_NE(error_of(minimal(R"(, "model": {"output_noise": {"alpha": 2.5, "gamma": 0.2}})")).find("model.output_noise"),
              std::string::npos);
    EXPECT_NE(error_of(minimal(R"(, "model": {"output_noise": {"gamma": 0.2}})")).find("model.output_noise.alpha"),
              std::string::npos);
    EXPECT_NE(error_of(minimal(R"(, "varest": {"forgetting": 1.0})")).find("varest.forgetting"), std::string::npos);
    EXPECT_NE(error_of(minimal(R"(, "variance_mode": "guess")")).find("variance_mode"), std::string::npos);
    EXPECT_NE(error_of(R"({"scenario": "fig9", "filters": {"nmcc": {"step_size": 0.1}}, "seed": 1})").find("sigma-sweep"),
              std::string::npos);
    EXPECT_NE(error_of("[1, 2]").find("object"), std::string::npos);
}

TEST(ParseConfig, SeedMayComeLater) {
    const auto c = parse_config(
        R"({"scenario": "custom", "algorithms": ["nmcc"], "filters": {"nmcc": {"step_size": 0.05}}})");
    EXPECT_FALSE(c.seed.has_value());
    EXPECT_THROW(c.validate(), config_error);
}

TEST(ConfigHash, IgnoresPresentationFields) {
    auto a = parse_config(minimal());
    auto b = a;
    b.output_dir = "elsewhere";
    b.workers = 8;
    b.plot = true;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 2;
    EXPECT_NE(config_hash(a), config_hash(b));
    auto c = a;
    c.filters[Algorithm::nmcc].step_size = 0.06;
    EXPECT_NE(config_hash(a), config_hash(c));
}

TEST(EditDistance, Values) {
    EXPECT_EQ(edit_distance("sigm", "sigma"), 1u);
    EXPECT_EQ(edit_distance("kitten", "sitting"), 3u);
    EXPECT_EQ(edit_distance("", "abc"), 3u);
    EXPECT_EQ(edit_distance("same", "same"), 0u);
}
