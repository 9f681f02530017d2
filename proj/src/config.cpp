#include "corrfilt/config.hpp"

#include "corrfilt/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <vector>

namespace corrfilt {

namespace {

using json = nlohmann::json;

std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) != allowed.end()) {
            continue;
        }
        std::string message = "unknown key '" + join(path, key) + "'";
        std::string_view best;
        std::size_t best_distance = 3;
        for (const auto candidate : allowed) {
            const auto d = edit_distance(key, candidate);
            if (d < best_distance) {
                best_distance = d;
                best = candidate;
            }
        }
        if (!best.empty()) {
            message += " (did you mean '" + join(path, best) + "'?)";
        }
        throw config_error(message);
    }
}

const json& require_object(const json& value, const std::string& path) {
    if (!value.is_object()) {
        throw config_error(path + " must be an object");
    }
    return value;
}

double as_number(const json& value, const std::string& path) {
    if (!value.is_number()) {
        throw config_error(path + " must be a number");
    }
    return value.get<double>();
}

std::uint64_t as_count(const json& value, const std::string& path) {
    if (value.is_number_unsigned()) {
        return value.get<std::uint64_t>();
    }
    if (value.is_number_integer() && value.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(value.get<std::int64_t>());
    }
    throw config_error(path + " must be a non-negative integer");
}

bool as_bool(const json& value, const std::string& path) {
    if (!value.is_boolean()) {
        throw config_error(path + " must be true or false");
    }
    return value.get<bool>();
}

std::string as_string(const json& value, const std::string& path) {
    if (!value.is_string()) {
        throw config_error(path + " must be a string");
    }
    return value.get<std::string>();
}

std::vector<double> as_numbers(const json& value, const std::string& path) {
    if (!value.is_array()) {
        throw config_error(path + " must be an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        out.push_back(as_number(value[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Algorithm as_algorithm(std::string_view name, const std::string& path) {
    if (const auto a = parse_algorithm(name)) {
        return *a;
    }
    std::string message = path + ": unknown algorithm '" + std::string(name) + "' (valid:";
    for (const auto a : all_algorithms) {
        message += " " + std::string(to_string(a));
    }
    throw config_error(message + ")");
}

// Rethrows construction errors with the key path in front.
template <typename F>
auto with_path(const std::string& path, F&& make) {
    try {
        return make();
    } catch (const config_error& e) {
        throw config_error(path + ": " + e.what());
    }
}

AlphaStableParams parse_alpha_stable(const json& value, const std::string& path) {
    require_object(value, path);
    reject_unknown_keys(value, {"alpha", "beta", "gamma", "theta"}, path);
    for (const auto* key : {"alpha", "gamma"}) {
        if (!value.contains(key)) {
            throw config_error("missing required field '" + join(path, key) + "'");
        }
    }
    const double alpha = as_number(value["alpha"], join(path, "alpha"));
    const double beta = value.contains("beta") ? as_number(value["beta"], join(path, "beta")) : 0.0;
    const double gamma = as_number(value["gamma"], join(path, "gamma"));
    const double theta = value.contains("theta") ? as_number(value["theta"], join(path, "theta")) : 0.0;
    return with_path(path, [&] { return AlphaStableParams(alpha, beta, gamma, theta); });
}

void parse_model(const json& value, SystemModel& model) {
    const std::string path = "model";
    require_object(value, path);
    reject_unknown_keys(value, {"true_weights", "input", "input_noise_variance", "output_noise", "output_noise_enabled"},
                        path);
    if (value.contains("true_weights")) {
        auto taps = as_numbers(value["true_weights"], "model.true_weights");
        model.true_weights = with_path("model.true_weights", [&] { return WeightVector(std::move(taps)); });
    }
    if (value.contains("input")) {
        const auto& input = require_object(value["input"], "model.input");
        reject_unknown_keys(input, {"mean", "variance"}, "model.input");
        for (const auto* key : {"mean", "variance"}) {
            if (!input.contains(key)) {
                throw config_error("missing required field 'model.input." + std::string(key) + "'");
            }
        }
        const double mean = as_number(input["mean"], "model.input.mean");
        const double variance = as_number(input["variance"], "model.input.variance");
        model.input = with_path("model.input", [&] { return GaussianParams(mean, variance); });
    }
    if (value.contains("input_noise_variance")) {
        const double variance = as_number(value["input_noise_variance"], "model.input_noise_variance");
        model.input_noise = with_path("model.input_noise_variance", [&] { return GaussianParams(0.0, variance); });
    }
    if (value.contains("output_noise")) {
        model.output_noise = parse_alpha_stable(value["output_noise"], "model.output_noise");
    }
    if (value.contains("output_noise_enabled")) {
        model.output_noise_enabled = as_bool(value["output_noise_enabled"], "model.output_noise_enabled");
    }
    with_path(path, [&] {
        model.validate();
        return 0;
    });
}

std::map<Algorithm, double> parse_step_sizes(const json& value, const std::string& path) {
    require_object(value, path);
    std::map<Algorithm, double> out;
    for (const auto& [key, mu] : value.items()) {
        const auto algorithm = as_algorithm(key, join(path, key));
        out[algorithm] = as_number(mu, join(path, key));
        if (!(out[algorithm] > 0.0)) {
            throw config_error(join(path, key) + " must be > 0");
        }
    }
    return out;
}

void parse_filters(const json& value, ExperimentConfig& config) {
    require_object(value, "filters");
    for (const auto& [key, spec_json] : value.items()) {
        const std::string path = "filters." + key;
        const auto algorithm = as_algorithm(key, path);
        require_object(spec_json, path);
        reject_unknown_keys(spec_json, {"step_size", "sigma", "epsilon"}, path);
        if (!spec_json.contains("step_size")) {
            throw config_error("missing required field '" + path + ".step_size'");
        }
        FilterSpec spec;
        spec.step_size = as_number(spec_json["step_size"], path + ".step_size");
        if (spec_json.contains("sigma")) {
            spec.sigma = as_number(spec_json["sigma"], path + ".sigma");
        }
        if (spec_json.contains("epsilon")) {
            spec.epsilon = as_number(spec_json["epsilon"], path + ".epsilon");
        }
        config.filters[algorithm] = spec;
    }
}

void parse_varest(const json& value, VarEstParams& params) {
    require_object(value, "varest");
    reject_unknown_keys(value, {"forgetting", "kappa", "clip"}, "varest");
    if (value.contains("forgetting")) {
        params.forgetting = as_number(value["forgetting"], "varest.forgetting");
    }
    if (value.contains("kappa")) {
        params.kappa = as_number(value["kappa"], "varest.kappa");
    }
    if (value.contains("clip") && !value["clip"].is_null()) {
        const auto& clip = require_object(value["clip"], "varest.clip");
        reject_unknown_keys(clip, {"quantile", "window"}, "varest.clip");
        OutlierClip out;
        if (clip.contains("quantile")) {
            out.quantile = as_number(clip["quantile"], "varest.clip.quantile");
        }
        if (clip.contains("window")) {
            out.window = as_count(clip["window"], "varest.clip.window");
        }
        params.clip = out;
    }
}

void parse_stages(const json& value, ExperimentConfig& config) {
    if (!value.is_array()) {
        throw config_error("stages must be an array");
    }
    for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string path = "stages[" + std::to_string(i) + "]";
        const auto& stage_json = require_object(value[i], path);
        reject_unknown_keys(stage_json, {"iterations", "output_noise", "step_sizes"}, path);
        StageSpec stage;
        if (stage_json.contains("iterations")) {
            stage.iterations = as_count(stage_json["iterations"], path + ".iterations");
        }
        if (stage_json.contains("output_noise")) {
            stage.output_noise = parse_alpha_stable(stage_json["output_noise"], path + ".output_noise");
        }
        if (stage_json.contains("step_sizes")) {
            stage.step_sizes = parse_step_sizes(stage_json["step_sizes"], path + ".step_sizes");
        }
        config.stages.push_back(std::move(stage));
    }
}

json alpha_stable_json(const AlphaStableParams& p) {
    return {{"alpha", p.alpha()}, {"beta", p.beta()}, {"gamma", p.gamma()}, {"theta", p.theta()}};
}

} // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
    std::vector<std::size_t> row(b.size() + 1);
    std::iota(row.begin(), row.end(), std::size_t{0});
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diagonal = above;
        }
    }
    return row[b.size()];
}

ExperimentConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("malformed JSON: ") + e.what());
    }
    require_object(doc, "config");
    reject_unknown_keys(doc,
                        {"description", "scenario", "algorithms", "model", "sigma", "epsilon", "filters", "varest",
                         "trials", "iterations", "seed", "output_dir", "plot", "workers", "compensation_weight",
                         "variance_mode", "stages", "sweep_values", "steady_state_window"},
                        "");
    for (const auto* key : {"scenario", "filters"}) {
        if (!doc.contains(key)) {
            throw config_error("missing required field '" + std::string(key) + "'");
        }
    }

    ExperimentConfig config;
    config.scenario = as_string(doc["scenario"], "scenario");
    if (doc.contains("description")) {
        (void)as_string(doc["description"], "description");
    }
    if (doc.contains("algorithms")) {
        const auto& list = doc["algorithms"];
        if (!list.is_array()) {
            throw config_error("algorithms must be an array of names");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path = "algorithms[" + std::to_string(i) + "]";
            config.algorithms.push_back(as_algorithm(as_string(list[i], path), path));
        }
    }
    if (doc.contains("model")) {
        parse_model(doc["model"], config.model);
    }
    if (doc.contains("sigma")) {
        config.sigma = as_number(doc["sigma"], "sigma");
    }
    if (doc.contains("epsilon")) {
        config.epsilon = as_number(doc["epsilon"], "epsilon");
    }
    parse_filters(doc["filters"], config);
    if (doc.contains("varest")) {
        parse_varest(doc["varest"], config.varest);
    }
    if (doc.contains("trials")) {
        config.trials = as_count(doc["trials"], "trials");
    }
    if (doc.contains("iterations")) {
        config.iterations = as_count(doc["iterations"], "iterations");
    }
    if (doc.contains("seed")) {
        config.seed = as_count(doc["seed"], "seed");
    }
    if (doc.contains("output_dir")) {
        config.output_dir = as_string(doc["output_dir"], "output_dir");
    }
    if (doc.contains("plot")) {
        config.plot = as_bool(doc["plot"], "plot");
    }
    if (doc.contains("workers")) {
        config.workers = as_count(doc["workers"], "workers");
    }
    if (doc.contains("compensation_weight")) {
        const auto name = as_string(doc["compensation_weight"], "compensation_weight");
        const auto mode = parse_compensation_weight(name);
        if (!mode) {
            throw config_error("compensation_weight must be 'observed' or 'oracle', got '" + name + "'");
        }
        config.compensation = *mode;
    }
    if (doc.contains("variance_mode")) {
        const auto name = as_string(doc["variance_mode"], "variance_mode");
        const auto mode = parse_variance_mode(name);
        if (!mode) {
            throw config_error("variance_mode must be 'estimated' or 'oracle', got '" + name + "'");
        }
        config.variance_mode = *mode;
    }
    if (doc.contains("stages")) {
        parse_stages(doc["stages"], config);
    }
    if (doc.contains("sweep_values")) {
        config.sweep_values = as_numbers(doc["sweep_values"], "sweep_values");
    }
    if (doc.contains("steady_state_window")) {
        config.steady_state_window = as_count(doc["steady_state_window"], "steady_state_window");
    }

    // Everything except the seed, which may still arrive from the CLI or env.
    auto probe = config;
    if (!probe.seed) {
        probe.seed = 0;
    }
    probe.validate();
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string canonical_json(const ExperimentConfig& config) {
    json doc;
    doc["scenario"] = config.scenario;
    json algorithms = json::array();
    for (const auto a : config.resolved_algorithms()) {
        algorithms.push_back(to_string(a));
    }
    doc["algorithms"] = algorithms;
    const auto taps = config.model.true_weights.taps();
    doc["model"] = {
        {"true_weights", std::vector<double>(taps.begin(), taps.end())},
        {"input", {{"mean", config.model.input.mean()}, {"variance", config.model.input.variance()}}},
        {"input_noise_variance", config.model.input_noise.variance()},
        {"output_noise", alpha_stable_json(config.model.output_noise)},
        {"output_noise_enabled", config.model.output_noise_enabled},
    };
    doc["sigma"] = config.sigma;
    doc["epsilon"] = config.epsilon;
    json filters = json::object();
    for (const auto& [algorithm, spec] : config.filters) {
        json f = {{"step_size", spec.step_size}};
        if (spec.sigma) {
            f["sigma"] = *spec.sigma;
        }
        if (spec.epsilon) {
            f["epsilon"] = *spec.epsilon;
        }
        filters[std::string(to_string(algorithm))] = f;
    }
    doc["filters"] = filters;
    doc["varest"] = {{"forgetting", config.varest.forgetting}, {"kappa", config.varest.kappa}};
    if (config.varest.clip) {
        doc["varest"]["clip"] = {{"quantile", config.varest.clip->quantile}, {"window", config.varest.clip->window}};
    }
    doc["trials"] = config.trials;
    doc["iterations"] = config.iterations;
    doc["seed"] = config.seed ? json(*config.seed) : json(nullptr);
    doc["compensation_weight"] = to_string(config.compensation);
    doc["variance_mode"] = to_string(config.variance_mode);
    json stages = json::array();
    for (const auto& stage : config.resolved_schedule().stages) {
        json steps = json::object();
        for (const auto& [algorithm, mu] : stage.step_sizes) {
            steps[std::string(to_string(algorithm))] = mu;
        }
        stages.push_back(
            {{"iterations", stage.iterations}, {"output_noise", alpha_stable_json(stage.output_noise)}, {"step_sizes", steps}});
    }
    doc["stages"] = stages;
    doc["sweep_values"] = config.sweep_values;
    doc["steady_state_window"] = config.steady_state_window;
    return doc.dump();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const char c : canonical_json(config)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

} // namespace corrfilt
