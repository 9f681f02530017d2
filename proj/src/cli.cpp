#include "corrfilt/cli.hpp"

#include "corrfilt/config.hpp"
#include "corrfilt/errors.hpp"
#include "corrfilt/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>

namespace corrfilt {

namespace {

struct RunOverrides {
    std::string config_path;
    std::string out_dir;
    std::string scenario;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::size_t workers = 0;
    bool plot = false;
};

/// CORRFILT_SEED fills a seed that neither the config nor --seed supplied.
void apply_env_seed(ExperimentConfig& config) {
    if (config.seed) {
        return;
    }
    const char* env = std::getenv("CORRFILT_SEED");
    if (env == nullptr || *env == '\0') {
        return;
    }
    try {
        std::size_t used = 0;
        const std::string text(env);
        const auto value = std::stoull(text, &used);
        if (used != text.size() || text.front() == '-') {
            throw std::invalid_argument(text);
        }
        config.seed = value;
    } catch (const std::exception&) {
        throw config_error("CORRFILT_SEED must be an unsigned integer, got '" + std::string(env) + "'");
    }
}

int do_run(const RunOverrides& flags, const CLI::App& cmd, std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    std::uint64_t hash = 0;
    try {
        config = load_config(flags.config_path);
        if (cmd.count("--seed")) {
            config.seed = flags.seed;
        }
        if (cmd.count("--trials")) {
            config.trials = flags.trials;
        }
        if (cmd.count("--workers")) {
            config.workers = flags.workers;
        }
        if (cmd.count("--out")) {
            config.output_dir = flags.out_dir;
        }
        if (cmd.count("--scenario")) {
            config.scenario = flags.scenario;
        }
        if (flags.plot) {
            config.plot = true;
        }
        apply_env_seed(config);
        config.validate();
        hash = config_hash(config);
    } catch (const config_error& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    }

    try {
        const auto result = run_scenario(config, hash);
        const auto written = emit_csv(result, config.output_dir);
        print_summary(result, out);
        for (const auto& path : written) {
            out << "wrote " << path.string() << "\n";
        }
        if (config.plot) {
            const auto svg = config.output_dir / (result.scenario + ".svg");
            emit_plot(result, svg);
            out << "wrote " << svg.string() << "\n";
        }
    } catch (const config_error& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "run failed: " << e.what() << "\n";
        return exit_runtime_error;
    }
    return exit_ok;
}

int do_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    try {
        auto config = load_config(path);
        apply_env_seed(config);
        config.validate();
        const auto schedule = config.resolved_schedule();
        out << "ok: scenario " << config.scenario << ", " << config.resolved_algorithms().size() << " algorithm(s), "
            << schedule.stages.size() << " stage(s), " << schedule.total_iterations() << " iterations, "
            << config.trials << " trials\n";
    } catch (const config_error& e) {
        err << "config error: " << e.what() << "\n";
        return exit_config_error;
    }
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Benchmarks for bias-compensated correntropy adaptive filters", "corrfilt"};
    app.require_subcommand(1);

    RunOverrides flags;
    auto* run = app.add_subcommand("run", "run an experiment and write CSV (and optionally SVG) results");
    run->add_option("--config", flags.config_path, "experiment config (JSON)")->required();
    run->add_option("--out", flags.out_dir, "output directory (overrides output_dir)");
    run->add_option("--seed", flags.seed, "master seed (overrides seed)");
    run->add_option("--trials", flags.trials, "Monte-Carlo trials (overrides trials)");
    run->add_option("--workers", flags.workers, "worker threads, 0 = all cores (overrides workers)");
    run->add_option("--scenario", flags.scenario, "scenario name (overrides scenario)");
    run->add_flag("--plot", flags.plot, "also write an SVG plot");

    app.add_subcommand("scenarios", "list the built-in scenarios");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a config without running anything");
    validate->add_option("--config", validate_path, "experiment config (JSON)")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_config_error;
    }

    if (*run) {
        return do_run(flags, *run, out, err);
    }
    if (*validate) {
        return do_validate(validate_path, out, err);
    }
    for (const auto& info : builtin_scenarios) {
        out << info.name << "\t" << info.description << "\n";
    }
    return exit_ok;
}

} // namespace corrfilt
