#include "hyperns/app.hpp"
#include "hyperns/parallel.hpp"
#include "hyperns/run_config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Mild Navier-Stokes solutions on H^2: kernels, constants, Picard solves and estimate checks"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    app.add_option("--config", config_path, "JSON config file (defaults apply when omitted)");
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--seed", seed, "datum seed (overrides solver.seed)");
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    for (const auto& name : hyperns::subcommands()) {
        app.add_subcommand(name);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return hyperns::kExitUsage;
    }

    hyperns::RunConfig config;
    try {
        config = config_path.empty() ? hyperns::parse_config(nlohmann::ordered_json::object())
                                     : hyperns::load_config(config_path);
        if (out_dir) {
            config.output_dir = *out_dir;
        }
        if (seed) {
            config.solver.seed = *seed;
        }
    } catch (const hyperns::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return hyperns::kExitUsage;
    }
    if (threads) {
        hyperns::set_thread_count(*threads);
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    try {
        return hyperns::run(sub, config, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return hyperns::kExitEstimateFailure;
    }
}
