// collarspec — spectra of Laplacians on degenerating warped-product collars.
//
// Every computation is driven by a config file; subcommands expose the
// library modules and write CSV/JSON artifacts plus a run manifest.

#include "collarspec/errors.hpp"
#include "collarspec/runner.hpp"
#include "collarspec/version.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"collarspec: collar eigenvalue experiments"};
    app.set_version_flag("--version", std::string("collarspec ") +
                                          collarspec::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = -1;

    for (const auto& name : collarspec::subcommand_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file")
            ->required();
        sub->add_option("--set", overrides,
                        "override a config key, e.g. --set run.lambda_max=6")
            ->take_all();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "seed recorded in the manifest")
            ->each([&](const std::string&) { seed_given = true; });
        sub->add_option("--threads", threads, "worker threads (1 = serial)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string sub = app.get_subcommands().front()->get_name();

    collarspec::ExperimentConfig config;
    try {
        config = collarspec::ExperimentConfig::load(config_path, overrides);
        if (seed_given) config.seed = seed;
        if (threads >= 0) config.threads = threads;
    } catch (const collarspec::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return collarspec::kExitValidation;
    }

    const auto result = collarspec::run_subcommand(sub, config, out_dir);
    if (result.exit_code != collarspec::kExitOk) {
        std::cerr << "error: " << result.message << "\n";
    } else {
        for (const auto& p : result.artifacts)
            std::cout << p.string() << "\n";
    }
    return result.exit_code;
}
