#pragma once

#include "collarspec/experiment_config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace collarspec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

struct RunResult {
    int exit_code = kExitOk;
    std::string message;
    std::vector<std::filesystem::path> artifacts;
};

const std::vector<std::string>& subcommand_names();

// Executes one subcommand, writing CSV/JSON artifacts and a run manifest
// (config hash, tool version, timings) into out_dir.  Output is
// deterministic for a fixed config and seed; timings appear only in the
// manifest.
RunResult run_subcommand(const std::string& name, const ExperimentConfig& config,
                         const std::filesystem::path& out_dir);

} // namespace collarspec
