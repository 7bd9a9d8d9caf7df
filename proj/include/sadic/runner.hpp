// Experiment orchestration: configuration checking, task dispatch, worker
// pool over grid cells, deterministic CSV/JSON outputs and the manifest.
#pragma once

#include "sadic/config.hpp"
#include "sadic/flow.hpp"

namespace sadic {

struct RunResult {
    RunManifest manifest;
    int exit_code = 0; // 0 ok, 2 config error, 3 budget exceeded, 1 other
    std::string message;
};

// Executes the pipeline named by cfg key "task", writing outputs under the
// "out_dir" directory (created if needed) plus manifest.json.
RunResult run_experiment(const ExperimentConfig& cfg);

// Shared helpers between the runner and the CLI.
SubstitutionSequence sequence_from_config(const ExperimentConfig& cfg);
RoofVector roof_from_config(const ExperimentConfig& cfg, const SAdicSystem& sys);

} // namespace sadic
