#pragma once

#include "verivote/config.hpp"
#include "verivote/csv.hpp"

#include <string>

namespace verivote {

struct RunResult {
    std::string summary; // one line: task, headline value, runtime
    CsvTable csv;
};

// Dispatches a validated configuration to the matching task and renders the
// CSV artifact. Deterministic for a fixed config (including its seed).
RunResult run_task(const ExperimentConfig& cfg);

} // namespace verivote
