#pragma once

#include <string>
#include <vector>

#include "haptowave/config.hpp"
#include "haptowave/continuum.hpp"
#include "haptowave/ib_engine.hpp"
#include "haptowave/ib_engine_2d.hpp"
#include "haptowave/wave.hpp"

namespace haptowave {

/// One check evaluated by compare/sweep; also serialized to the report file.
struct CheckRecord {
    std::string metric;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = true;
    bool enforced = true;  // informational records don't affect exit status
};

struct RunOutcome {
    int exit_code = 0;
    std::vector<CheckRecord> checks;
    std::vector<std::string> artifacts;
};

/// Executes the requested mode, writes artifacts under spec.out_dir, and
/// returns the exit code (0 unless an enforced check fails or an engine
/// errors). CLI overrides in spec win over config values.
RunOutcome run(const RunSpec& spec);

/// Thread-count resolution: spec value, else HAPTOWAVE_THREADS, else
/// hardware concurrency.
int resolve_threads(int requested);

}  // namespace haptowave
