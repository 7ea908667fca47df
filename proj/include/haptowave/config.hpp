#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "haptowave/laws.hpp"
#include "haptowave/params.hpp"
#include "haptowave/profile.hpp"

namespace haptowave {

/// Check thresholds used by compare/sweep modes; config keys with these
/// defaults.
struct Tolerances {
    double support_threshold_frac = 1e-3;
    double edge_exclusion_frac = 0.1;
    double structure_violation_tol = 0.05;
    double compare_tol_l1 = 0.15;
    double sweep_rho_linf_tol = 0.05;
};

/// Fully validated run bundle: immutable parameters + laws + the initial
/// profile, shared by every engine the run touches.
struct LoadedConfig {
    Model model;
    InitialProfile profile;
    double cont_dx = 0.0, cont_dy = 0.0;   // 0 -> IB lattice steps
    std::vector<double> snapshot_times;
    std::vector<double> sweep_eps;
    // optional per-point overrides (same length as sweep_eps): the matrix
    // cliff narrows like sqrt(eps), so smaller eps needs a finer grid and
    // reaches its travelling profile sooner
    std::vector<double> sweep_times;
    std::vector<double> sweep_cont_dx;
    int replicates = 1;
    uint64_t seed = 1;
    Tolerances tol;
    bool rho_max_explicit = false;
    std::string name;       // preset name or file path
    std::string canonical;  // canonical key=value serialization
};

/// Parses a flat key=value file ('#' comments). `path_or_preset` may name a
/// built-in preset instead of a file. Unknown keys and validation failures
/// throw ConfigError.
LoadedConfig load_config(const std::string& path_or_preset);

/// Same, from config text already in memory.
LoadedConfig parse_config(const std::string& text, const std::string& name);

std::vector<std::string> builtin_preset_names();
std::string builtin_preset_text(const std::string& name);

/// Run orchestration request (CLI surface).
struct RunSpec {
    std::string mode;  // ibm | continuum | compare | sweep | ibm2d
    std::string config;
    std::string out_dir = "out";
    std::vector<double> snapshot_times;  // empty -> from config
    int replicates = 0;                  // 0 -> from config
    uint64_t seed = 0;                   // 0 -> from config
    bool seed_set = false;
    int threads = 0;  // 0 -> HAPTOWAVE_THREADS env or hardware
    bool emit_full = false;
};

}  // namespace haptowave
