#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fgig::cli {

// One experiment invocation.  Fields not used by the chosen subcommand keep
// their defaults and are ignored.
struct RunConfig {
    std::string experiment;
    double lambda = 2.0;
    double alpha = 1.0;
    double beta = 1.0;
    int n = 256;
    int reps = 20;
    int order = 8;
    int grid_points = 200;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool exploratory = false;
    std::string out_dir = ".";
};

// Thrown when --help (or a bare call) asks for usage text; carries the text.
struct HelpRequested {
    std::string text;
};

// Parses `<subcommand> [flags...]`.  A `--config FILE` flag loads a flat
// key=value file (# comments allowed) whose entries are injected before the
// command-line flags, so explicit flags win.  Duplicate file keys and unknown
// keys are rejected.  Throws ConfigError on any problem, HelpRequested for
// help.  Seeding is always explicit; there is no wall-clock fallback.
RunConfig parse_config(const std::vector<std::string>& args);

// Executes the configured experiment and writes its artifacts (report.json,
// residuals.csv, per-experiment tables, SVG histograms for matrix runs) into
// cfg.out_dir.  Returns 0 if every check passed, 1 on a failed check or a
// runtime model error (error_manifest.json is left next to any partial
// artifacts), 2 on I/O problems.
int run(const RunConfig& cfg);

// parse_config + run with exit-code mapping (2 on config errors, 0 for help).
int main_entry(const std::vector<std::string>& args);

} // namespace fgig::cli
