#pragma once

#include <optional>
#include <string>

#include "oas/config.hpp"

namespace oas {

/// Library version string, also recorded in run manifests.
const char* version();

/// Command-line / API overrides applied on top of a parsed config.
struct SuiteOptions {
    std::optional<std::string> out_dir;
    std::optional<std::vector<std::uint64_t>> seeds;
    std::optional<bool> traces;
    int parallel = 1;  // worker threads for trials
};

struct SuiteResult {
    std::string out_dir;
    std::string metrics_path;
    std::string manifest_path;
    std::vector<std::string> trace_paths;
    int rows = 0;
};

/// Runs every experiment row over every seed, writes metrics.csv (one row per
/// experiment), optional per-trial trace CSVs, and a machine-readable run
/// manifest. All files are written atomically (temp file + rename) and are
/// byte-identical across re-runs of the same config, including parallel ones.
/// Lag columns are in steps for discrete suites and seconds for continuous
/// ones.
SuiteResult run_suite(const ExperimentConfig& config, const SuiteOptions& options);

/// Loads an MDP from its JSON file format (see README), computes the coarsest
/// bisimulation, and returns a JSON report with the partition and quotient.
std::string quotient_report_json(const std::string& mdp_path);

/// Recomputes the trial metrics from a trace CSV produced by run_suite.
std::string trace_stats_json(const std::string& trace_path);

/// MDP JSON (de)serialization used by the quotient report and the CLI.
Mdp mdp_from_json_file(const std::string& path);
std::string mdp_to_json(const Mdp& m);

}  // namespace oas
