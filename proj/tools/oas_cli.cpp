// Command-line front end for the oas shared library. Talks to the library
// exclusively through the C API in oas/oas.h.

#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "oas/oas.h"

namespace {

int report_failure(const char* what) {
    std::fprintf(stderr, "error: %s: %s\n", what, oas_last_error());
    return 1;
}

struct RunFlags {
    std::string config_path;
    std::string out_dir;
    std::string seeds;
    std::string traces;  // "on" | "off" | ""
    int parallel = 1;
};

int cmd_run(const RunFlags& flags) {
    oas_config* config = nullptr;
    if (oas_config_load(flags.config_path.c_str(), &config) != OAS_OK) {
        return report_failure("loading config");
    }

    std::string out_dir = flags.out_dir;
    if (out_dir.empty()) {
        if (const char* env = std::getenv("OAS_OUT_DIR")) out_dir = env;
    }

    oas_run_options options;
    options.out_dir = out_dir.empty() ? nullptr : out_dir.c_str();
    options.seeds_csv = flags.seeds.empty() ? nullptr : flags.seeds.c_str();
    options.traces = flags.traces.empty() ? -1 : (flags.traces == "on" ? 1 : 0);
    options.parallel = flags.parallel;

    char* metrics_path = nullptr;
    const oas_status status = oas_run_suite(config, &options, &metrics_path);
    oas_config_free(config);
    if (status != OAS_OK) return report_failure("running suite");
    std::printf("wrote %s\n", metrics_path);
    oas_string_free(metrics_path);
    return 0;
}

int cmd_validate(const std::string& path) {
    oas_config* config = nullptr;
    if (oas_config_load(path.c_str(), &config) != OAS_OK) {
        return report_failure("validating config");
    }
    char* json = nullptr;
    if (oas_config_json(config, &json) != OAS_OK) {
        oas_config_free(config);
        return report_failure("rendering config");
    }
    std::printf("%s\n", json);
    oas_string_free(json);
    oas_config_free(config);
    return 0;
}

int cmd_quotient(const std::string& path) {
    char* json = nullptr;
    if (oas_quotient_report_json(path.c_str(), &json) != OAS_OK) {
        return report_failure("computing quotient");
    }
    std::printf("%s\n", json);
    oas_string_free(json);
    return 0;
}

int cmd_trace_stats(const std::string& path) {
    char* json = nullptr;
    if (oas_trace_stats_json(path.c_str(), &json) != OAS_OK) {
        return report_failure("computing trace stats");
    }
    std::printf("%s\n", json);
    oas_string_free(json);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("oas ") + oas_version() +
                 " - attention abstractions and online attention switching for MDPs"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "Run an experiment suite from a config or manifest");
    run->add_option("config", run_flags.config_path, "Config or manifest JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out-dir", run_flags.out_dir,
                    "Output directory (default: config value or $OAS_OUT_DIR)");
    run->add_option("--seeds", run_flags.seeds, "Comma-separated seed list override");
    run->add_option("--traces", run_flags.traces, "Write per-trial trace files")
        ->check(CLI::IsMember({"on", "off"}));
    run->add_option("--parallel", run_flags.parallel, "Worker threads for trials")
        ->check(CLI::PositiveNumber);

    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "Parse and echo a config without running");
    validate->add_option("config", validate_path, "Config or manifest JSON file")
        ->required()
        ->check(CLI::ExistingFile);

    std::string quotient_path;
    CLI::App* quotient =
        app.add_subcommand("quotient", "Print the coarsest bisimulation partition and quotient");
    quotient->add_option("mdp", quotient_path, "MDP JSON file")->required()->check(CLI::ExistingFile);

    std::string trace_path;
    CLI::App* trace_stats =
        app.add_subcommand("trace-stats", "Recompute metrics from a trace CSV");
    trace_stats->add_option("trace", trace_path, "Trace CSV file")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(run_flags);
    if (validate->parsed()) return cmd_validate(validate_path);
    if (quotient->parsed()) return cmd_quotient(quotient_path);
    if (trace_stats->parsed()) return cmd_trace_stats(trace_path);
    return 1;
}
