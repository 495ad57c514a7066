#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oas/harness.hpp"

namespace oas {

struct DiscreteScenarioConfig {
    DiscreteTransitionsConfig transitions;  // defaults to the shipped corridor dynamics
    double sigma = 0.0;
    StateNoiseKind noise_kind = StateNoiseKind::kUniform;

    bool operator==(const DiscreteScenarioConfig&) const = default;
};

struct HumanTrackConfig {
    std::vector<std::array<double, 2>> waypoints;
    double speed = 0.5;

    bool operator==(const HumanTrackConfig&) const = default;
};

struct ContinuousScenarioConfig {
    ContinuousParams params;
    Pose robot_start;
    std::vector<HumanTrackConfig> humans;  // exactly two

    bool operator==(const ContinuousScenarioConfig& other) const;
};

/// Context-switch pattern for one experiment row. `handoff_steps` is sugar
/// for a scripted schedule that starts at context 0 and toggles at each
/// listed step.
struct PatternConfig {
    std::string type = "step";  // step | periodic | random | scripted | handoffs
    int switch_at = 100;
    int period = 10;
    std::vector<int> sequence;
    std::vector<int> handoff_steps;

    bool operator==(const PatternConfig&) const = default;
};

/// Abstraction transition model for one experiment row: either a diagonal
/// stay probability or an explicit column-stochastic matrix.
struct TransitionModelConfig {
    double stay_prob = 0.8;
    std::vector<double> matrix;  // empty unless explicit

    bool operator==(const TransitionModelConfig&) const = default;
};

struct ExperimentRowConfig {
    std::string name;
    PatternConfig pattern;
    TransitionModelConfig model;
    std::optional<double> sigma;  // discrete only; overrides the scenario value

    bool operator==(const ExperimentRowConfig&) const = default;
};

/// Fully resolved experiment suite configuration (defaults filled in).
struct ExperimentConfig {
    std::variant<DiscreteScenarioConfig, ContinuousScenarioConfig> scenario;
    int horizon = 500;
    double epsilon = 1e-3;
    std::vector<double> prior;  // empty = uniform
    PolicyMode policy = PolicyMode::kRandom;
    double gamma = 0.95;
    double vi_tol = 1e-8;
    std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};
    bool traces = false;
    std::string out_dir = "out";
    std::vector<ExperimentRowConfig> rows;  // at least one after parsing

    bool is_discrete() const {
        return std::holds_alternative<DiscreteScenarioConfig>(scenario);
    }

    bool operator==(const ExperimentConfig& other) const;
};

/// Parses and validates a JSON config file. Unknown keys are rejected, out of
/// range values raise Error(kParse) naming the key path, and defaults are
/// filled so the result is fully resolved. A run-manifest file (the object
/// written next to suite outputs) is accepted too: its embedded config is
/// loaded.
ExperimentConfig parse_config_file(const std::string& path);

/// Same, from a JSON string.
ExperimentConfig parse_config_json(const std::string& json_text);

/// Canonical JSON of the resolved config; parse(write(cfg)) == cfg.
std::string write_config_json(const ExperimentConfig& config);

/// Materializes the schedule for one experiment row. Random patterns draw
/// from a stream derived from (seed, row index) so suites replay exactly.
SwitchSchedule build_schedule(const PatternConfig& pattern, int horizon, int n_contexts,
                              std::uint64_t seed, int row_index);

}  // namespace oas
