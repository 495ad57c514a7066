#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "oas/filter.hpp"
#include "oas/policy.hpp"
#include "oas/scenario_continuous.hpp"
#include "oas/scenario_discrete.hpp"

namespace oas {

enum class PolicyMode { kRandom, kAbstract, kPursuit };

/// Filter configuration shared by every trial of an experiment.
struct FilterConfig {
    AbstractionTransitionModel transition;
    std::vector<double> prior;  // empty means uniform
    double epsilon = 1e-3;
};

/// One recorded step of a trial.
struct StepRecord {
    int true_context = 0;
    std::vector<double> state;     // 1 entry (discrete) or 4 (continuous)
    std::vector<double> observed;
    double reward = 0.0;
    std::vector<double> belief;
    int ml = 0;
    int action = 0;
    bool degenerate_update = false;
};

struct TrialTrace {
    std::uint64_t seed = 0;
    int n_abstractions = 0;
    std::vector<StepRecord> steps;
    int degenerate_updates = 0;

    int horizon() const { return static_cast<int>(steps.size()); }
};

/// Test hook: mutates the observed state in place before it reaches the
/// filter and the policy. `ml_prev` is the abstraction that chose the step's
/// action. Used to demonstrate end-to-end projection invariance.
using ObservationTamper = std::function<void(int step, int ml_prev, std::span<double> observed)>;

struct TrialOptions {
    PolicyMode policy_mode = PolicyMode::kRandom;
    ValueIterationOptions vi;
    ObservationTamper tamper;  // continuous trials only
};

/// Runs one seeded discrete trial. Per step: choose the action from the
/// previous step's maximum-likelihood abstraction applied to the previous
/// observed abstract state, transition under the schedule's active context,
/// observe the noisy state and the true reward, then advance the filter.
/// Traces are bit-identical across runs with equal seeds.
TrialTrace run_trial(const DiscreteScenario& scenario, const SwitchSchedule& schedule,
                     const FilterConfig& filter, const TrialOptions& options, std::uint64_t seed);

/// Continuous counterpart; the schedule selects the treat holder per step.
TrialTrace run_trial(const ContinuousScenario& scenario, const SwitchSchedule& schedule,
                     const FilterConfig& filter, const TrialOptions& options, std::uint64_t seed);

struct TrialMetrics {
    double accuracy = 0.0;           // fraction of steps with ml == true context
    double avg_lag = 0.0;            // steps; mean over switches, 0 if none
    double max_lag = 0.0;            // steps
    double normalized_reward = 0.0;  // cumulative reward / horizon
    int switch_count = 0;
};

/// Lag at a switch is the number of steps until the maximum-likelihood
/// abstraction first matches the new context, counted before the next switch
/// and capped at the inter-switch window length if it never matches.
TrialMetrics compute_metrics(const TrialTrace& trace, const SwitchSchedule& schedule);

struct MeanStd {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
};

struct AggregateMetrics {
    MeanStd accuracy;
    MeanStd avg_lag;
    MeanStd max_lag;
    MeanStd normalized_reward;
    int n_trials = 0;
};

/// Mean and population std per metric. Values are accumulated in sorted order
/// so the result is independent of trial ordering.
AggregateMetrics aggregate(std::span<const TrialMetrics> metrics);

}  // namespace oas
