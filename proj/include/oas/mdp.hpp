#pragma once

#include <string>
#include <vector>

#include "oas/rng.hpp"

namespace oas {

/// Absolute tolerance for row-stochasticity checks. Rows within this of 1 are
/// renormalized exactly once at load; anything further off is rejected.
inline constexpr double kRowSumTolerance = 1e-9;

/// Absolute tolerance for reward / aggregated-probability equality in
/// bisimulation tests. Inputs are exact rationals in practice; this only
/// absorbs float noise.
inline constexpr double kBisimTolerance = 1e-9;

/// Finite Markov decision process: per-action row-stochastic transition
/// matrices plus a reward table indexed by (state, action). A state-only
/// reward function is stored as action-constant rows.
struct Mdp {
    int n_states = 0;
    int n_actions = 0;
    /// transitions[a] is an n_states x n_states row-major matrix,
    /// entry (s, s') = P(s' | s, a).
    std::vector<std::vector<double>> transitions;
    /// rewards[s * n_actions + a] = R(s, a).
    std::vector<double> rewards;
    std::vector<std::string> state_labels;   // optional display names
    std::vector<std::string> action_labels;  // optional display names

    double transition(int s, int a, int next) const {
        return transitions[static_cast<std::size_t>(a)]
                          [static_cast<std::size_t>(s) * n_states + next];
    }
    double reward(int s, int a) const {
        return rewards[static_cast<std::size_t>(s) * n_actions + a];
    }
};

struct ValidationIssue {
    std::string where;    // e.g. "transitions[a=1][s=0]"
    std::string message;  // e.g. "row sums to 1.1"
};

/// Result of validate_mdp. Violations are the payload, not exceptions.
struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

/// Checks shape, row sums (within kRowSumTolerance), entry ranges, and reward
/// finiteness. Enumerates every violated row/entry.
ValidationReport validate_mdp(const Mdp& m);

/// Validates and returns a copy with each transition row renormalized exactly
/// once. Throws Error(kValidation) with the full report on failure.
Mdp normalized_valid(Mdp m);

/// Draws the next state from P(. | state, action).
int sample_transition(const Mdp& m, int state, int action, RandomStream& rng);

/// Ordered list of context MDPs sharing one state and action space.
struct ContextCatalog {
    std::vector<Mdp> contexts;

    int size() const { return static_cast<int>(contexts.size()); }
    int n_states() const { return contexts.front().n_states; }
    int n_actions() const { return contexts.front().n_actions; }

    /// Throws unless the list is non-empty, every member validates, and all
    /// members agree on n_states / n_actions.
    static ContextCatalog validated(std::vector<Mdp> contexts);
};

enum class SchedulePattern { kStep, kPeriodic, kUniformRandom, kScripted };

/// Ground-truth context index per step over a finite horizon. Materialized at
/// construction so replay is trivially deterministic.
struct SwitchSchedule {
    int horizon = 0;
    int n_contexts = 0;
    SchedulePattern pattern = SchedulePattern::kScripted;
    std::string descriptor;  // human-readable, e.g. "step(switch_at=100)"
    std::vector<int> active_sequence;

    int active(int t) const { return active_sequence[static_cast<std::size_t>(t)]; }
    /// Number of steps t >= 1 with active(t) != active(t-1).
    int switch_count() const;
};

struct ScheduleParams {
    int switch_at = 0;           // step pattern
    int period = 0;              // periodic pattern
    std::vector<int> sequence;   // scripted pattern
};

/// Dispatching constructor covering all four patterns. `rng` is consumed only
/// by the uniform-random pattern. Two-context patterns (step, periodic)
/// require n_contexts == 2.
SwitchSchedule make_schedule(SchedulePattern pattern, const ScheduleParams& params,
                             int horizon, int n_contexts, RandomStream* rng);

SwitchSchedule make_step_schedule(int switch_at, int horizon);
SwitchSchedule make_periodic_schedule(int period, int horizon);
SwitchSchedule make_uniform_random_schedule(int n_contexts, int horizon, RandomStream& rng);
SwitchSchedule make_scripted_schedule(std::vector<int> sequence, int n_contexts);

}  // namespace oas
