#pragma once

#include <vector>

#include "oas/bisim.hpp"
#include "oas/mdp.hpp"

namespace oas {

inline constexpr int kDiscreteStates = 3;
inline constexpr int kDiscreteActions = 2;  // 0 = left, 1 = right

/// How a state-confusion error picks the wrongly observed state.
///
/// kUniform: the observed state is drawn uniformly over the other two states.
/// kInward:  an end state is misread as the middle state; the middle state is
///           always observed correctly. This models a sensor whose confusions
///           are local rather than arbitrary, and is what the tracking suite
///           uses for its noisy rows (see README).
enum class StateNoiseKind { kUniform, kInward };

/// The 3x3 per-action transition matrices for the discrete tracking world.
/// The shipped default moves the robot to the commanded end of the corridor
/// with probability 0.75 and strands it in the middle otherwise; any custom
/// config is accepted only if it reproduces the required partition structure
/// (see build_discrete_scenario).
struct DiscreteTransitionsConfig {
    /// matrices[a] is row-major 3x3, entry (s, s') = P(s' | s, a).
    std::vector<std::vector<double>> matrices;

    bool operator==(const DiscreteTransitionsConfig&) const = default;
};

DiscreteTransitionsConfig default_discrete_transitions();

/// Two-context tracking scenario: contexts share the transition dynamics and
/// differ only in where the unit reward sits. Context 0 rewards the last
/// state s3, context 1 rewards the first state s1.
struct DiscreteScenario {
    ContextCatalog catalog;
    std::vector<Abstraction> abstractions;  // one bisimulation quotient per context
    double sigma = 0.0;                     // state confusion probability
    StateNoiseKind noise_kind = StateNoiseKind::kUniform;
};

/// Builds both contexts from the transition config, computes their coarsest
/// bisimulations, and verifies the expected structure: context 0 must group
/// {s1, s2} apart from {s3} and context 1 must group {s2, s3} apart from
/// {s1}. A config that produces any other partition is rejected with
/// Error(kValidation).
DiscreteScenario build_discrete_scenario(const DiscreteTransitionsConfig& config,
                                         double sigma,
                                         StateNoiseKind noise_kind = StateNoiseKind::kUniform);

/// With probability 1 - sigma returns the true state, otherwise a wrong state
/// chosen per the noise kind.
int observe_state_discrete(int true_state, double sigma, StateNoiseKind kind, RandomStream& rng);

/// Per-abstraction likelihoods of the observed reward: the observed state is
/// mapped through each abstraction and the quotient reward of that block is
/// compared with the reward actually received (epsilon-smoothed indicator).
std::vector<double> discrete_likelihoods(const DiscreteScenario& scenario, double reward,
                                         int observed_state, double epsilon);

}  // namespace oas
