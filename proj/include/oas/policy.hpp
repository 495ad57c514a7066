#pragma once

#include <vector>

#include "oas/mdp.hpp"

namespace oas {

enum class PolicyKind { kGreedy, kRandom };

/// Policy over abstract states. A greedy policy carries the action table and
/// converged values; a random policy draws uniformly from the caller's stream
/// on every query.
struct AbstractPolicy {
    PolicyKind kind = PolicyKind::kGreedy;
    int abstraction_index = 0;
    int n_actions = 0;
    std::vector<int> table;      // abstract state -> action (greedy only)
    std::vector<double> values;  // abstract state -> value (greedy only)

    int action(int abstract_state, RandomStream& rng) const;
};

struct ValueIterationOptions {
    double gamma = 0.95;
    double tol = 1e-8;
    int max_iterations = 1000000;
};

/// Discounted value iteration on a quotient MDP. Stops when the max value
/// change drops below tol; greedy ties break toward the lowest action index
/// so the policy is deterministic and reproducible.
AbstractPolicy value_iteration(const Mdp& quotient, int abstraction_index = 0,
                               const ValueIterationOptions& options = {});

/// Uniform-random action policy (the discrete experiments' action source).
AbstractPolicy random_policy(int n_actions, int abstraction_index = 0);

}  // namespace oas
