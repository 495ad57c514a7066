#include "oas/policy.hpp"

#include <cmath>

#include "oas/error.hpp"

namespace oas {

int AbstractPolicy::action(int abstract_state, RandomStream& rng) const {
    if (kind == PolicyKind::kRandom) {
        return rng.uniform_int(n_actions);
    }
    if (abstract_state < 0 || abstract_state >= static_cast<int>(table.size())) {
        throw Error(ErrorCode::kInvalidArgument, "policy: abstract state out of range");
    }
    return table[static_cast<std::size_t>(abstract_state)];
}

AbstractPolicy value_iteration(const Mdp& quotient, int abstraction_index,
                               const ValueIterationOptions& options) {
    const Mdp q = normalized_valid(quotient);
    if (options.gamma < 0.0 || options.gamma >= 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "value_iteration: gamma must be in [0, 1)");
    }
    if (!(options.tol > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, "value_iteration: tol must be positive");
    }

    const int n = q.n_states;
    std::vector<double> values(static_cast<std::size_t>(n), 0.0);
    std::vector<double> next(static_cast<std::size_t>(n), 0.0);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        double residual = 0.0;
        for (int z = 0; z < n; ++z) {
            double best = -HUGE_VAL;
            for (int a = 0; a < q.n_actions; ++a) {
                double value = q.reward(z, a);
                for (int z2 = 0; z2 < n; ++z2) {
                    value += options.gamma * q.transition(z, a, z2) * values[static_cast<std::size_t>(z2)];
                }
                if (value > best) best = value;
            }
            next[static_cast<std::size_t>(z)] = best;
            residual = std::max(residual, std::abs(best - values[static_cast<std::size_t>(z)]));
        }
        values.swap(next);
        if (residual < options.tol) break;
    }

    AbstractPolicy policy;
    policy.kind = PolicyKind::kGreedy;
    policy.abstraction_index = abstraction_index;
    policy.n_actions = q.n_actions;
    policy.values = values;
    policy.table.resize(static_cast<std::size_t>(n), 0);
    for (int z = 0; z < n; ++z) {
        double best = -HUGE_VAL;
        int best_action = 0;
        for (int a = 0; a < q.n_actions; ++a) {
            double value = q.reward(z, a);
            for (int z2 = 0; z2 < n; ++z2) {
                value += options.gamma * q.transition(z, a, z2) * values[static_cast<std::size_t>(z2)];
            }
            if (value > best) {  // strict: ties stay at the lowest action index
                best = value;
                best_action = a;
            }
        }
        policy.table[static_cast<std::size_t>(z)] = best_action;
    }
    return policy;
}

AbstractPolicy random_policy(int n_actions, int abstraction_index) {
    if (n_actions < 1) {
        throw Error(ErrorCode::kInvalidArgument, "random_policy: n_actions must be >= 1");
    }
    AbstractPolicy policy;
    policy.kind = PolicyKind::kRandom;
    policy.abstraction_index = abstraction_index;
    policy.n_actions = n_actions;
    return policy;
}

}  // namespace oas
