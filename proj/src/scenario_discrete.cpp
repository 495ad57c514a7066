#include "oas/scenario_discrete.hpp"

#include <cmath>

#include "oas/error.hpp"
#include "oas/filter.hpp"

namespace oas {

DiscreteTransitionsConfig default_discrete_transitions() {
    // Commanded-direction corridor moves: the robot reaches the far cell of
    // the commanded side with probability 0.75 and falls short in the middle
    // cell otherwise, from every starting cell. Both required partition
    // structures hold under these dynamics, and the middle cell gives the
    // filter its uninformative steps.
    DiscreteTransitionsConfig config;
    config.matrices = {
        {
            // left
            0.75, 0.25, 0.00,  //
            0.75, 0.25, 0.00,  //
            0.75, 0.25, 0.00,  //
        },
        {
            // right
            0.00, 0.25, 0.75,  //
            0.00, 0.25, 0.75,  //
            0.00, 0.25, 0.75,  //
        },
    };
    return config;
}

namespace {

Mdp make_context(const DiscreteTransitionsConfig& config, int rewarded_state) {
    Mdp m;
    m.n_states = kDiscreteStates;
    m.n_actions = kDiscreteActions;
    m.transitions = config.matrices;
    m.rewards.assign(kDiscreteStates * kDiscreteActions, 0.0);
    for (int a = 0; a < kDiscreteActions; ++a) {
        m.rewards[static_cast<std::size_t>(rewarded_state) * kDiscreteActions + a] = 1.0;
    }
    m.state_labels = {"s1", "s2", "s3"};
    m.action_labels = {"L", "R"};
    return m;
}

bool blocks_equal(const Partition& p, const std::vector<std::vector<int>>& expected) {
    return p.blocks == expected;
}

}  // namespace

DiscreteScenario build_discrete_scenario(const DiscreteTransitionsConfig& config, double sigma,
                                         StateNoiseKind noise_kind) {
    if (config.matrices.size() != kDiscreteActions) {
        throw Error(ErrorCode::kValidation, "discrete scenario needs one 3x3 matrix per action (L, R)");
    }
    if (sigma < 0.0 || sigma > 1.0) {
        throw Error(ErrorCode::kValidation, "sigma must be in [0, 1]");
    }

    // Context 0 rewards the last cell s3, context 1 the first cell s1.
    std::vector<Mdp> contexts = {make_context(config, 2), make_context(config, 0)};
    DiscreteScenario scenario;
    scenario.catalog = ContextCatalog::validated(std::move(contexts));
    scenario.sigma = sigma;
    scenario.noise_kind = noise_kind;

    for (int i = 0; i < scenario.catalog.size(); ++i) {
        const Mdp& context = scenario.catalog.contexts[static_cast<std::size_t>(i)];
        Partition p = coarsest_bisimulation(context);
        scenario.abstractions.push_back(build_abstraction(context, p, i));
    }

    // The attention structure is fixed: context 0 must group {s1, s2} and
    // context 1 must group {s2, s3}. A transitions config that breaks this is
    // a configuration error, not a different scenario.
    if (!blocks_equal(scenario.abstractions[0].partition, {{0, 1}, {2}})) {
        throw Error(ErrorCode::kValidation,
                    "scenario-consistency: context 0 bisimulation must group {s1,s2} and isolate {s3}; "
                    "the supplied transitions do not");
    }
    if (!blocks_equal(scenario.abstractions[1].partition, {{0}, {1, 2}})) {
        throw Error(ErrorCode::kValidation,
                    "scenario-consistency: context 1 bisimulation must isolate {s1} and group {s2,s3}; "
                    "the supplied transitions do not");
    }
    return scenario;
}

int observe_state_discrete(int true_state, double sigma, StateNoiseKind kind, RandomStream& rng) {
    if (true_state < 0 || true_state >= kDiscreteStates) {
        throw Error(ErrorCode::kInvalidArgument, "observe_state_discrete: state out of range");
    }
    if (sigma < 0.0 || sigma > 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "observe_state_discrete: sigma must be in [0, 1]");
    }
    if (sigma == 0.0) return true_state;
    switch (kind) {
        case StateNoiseKind::kUniform: {
            if (rng.uniform01() >= sigma) return true_state;
            const int other = rng.uniform_int(kDiscreteStates - 1);
            return other < true_state ? other : other + 1;
        }
        case StateNoiseKind::kInward: {
            // Confusions land one cell toward the middle; the middle cell has
            // no inward neighbour and is always read correctly.
            if (true_state == 1) return 1;
            return rng.uniform01() < sigma ? 1 : true_state;
        }
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown noise kind");
}

std::vector<double> discrete_likelihoods(const DiscreteScenario& scenario, double reward,
                                         int observed_state, double epsilon) {
    std::vector<double> likelihoods;
    likelihoods.reserve(scenario.abstractions.size());
    for (const Abstraction& ab : scenario.abstractions) {
        const int z = map_state(ab, observed_state);
        // Scenario rewards are action-constant, so the block reward at any
        // action is the block's predicted reward.
        const double predicted = ab.quotient.reward(z, 0);
        const bool matched = std::abs(predicted - reward) <= 1e-12;
        likelihoods.push_back(matched ? matched_likelihood(epsilon) : mismatched_likelihood(epsilon));
    }
    return likelihoods;
}

}  // namespace oas
