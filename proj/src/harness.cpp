#include "oas/harness.hpp"

#include <algorithm>
#include <cmath>

#include "oas/error.hpp"

namespace oas {

namespace {

BeliefState initial_belief(const FilterConfig& filter, int n) {
    if (filter.prior.empty()) return uniform_belief(n);
    if (static_cast<int>(filter.prior.size()) != n) {
        throw Error(ErrorCode::kInvalidArgument, "prior size does not match the catalog");
    }
    BeliefState b;
    b.probs = filter.prior;
    validate_belief(b);
    return b;
}

void check_filter(const FilterConfig& filter, int n) {
    if (filter.transition.n != n) {
        throw Error(ErrorCode::kInvalidArgument, "transition model size does not match the catalog");
    }
    if (filter.epsilon < 0.0 || filter.epsilon > 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "epsilon must be in [0, 1]");
    }
}

}  // namespace

TrialTrace run_trial(const DiscreteScenario& scenario, const SwitchSchedule& schedule,
                     const FilterConfig& filter, const TrialOptions& options, std::uint64_t seed) {
    const int n = scenario.catalog.size();
    if (schedule.n_contexts > n) {
        throw Error(ErrorCode::kInvalidArgument, "schedule references contexts beyond the catalog");
    }
    check_filter(filter, n);
    if (options.policy_mode == PolicyMode::kPursuit) {
        throw Error(ErrorCode::kInvalidArgument, "pursuit policy applies to the continuous scenario");
    }

    std::vector<AbstractPolicy> policies;
    for (int i = 0; i < n; ++i) {
        if (options.policy_mode == PolicyMode::kAbstract) {
            policies.push_back(
                value_iteration(scenario.abstractions[static_cast<std::size_t>(i)].quotient, i,
                                options.vi));
        } else {
            policies.push_back(random_policy(scenario.catalog.n_actions(), i));
        }
    }

    RandomStream rng = RandomStream::for_trial(seed, 0);
    int state = rng.uniform_int(scenario.catalog.n_states());
    int observed = observe_state_discrete(state, scenario.sigma, scenario.noise_kind, rng);

    BeliefState belief = initial_belief(filter, n);
    int ml = ml_abstraction(belief);

    TrialTrace trace;
    trace.seed = seed;
    trace.n_abstractions = n;
    trace.steps.reserve(static_cast<std::size_t>(schedule.horizon));

    for (int t = 0; t < schedule.horizon; ++t) {
        const int context = schedule.active(t);
        const Mdp& active = scenario.catalog.contexts[static_cast<std::size_t>(context)];

        // Action from the previous step's ML abstraction applied to the
        // previous observed abstract state (one-step-delayed indexing).
        const int z_prev = map_state(scenario.abstractions[static_cast<std::size_t>(ml)], observed);
        const int action = policies[static_cast<std::size_t>(ml)].action(z_prev, rng);

        state = sample_transition(active, state, action, rng);
        const double reward = active.reward(state, action);
        observed = observe_state_discrete(state, scenario.sigma, scenario.noise_kind, rng);

        const auto likelihoods = discrete_likelihoods(scenario, reward, observed, filter.epsilon);
        OasStepResult step = oas_step(belief, filter.transition, likelihoods);
        belief = step.belief;
        ml = step.ml;
        if (step.degenerate) ++trace.degenerate_updates;

        StepRecord record;
        record.true_context = context;
        record.state = {static_cast<double>(state)};
        record.observed = {static_cast<double>(observed)};
        record.reward = reward;
        record.belief = belief.probs;
        record.ml = ml;
        record.action = action;
        record.degenerate_update = step.degenerate;
        trace.steps.push_back(std::move(record));
    }
    return trace;
}

TrialTrace run_trial(const ContinuousScenario& scenario_template, const SwitchSchedule& schedule,
                     const FilterConfig& filter, const TrialOptions& options, std::uint64_t seed) {
    if (scenario_template.humans.size() != 2) {
        throw Error(ErrorCode::kInvalidArgument, "continuous scenario needs exactly two humans");
    }
    const int n = 2;
    if (schedule.n_contexts > n) {
        throw Error(ErrorCode::kInvalidArgument, "schedule references contexts beyond the catalog");
    }
    check_filter(filter, n);
    if (options.policy_mode == PolicyMode::kAbstract) {
        throw Error(ErrorCode::kInvalidArgument,
                    "abstract value-iteration policies apply to the discrete scenario");
    }

    ContinuousScenario scenario = scenario_template;  // trials own their world state
    const std::vector<ProjectionAbstraction> catalog = {
        ProjectionAbstraction{0, scenario.params.rho},
        ProjectionAbstraction{1, scenario.params.rho},
    };
    AbstractPolicy random = random_policy(kNumDriveActions);

    RandomStream rng = RandomStream::for_trial(seed, 0);
    std::array<double, 4> observed =
        observe_state_continuous(scenario.relative_state(), scenario.params.noise, rng);

    BeliefState belief = initial_belief(filter, n);
    int ml = ml_abstraction(belief);

    TrialTrace trace;
    trace.seed = seed;
    trace.n_abstractions = n;
    trace.steps.reserve(static_cast<std::size_t>(schedule.horizon));

    for (int t = 0; t < schedule.horizon; ++t) {
        const int holder = schedule.active(t);

        DriveAction action;
        if (options.policy_mode == PolicyMode::kPursuit) {
            action = pursuit_policy(catalog[static_cast<std::size_t>(ml)], observed, scenario.params);
        } else {
            action = static_cast<DriveAction>(random.action(0, rng));
        }

        const ContinuousStepResult env = step_continuous(scenario, action, holder);
        observed = observe_state_continuous(env.true_state, scenario.params.noise, rng);
        if (options.tamper) {
            options.tamper(t, ml, std::span<double>(observed.data(), observed.size()));
        }

        const auto likelihoods =
            continuous_likelihoods(catalog, env.reward, observed, filter.epsilon);
        OasStepResult step = oas_step(belief, filter.transition, likelihoods);
        belief = step.belief;
        ml = step.ml;
        if (step.degenerate) ++trace.degenerate_updates;

        StepRecord record;
        record.true_context = holder;
        record.state.assign(env.true_state.begin(), env.true_state.end());
        record.observed.assign(observed.begin(), observed.end());
        record.reward = env.reward;
        record.belief = belief.probs;
        record.ml = ml;
        record.action = static_cast<int>(action);
        record.degenerate_update = step.degenerate;
        trace.steps.push_back(std::move(record));
    }
    return trace;
}

TrialMetrics compute_metrics(const TrialTrace& trace, const SwitchSchedule& schedule) {
    const int horizon = trace.horizon();
    if (horizon != schedule.horizon) {
        throw Error(ErrorCode::kInvalidArgument, "trace and schedule horizons differ");
    }
    TrialMetrics metrics;

    int correct = 0;
    double reward_sum = 0.0;
    for (int t = 0; t < horizon; ++t) {
        const StepRecord& step = trace.steps[static_cast<std::size_t>(t)];
        if (step.ml == schedule.active(t)) ++correct;
        reward_sum += step.reward;
    }
    metrics.accuracy = static_cast<double>(correct) / horizon;
    metrics.normalized_reward = reward_sum / horizon;

    double lag_sum = 0.0;
    double lag_max = 0.0;
    int switches = 0;
    for (int tau = 1; tau < horizon; ++tau) {
        if (schedule.active(tau) == schedule.active(tau - 1)) continue;
        ++switches;
        int window_end = horizon;
        for (int u = tau + 1; u < horizon; ++u) {
            if (schedule.active(u) != schedule.active(tau)) {
                window_end = u;
                break;
            }
        }
        const int window = window_end - tau;
        int lag = window;  // capped when the context is never inferred in time
        for (int k = 0; k < window; ++k) {
            if (trace.steps[static_cast<std::size_t>(tau + k)].ml == schedule.active(tau)) {
                lag = k;
                break;
            }
        }
        lag_sum += lag;
        lag_max = std::max(lag_max, static_cast<double>(lag));
    }
    metrics.switch_count = switches;
    metrics.avg_lag = switches > 0 ? lag_sum / switches : 0.0;
    metrics.max_lag = lag_max;
    return metrics;
}

namespace {

MeanStd mean_std(std::vector<double> values) {
    // Sorted accumulation makes the result independent of trial order.
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    return MeanStd{mean, std::sqrt(sq / static_cast<double>(values.size()))};
}

}  // namespace

AggregateMetrics aggregate(std::span<const TrialMetrics> metrics) {
    if (metrics.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "aggregate: empty metrics list");
    }
    std::vector<double> acc, avg, mx, reward;
    for (const TrialMetrics& m : metrics) {
        acc.push_back(m.accuracy);
        avg.push_back(m.avg_lag);
        mx.push_back(m.max_lag);
        reward.push_back(m.normalized_reward);
    }
    AggregateMetrics out;
    out.accuracy = mean_std(std::move(acc));
    out.avg_lag = mean_std(std::move(avg));
    out.max_lag = mean_std(std::move(mx));
    out.normalized_reward = mean_std(std::move(reward));
    out.n_trials = static_cast<int>(metrics.size());
    return out;
}

}  // namespace oas
