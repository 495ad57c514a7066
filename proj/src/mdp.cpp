#include "oas/mdp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "oas/error.hpp"

namespace oas {

namespace {

std::string format_index(const char* name, int a, int s) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s[a=%d][s=%d]", name, a, s);
    return buf;
}

}  // namespace

std::string ValidationReport::to_string() const {
    if (ok()) return "ok";
    std::ostringstream out;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        if (i > 0) out << "; ";
        out << issues[i].where << ": " << issues[i].message;
    }
    return out.str();
}

ValidationReport validate_mdp(const Mdp& m) {
    ValidationReport report;
    auto add = [&](std::string where, std::string message) {
        report.issues.push_back({std::move(where), std::move(message)});
    };

    if (m.n_states <= 0) add("n_states", "must be positive");
    if (m.n_actions <= 0) add("n_actions", "must be positive");
    if (!report.ok()) return report;

    const std::size_t n = static_cast<std::size_t>(m.n_states);
    if (m.transitions.size() != static_cast<std::size_t>(m.n_actions)) {
        add("transitions", "expected one matrix per action");
        return report;
    }
    for (int a = 0; a < m.n_actions; ++a) {
        const auto& mat = m.transitions[static_cast<std::size_t>(a)];
        if (mat.size() != n * n) {
            add(format_index("transitions", a, -1), "matrix is not n_states x n_states");
            continue;
        }
        for (int s = 0; s < m.n_states; ++s) {
            double sum = 0.0;
            bool range_ok = true;
            for (int t = 0; t < m.n_states; ++t) {
                const double p = mat[static_cast<std::size_t>(s) * n + t];
                if (!std::isfinite(p) || p < -kRowSumTolerance || p > 1.0 + kRowSumTolerance) {
                    range_ok = false;
                }
                sum += p;
            }
            if (!range_ok) {
                add(format_index("transitions", a, s), "entries must be finite and in [0,1]");
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "row sums to %.12g", sum);
                add(format_index("transitions", a, s), buf);
            }
        }
    }

    if (m.rewards.size() != n * static_cast<std::size_t>(m.n_actions)) {
        add("rewards", "expected n_states x n_actions entries");
    } else {
        for (int s = 0; s < m.n_states; ++s) {
            for (int a = 0; a < m.n_actions; ++a) {
                if (!std::isfinite(m.reward(s, a))) {
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "rewards[s=%d][a=%d]", s, a);
                    add(buf, "value is not finite");
                }
            }
        }
    }
    return report;
}

Mdp normalized_valid(Mdp m) {
    const ValidationReport report = validate_mdp(m);
    if (!report.ok()) {
        throw Error(ErrorCode::kValidation, "invalid MDP: " + report.to_string());
    }
    const std::size_t n = static_cast<std::size_t>(m.n_states);
    for (auto& mat : m.transitions) {
        for (std::size_t s = 0; s < n; ++s) {
            double sum = 0.0;
            for (std::size_t t = 0; t < n; ++t) {
                if (mat[s * n + t] < 0.0) mat[s * n + t] = 0.0;  // tolerance dust
                sum += mat[s * n + t];
            }
            for (std::size_t t = 0; t < n; ++t) mat[s * n + t] /= sum;
        }
    }
    return m;
}

int sample_transition(const Mdp& m, int state, int action, RandomStream& rng) {
    if (state < 0 || state >= m.n_states) {
        throw Error(ErrorCode::kInvalidArgument, "sample_transition: state out of range");
    }
    if (action < 0 || action >= m.n_actions) {
        throw Error(ErrorCode::kInvalidArgument, "sample_transition: action out of range");
    }
    const std::size_t n = static_cast<std::size_t>(m.n_states);
    const double* row =
        m.transitions[static_cast<std::size_t>(action)].data() + static_cast<std::size_t>(state) * n;
    return rng.categorical(std::span<const double>(row, n));
}

ContextCatalog ContextCatalog::validated(std::vector<Mdp> contexts) {
    if (contexts.empty()) {
        throw Error(ErrorCode::kValidation, "context catalog must not be empty");
    }
    for (auto& m : contexts) m = normalized_valid(std::move(m));
    for (std::size_t i = 1; i < contexts.size(); ++i) {
        if (contexts[i].n_states != contexts[0].n_states ||
            contexts[i].n_actions != contexts[0].n_actions) {
            throw Error(ErrorCode::kValidation,
                        "context catalog members must share n_states and n_actions");
        }
    }
    return ContextCatalog{std::move(contexts)};
}

int SwitchSchedule::switch_count() const {
    int count = 0;
    for (std::size_t t = 1; t < active_sequence.size(); ++t) {
        if (active_sequence[t] != active_sequence[t - 1]) ++count;
    }
    return count;
}

namespace {

void require_horizon(int horizon) {
    if (horizon <= 0) throw Error(ErrorCode::kInvalidArgument, "schedule horizon must be positive");
}

}  // namespace

SwitchSchedule make_step_schedule(int switch_at, int horizon) {
    require_horizon(horizon);
    if (switch_at <= 0 || switch_at >= horizon) {
        throw Error(ErrorCode::kInvalidArgument,
                    "step schedule: switch time must be in (0, horizon)");
    }
    SwitchSchedule s;
    s.horizon = horizon;
    s.n_contexts = 2;
    s.pattern = SchedulePattern::kStep;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "step(switch_at=%d)", switch_at);
    s.descriptor = buf;
    s.active_sequence.resize(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) s.active_sequence[static_cast<std::size_t>(t)] = t < switch_at ? 0 : 1;
    return s;
}

SwitchSchedule make_periodic_schedule(int period, int horizon) {
    require_horizon(horizon);
    if (period <= 0) throw Error(ErrorCode::kInvalidArgument, "periodic schedule: period must be positive");
    SwitchSchedule s;
    s.horizon = horizon;
    s.n_contexts = 2;
    s.pattern = SchedulePattern::kPeriodic;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "periodic(period=%d)", period);
    s.descriptor = buf;
    s.active_sequence.resize(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
        s.active_sequence[static_cast<std::size_t>(t)] = (t / period) % 2;
    }
    return s;
}

SwitchSchedule make_uniform_random_schedule(int n_contexts, int horizon, RandomStream& rng) {
    require_horizon(horizon);
    if (n_contexts <= 0) {
        throw Error(ErrorCode::kInvalidArgument, "random schedule: n_contexts must be positive");
    }
    SwitchSchedule s;
    s.horizon = horizon;
    s.n_contexts = n_contexts;
    s.pattern = SchedulePattern::kUniformRandom;
    s.descriptor = "uniform_random";
    s.active_sequence.resize(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
        s.active_sequence[static_cast<std::size_t>(t)] = rng.uniform_int(n_contexts);
    }
    return s;
}

SwitchSchedule make_scripted_schedule(std::vector<int> sequence, int n_contexts) {
    if (sequence.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "scripted schedule: sequence must not be empty");
    }
    for (int v : sequence) {
        if (v < 0 || v >= n_contexts) {
            throw Error(ErrorCode::kInvalidArgument,
                        "scripted schedule: context index out of range");
        }
    }
    SwitchSchedule s;
    s.horizon = static_cast<int>(sequence.size());
    s.n_contexts = n_contexts;
    s.pattern = SchedulePattern::kScripted;
    s.descriptor = "scripted";
    s.active_sequence = std::move(sequence);
    return s;
}

SwitchSchedule make_schedule(SchedulePattern pattern, const ScheduleParams& params, int horizon,
                             int n_contexts, RandomStream* rng) {
    switch (pattern) {
        case SchedulePattern::kStep:
            return make_step_schedule(params.switch_at, horizon);
        case SchedulePattern::kPeriodic:
            return make_periodic_schedule(params.period, horizon);
        case SchedulePattern::kUniformRandom:
            if (rng == nullptr) {
                throw Error(ErrorCode::kInvalidArgument, "random schedule requires a random stream");
            }
            return make_uniform_random_schedule(n_contexts, horizon, *rng);
        case SchedulePattern::kScripted:
            return make_scripted_schedule(params.sequence, n_contexts);
    }
    throw Error(ErrorCode::kInvalidArgument, "unknown schedule pattern");
}

}  // namespace oas
