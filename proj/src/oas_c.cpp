#include "oas/oas.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "oas/bisim.hpp"
#include "oas/config.hpp"
#include "oas/error.hpp"
#include "oas/filter.hpp"
#include "oas/mdp.hpp"
#include "oas/rng.hpp"
#include "oas/scenario_discrete.hpp"
#include "oas/suite.hpp"

namespace {

thread_local std::string g_last_error = "no error";

oas_status code_to_status(oas::ErrorCode code) {
    switch (code) {
        case oas::ErrorCode::kInvalidArgument: return OAS_ERR_INVALID_ARGUMENT;
        case oas::ErrorCode::kValidation: return OAS_ERR_VALIDATION;
        case oas::ErrorCode::kParse: return OAS_ERR_PARSE;
        case oas::ErrorCode::kIo: return OAS_ERR_IO;
        case oas::ErrorCode::kRuntime: return OAS_ERR_RUNTIME;
    }
    return OAS_ERR_RUNTIME;
}

oas_status set_error(oas_status status, const char* message) {
    g_last_error = message;
    return status;
}

/// Runs `fn`, translating exceptions into status codes + the thread-local
/// error message.
template <typename Fn>
oas_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const oas::Error& e) {
        g_last_error = e.what();
        return code_to_status(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return OAS_ERR_RUNTIME;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return OAS_ERR_RUNTIME;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct oas_mdp {
    oas::Mdp mdp;
};

struct oas_rng {
    oas::RandomStream stream;
};

struct oas_abstraction {
    oas::Abstraction abstraction;
    oas_mdp quotient_view;
};

struct oas_filter {
    oas::BeliefState belief;
    oas::AbstractionTransitionModel transition;
    double epsilon = 1e-3;
};

struct oas_config {
    oas::ExperimentConfig config;
};

extern "C" {

const char* oas_version(void) { return oas::version(); }

const char* oas_last_error(void) { return g_last_error.c_str(); }

void oas_string_free(char* s) { delete[] s; }

oas_status oas_mdp_create(int32_t n_states, int32_t n_actions, const double* transitions,
                          const double* rewards, oas_mdp** out) {
    if (out == nullptr || transitions == nullptr || rewards == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_mdp_create: null argument");
    }
    return guarded([&]() {
        oas::Mdp m;
        m.n_states = n_states;
        m.n_actions = n_actions;
        if (n_states <= 0 || n_actions <= 0) {
            throw oas::Error(oas::ErrorCode::kValidation, "n_states and n_actions must be positive");
        }
        const std::size_t n = static_cast<std::size_t>(n_states);
        for (int32_t a = 0; a < n_actions; ++a) {
            m.transitions.emplace_back(transitions + static_cast<std::size_t>(a) * n * n,
                                       transitions + static_cast<std::size_t>(a + 1) * n * n);
        }
        m.rewards.assign(rewards, rewards + n * static_cast<std::size_t>(n_actions));
        *out = new oas_mdp{oas::normalized_valid(std::move(m))};
        return OAS_OK;
    });
}

oas_status oas_mdp_load_json(const char* path, oas_mdp** out) {
    if (path == nullptr || out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_mdp_load_json: null argument");
    }
    return guarded([&]() {
        *out = new oas_mdp{oas::mdp_from_json_file(path)};
        return OAS_OK;
    });
}

void oas_mdp_free(oas_mdp* mdp) { delete mdp; }

int32_t oas_mdp_num_states(const oas_mdp* mdp) { return mdp == nullptr ? -1 : mdp->mdp.n_states; }

int32_t oas_mdp_num_actions(const oas_mdp* mdp) {
    return mdp == nullptr ? -1 : mdp->mdp.n_actions;
}

oas_status oas_mdp_transition_row(const oas_mdp* mdp, int32_t state, int32_t action,
                                  double* row_out) {
    if (mdp == nullptr || row_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_mdp_transition_row: null argument");
    }
    if (state < 0 || state >= mdp->mdp.n_states || action < 0 || action >= mdp->mdp.n_actions) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_mdp_transition_row: index out of range");
    }
    for (int32_t t = 0; t < mdp->mdp.n_states; ++t) {
        row_out[t] = mdp->mdp.transition(state, action, t);
    }
    return OAS_OK;
}

oas_status oas_mdp_reward(const oas_mdp* mdp, int32_t state, int32_t action, double* reward_out) {
    if (mdp == nullptr || reward_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_mdp_reward: null argument");
    }
    if (state < 0 || state >= mdp->mdp.n_states || action < 0 || action >= mdp->mdp.n_actions) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_mdp_reward: index out of range");
    }
    *reward_out = mdp->mdp.reward(state, action);
    return OAS_OK;
}

oas_status oas_rng_create(uint64_t seed, oas_rng** out) {
    if (out == nullptr) return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_rng_create: null argument");
    *out = new oas_rng{oas::RandomStream(seed)};
    return OAS_OK;
}

void oas_rng_free(oas_rng* rng) { delete rng; }

oas_status oas_mdp_sample_transition(const oas_mdp* mdp, int32_t state, int32_t action,
                                     oas_rng* rng, int32_t* next_state_out) {
    if (mdp == nullptr || rng == nullptr || next_state_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_mdp_sample_transition: null argument");
    }
    return guarded([&]() {
        *next_state_out = oas::sample_transition(mdp->mdp, state, action, rng->stream);
        return OAS_OK;
    });
}

oas_status oas_mdp_coarsest_partition(const oas_mdp* mdp, int32_t* block_of,
                                      int32_t* n_blocks_out) {
    if (mdp == nullptr || block_of == nullptr || n_blocks_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_mdp_coarsest_partition: null argument");
    }
    return guarded([&]() {
        const oas::Partition p = oas::coarsest_bisimulation(mdp->mdp);
        for (std::size_t s = 0; s < p.block_of.size(); ++s) {
            block_of[s] = p.block_of[s];
        }
        *n_blocks_out = p.num_blocks();
        return OAS_OK;
    });
}

oas_status oas_abstraction_build(const oas_mdp* mdp, const int32_t* block_of,
                                 int32_t catalog_index, oas_abstraction** out) {
    if (mdp == nullptr || block_of == nullptr || out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_abstraction_build: null argument");
    }
    return guarded([&]() {
        std::vector<int> raw(block_of, block_of + mdp->mdp.n_states);
        const oas::Partition p = oas::Partition::from_block_of(raw);
        auto* handle = new oas_abstraction{
            oas::build_abstraction(mdp->mdp, p, catalog_index), {}};
        handle->quotient_view.mdp = handle->abstraction.quotient;
        *out = handle;
        return OAS_OK;
    });
}

void oas_abstraction_free(oas_abstraction* ab) { delete ab; }

int32_t oas_abstraction_num_blocks(const oas_abstraction* ab) {
    return ab == nullptr ? -1 : ab->abstraction.num_abstract_states();
}

oas_status oas_abstraction_map_state(const oas_abstraction* ab, int32_t state,
                                     int32_t* block_out) {
    if (ab == nullptr || block_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_abstraction_map_state: null argument");
    }
    return guarded([&]() {
        *block_out = oas::map_state(ab->abstraction, state);
        return OAS_OK;
    });
}

const oas_mdp* oas_abstraction_quotient(const oas_abstraction* ab) {
    return ab == nullptr ? nullptr : &ab->quotient_view;
}

oas_status oas_filter_create(int32_t n, const double* prior, const double* transition,
                             double epsilon, oas_filter** out) {
    if (out == nullptr || transition == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_filter_create: null argument");
    }
    return guarded([&]() {
        if (n <= 0) throw oas::Error(oas::ErrorCode::kInvalidArgument, "filter size must be positive");
        if (epsilon < 0.0 || epsilon > 1.0) {
            throw oas::Error(oas::ErrorCode::kInvalidArgument, "epsilon must be in [0, 1]");
        }
        std::vector<double> matrix(transition, transition + static_cast<std::size_t>(n) * n);
        oas::BeliefState belief;
        if (prior == nullptr) {
            belief = oas::uniform_belief(n);
        } else {
            belief.probs.assign(prior, prior + n);
            oas::validate_belief(belief);
        }
        *out = new oas_filter{std::move(belief),
                              oas::AbstractionTransitionModel::from_matrix(n, std::move(matrix)),
                              epsilon};
        return OAS_OK;
    });
}

void oas_filter_free(oas_filter* filter) { delete filter; }

oas_status oas_stay_matrix(int32_t n, double stay_prob, double* out) {
    if (out == nullptr) return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_stay_matrix: null argument");
    return guarded([&]() {
        const oas::AbstractionTransitionModel model =
            oas::AbstractionTransitionModel::stay(n, stay_prob);
        for (std::size_t i = 0; i < model.matrix.size(); ++i) out[i] = model.matrix[i];
        return OAS_OK;
    });
}

oas_status oas_filter_step(oas_filter* filter, const double* likelihoods, int32_t* ml_out) {
    if (filter == nullptr || likelihoods == nullptr || ml_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_filter_step: null argument");
    }
    return guarded([&]() {
        const std::span<const double> span(likelihoods,
                                           static_cast<std::size_t>(filter->belief.size()));
        oas::OasStepResult result = oas::oas_step(filter->belief, filter->transition, span);
        filter->belief = std::move(result.belief);
        *ml_out = result.ml;
        return OAS_OK;
    });
}

oas_status oas_detect_discrete(const oas_abstraction* const* abstractions, int32_t n,
                               double reward, int32_t observed_state, double epsilon,
                               double* likelihoods_out) {
    if (abstractions == nullptr || likelihoods_out == nullptr || n <= 0) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_detect_discrete: bad arguments");
    }
    return guarded([&]() {
        for (int32_t i = 0; i < n; ++i) {
            if (abstractions[i] == nullptr) {
                throw oas::Error(oas::ErrorCode::kInvalidArgument, "null abstraction in catalog");
            }
            const oas::Abstraction& ab = abstractions[i]->abstraction;
            const int z = oas::map_state(ab, observed_state);
            const double predicted = ab.quotient.reward(z, 0);
            const bool matched = std::abs(predicted - reward) <= 1e-12;
            likelihoods_out[i] =
                matched ? oas::matched_likelihood(epsilon) : oas::mismatched_likelihood(epsilon);
        }
        return OAS_OK;
    });
}

oas_status oas_filter_belief(const oas_filter* filter, double* probs_out) {
    if (filter == nullptr || probs_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_filter_belief: null argument");
    }
    for (std::size_t i = 0; i < filter->belief.probs.size(); ++i) {
        probs_out[i] = filter->belief.probs[i];
    }
    return OAS_OK;
}

int32_t oas_filter_size(const oas_filter* filter) {
    return filter == nullptr ? -1 : filter->belief.size();
}

oas_status oas_config_load(const char* path, oas_config** out) {
    if (path == nullptr || out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_config_load: null argument");
    }
    return guarded([&]() {
        *out = new oas_config{oas::parse_config_file(path)};
        return OAS_OK;
    });
}

void oas_config_free(oas_config* config) { delete config; }

oas_status oas_config_json(const oas_config* config, char** json_out) {
    if (config == nullptr || json_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_config_json: null argument");
    }
    return guarded([&]() {
        *json_out = dup_string(oas::write_config_json(config->config));
        return OAS_OK;
    });
}

oas_status oas_run_suite(const oas_config* config, const oas_run_options* options,
                         char** metrics_path_out) {
    if (config == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_run_suite: null config");
    }
    return guarded([&]() {
        oas::SuiteOptions suite_options;
        if (options != nullptr) {
            if (options->out_dir != nullptr) suite_options.out_dir = options->out_dir;
            if (options->seeds_csv != nullptr) {
                std::vector<std::uint64_t> seeds;
                const char* p = options->seeds_csv;
                while (*p != '\0') {
                    char* end = nullptr;
                    const unsigned long long v = std::strtoull(p, &end, 10);
                    if (end == p) {
                        throw oas::Error(oas::ErrorCode::kParse, "seeds: expected comma-separated integers");
                    }
                    seeds.push_back(v);
                    p = end;
                    if (*p == ',') ++p;
                    else if (*p != '\0') {
                        throw oas::Error(oas::ErrorCode::kParse, "seeds: expected comma-separated integers");
                    }
                }
                if (seeds.empty()) {
                    throw oas::Error(oas::ErrorCode::kParse, "seeds: list is empty");
                }
                suite_options.seeds = std::move(seeds);
            }
            if (options->traces >= 0) suite_options.traces = options->traces != 0;
            suite_options.parallel = options->parallel > 0 ? options->parallel : 1;
        }
        const oas::SuiteResult result = oas::run_suite(config->config, suite_options);
        if (metrics_path_out != nullptr) *metrics_path_out = dup_string(result.metrics_path);
        return OAS_OK;
    });
}

oas_status oas_quotient_report_json(const char* mdp_path, char** json_out) {
    if (mdp_path == nullptr || json_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_quotient_report_json: null argument");
    }
    return guarded([&]() {
        *json_out = dup_string(oas::quotient_report_json(mdp_path));
        return OAS_OK;
    });
}

oas_status oas_trace_stats_json(const char* trace_path, char** json_out) {
    if (trace_path == nullptr || json_out == nullptr) {
        return set_error(OAS_ERR_INVALID_ARGUMENT, "oas_trace_stats_json: null argument");
    }
    return guarded([&]() {
        *json_out = dup_string(oas::trace_stats_json(trace_path));
        return OAS_OK;
    });
}

}  // extern "C"
