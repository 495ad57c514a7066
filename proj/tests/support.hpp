// Shared helpers for the unit and acceptance suites: random MDP generators
// and bisimulation oracles that stay independent of the library's own
// partition-refinement implementation.
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "oas/bisim.hpp"
#include "oas/mdp.hpp"
#include "oas/rng.hpp"

namespace oas::testing {

inline constexpr double kOracleTolerance = 1e-9;

/// Random MDP with dense-ish rows and rewards drawn from a small value set,
/// so reward collisions (and therefore non-trivial blocks) are common.
inline Mdp random_mdp(RandomStream& rng, int max_states = 8, int max_actions = 3,
                      std::vector<double> reward_values = {0.0, 0.5, 1.0}) {
    Mdp m;
    m.n_states = 2 + rng.uniform_int(max_states - 1);
    m.n_actions = 1 + rng.uniform_int(max_actions);
    const std::size_t n = static_cast<std::size_t>(m.n_states);
    for (int a = 0; a < m.n_actions; ++a) {
        std::vector<double> matrix(n * n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            if (rng.uniform01() < 0.3) {
                matrix[s * n + static_cast<std::size_t>(rng.uniform_int(m.n_states))] = 1.0;
            } else {
                double total = 0.0;
                for (std::size_t t = 0; t < n; ++t) {
                    const double u = rng.uniform01();
                    matrix[s * n + t] = u * u;
                    total += u * u;
                }
                for (std::size_t t = 0; t < n; ++t) matrix[s * n + t] /= total;
            }
        }
        m.transitions.push_back(std::move(matrix));
    }
    for (int s = 0; s < m.n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            m.rewards.push_back(
                reward_values[static_cast<std::size_t>(rng.uniform_int(
                    static_cast<int>(reward_values.size())))]);
        }
    }
    return m;
}

/// MDP with a planted bisimulation: a random quotient is lifted by spreading
/// each block-to-block mass randomly over the target block's members, so the
/// planted grouping is a valid (possibly non-coarsest) bisimulation.
inline Mdp planted_mdp(RandomStream& rng, int n_states, int n_blocks, int n_actions) {
    Mdp quotient = random_mdp(rng, n_blocks, n_actions);
    quotient.n_states = n_blocks;
    // regenerate to the exact block count
    quotient.transitions.clear();
    quotient.rewards.clear();
    const std::size_t k = static_cast<std::size_t>(n_blocks);
    for (int a = 0; a < quotient.n_actions; ++a) {
        std::vector<double> matrix(k * k, 0.0);
        for (std::size_t z = 0; z < k; ++z) {
            double total = 0.0;
            for (std::size_t z2 = 0; z2 < k; ++z2) {
                const double u = rng.uniform01() + 1e-3;
                matrix[z * k + z2] = u;
                total += u;
            }
            for (std::size_t z2 = 0; z2 < k; ++z2) matrix[z * k + z2] /= total;
        }
        quotient.transitions.push_back(std::move(matrix));
    }
    const std::vector<double> reward_values = {0.0, 0.5, 1.0};
    for (int z = 0; z < n_blocks; ++z) {
        for (int a = 0; a < quotient.n_actions; ++a) {
            quotient.rewards.push_back(
                reward_values[static_cast<std::size_t>(rng.uniform_int(3))]);
        }
    }

    std::vector<int> block_of(static_cast<std::size_t>(n_states));
    for (int s = 0; s < n_blocks; ++s) block_of[static_cast<std::size_t>(s)] = s;  // non-empty blocks
    for (int s = n_blocks; s < n_states; ++s) {
        block_of[static_cast<std::size_t>(s)] = rng.uniform_int(n_blocks);
    }

    Mdp m;
    m.n_states = n_states;
    m.n_actions = quotient.n_actions;
    const std::size_t n = static_cast<std::size_t>(n_states);
    for (int a = 0; a < m.n_actions; ++a) {
        std::vector<double> matrix(n * n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
            const int zs = block_of[s];
            for (int z2 = 0; z2 < n_blocks; ++z2) {
                // members of target block z2
                std::vector<std::size_t> members;
                for (std::size_t t = 0; t < n; ++t) {
                    if (block_of[t] == z2) members.push_back(t);
                }
                // spread the block mass with per-state random weights
                std::vector<double> weights;
                double total = 0.0;
                for (std::size_t i = 0; i < members.size(); ++i) {
                    const double u = rng.uniform01() + 1e-3;
                    weights.push_back(u);
                    total += u;
                }
                const double mass = quotient.transition(zs, a, z2);
                for (std::size_t i = 0; i < members.size(); ++i) {
                    matrix[s * n + members[i]] = mass * weights[i] / total;
                }
            }
        }
        m.transitions.push_back(std::move(matrix));
    }
    for (int s = 0; s < n_states; ++s) {
        for (int a = 0; a < m.n_actions; ++a) {
            m.rewards.push_back(quotient.reward(block_of[static_cast<std::size_t>(s)], a));
        }
    }
    return m;
}

/// Independent validity check of a partition against both equivalence
/// conditions (equal reward vectors, equal block-aggregated probabilities).
inline bool is_bisim_partition(const Mdp& m, const std::vector<int>& block_of, int n_blocks) {
    const std::size_t n = static_cast<std::size_t>(m.n_states);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (block_of[i] != block_of[j]) continue;
            for (int a = 0; a < m.n_actions; ++a) {
                if (std::abs(m.reward(static_cast<int>(i), a) - m.reward(static_cast<int>(j), a)) >
                    kOracleTolerance) {
                    return false;
                }
                std::vector<double> agg_i(static_cast<std::size_t>(n_blocks), 0.0);
                std::vector<double> agg_j(static_cast<std::size_t>(n_blocks), 0.0);
                for (std::size_t t = 0; t < n; ++t) {
                    agg_i[static_cast<std::size_t>(block_of[t])] +=
                        m.transition(static_cast<int>(i), a, static_cast<int>(t));
                    agg_j[static_cast<std::size_t>(block_of[t])] +=
                        m.transition(static_cast<int>(j), a, static_cast<int>(t));
                }
                for (int z = 0; z < n_blocks; ++z) {
                    if (std::abs(agg_i[static_cast<std::size_t>(z)] -
                                 agg_j[static_cast<std::size_t>(z)]) > kOracleTolerance) {
                        return false;
                    }
                }
            }
        }
    }
    return true;
}

/// Brute-force oracle: greatest fixpoint over the pairwise equivalence
/// matrix. Pairs start related when reward vectors agree and are removed
/// whenever their aggregated probabilities (w.r.t. the current classes)
/// disagree, iterating pair-merge feasibility to a fixpoint.
inline Partition bisim_oracle(const Mdp& m) {
    const int n = m.n_states;
    std::vector<std::vector<bool>> equiv(static_cast<std::size_t>(n),
                                         std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            bool same = true;
            for (int a = 0; a < m.n_actions && same; ++a) {
                same = std::abs(m.reward(i, a) - m.reward(j, a)) <= kOracleTolerance;
            }
            equiv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = same;
        }
    }

    auto classes_of = [&]() {
        std::vector<int> cls(static_cast<std::size_t>(n), -1);
        int next = 0;
        for (int i = 0; i < n; ++i) {
            if (cls[static_cast<std::size_t>(i)] >= 0) continue;
            cls[static_cast<std::size_t>(i)] = next;
            for (int j = i + 1; j < n; ++j) {
                if (cls[static_cast<std::size_t>(j)] < 0 &&
                    equiv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
                    cls[static_cast<std::size_t>(j)] = next;
                }
            }
            ++next;
        }
        return std::make_pair(cls, next);
    };

    bool changed = true;
    while (changed) {
        changed = false;
        const auto [cls, k] = classes_of();
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (!equiv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
                bool keep = true;
                for (int a = 0; a < m.n_actions && keep; ++a) {
                    std::vector<double> agg_i(static_cast<std::size_t>(k), 0.0);
                    std::vector<double> agg_j(static_cast<std::size_t>(k), 0.0);
                    for (int t = 0; t < n; ++t) {
                        agg_i[static_cast<std::size_t>(cls[static_cast<std::size_t>(t)])] +=
                            m.transition(i, a, t);
                        agg_j[static_cast<std::size_t>(cls[static_cast<std::size_t>(t)])] +=
                            m.transition(j, a, t);
                    }
                    for (int z = 0; z < k && keep; ++z) {
                        keep = std::abs(agg_i[static_cast<std::size_t>(z)] -
                                        agg_j[static_cast<std::size_t>(z)]) <= kOracleTolerance;
                    }
                }
                if (!keep) {
                    equiv[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = false;
                    equiv[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = false;
                    changed = true;
                }
            }
        }
    }
    const auto [cls, k] = classes_of();
    (void)k;
    return Partition::from_block_of(cls);
}

/// True iff merging blocks a and b of `p` still satisfies both conditions.
inline bool merge_is_bisimulation(const Mdp& m, const Partition& p, int a, int b) {
    std::vector<int> merged = p.block_of;
    for (int& z : merged) {
        if (z == b) z = a;
    }
    const Partition q = Partition::from_block_of(merged);
    return is_bisim_partition(m, q.block_of, q.num_blocks());
}

}  // namespace oas::testing
