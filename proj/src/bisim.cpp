#include "oas/bisim.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

#include "oas/error.hpp"

namespace oas {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= kBisimTolerance; }

/// Signature of a state w.r.t. a partition: for every (action, block),
/// the probability mass flowing into that block.
std::vector<double> transition_signature(const Mdp& m, const std::vector<int>& block_of,
                                         int num_blocks, int state) {
    std::vector<double> sig(static_cast<std::size_t>(m.n_actions) * num_blocks, 0.0);
    const std::size_t n = static_cast<std::size_t>(m.n_states);
    for (int a = 0; a < m.n_actions; ++a) {
        const double* row =
            m.transitions[static_cast<std::size_t>(a)].data() + static_cast<std::size_t>(state) * n;
        double* out = sig.data() + static_cast<std::size_t>(a) * num_blocks;
        for (int t = 0; t < m.n_states; ++t) {
            out[block_of[static_cast<std::size_t>(t)]] += row[t];
        }
    }
    return sig;
}

bool signatures_close(const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!close(a[i], b[i])) return false;
    }
    return true;
}

bool rewards_close(const Mdp& m, int s1, int s2) {
    for (int a = 0; a < m.n_actions; ++a) {
        if (!close(m.reward(s1, a), m.reward(s2, a))) return false;
    }
    return true;
}

}  // namespace

Partition Partition::from_block_of(const std::vector<int>& raw) {
    Partition p;
    p.block_of.assign(raw.size(), -1);
    std::vector<int> relabel;
    for (std::size_t s = 0; s < raw.size(); ++s) {
        int dense = -1;
        for (std::size_t k = 0; k < relabel.size(); ++k) {
            if (relabel[k] == raw[s]) {
                dense = static_cast<int>(k);
                break;
            }
        }
        if (dense < 0) {
            dense = static_cast<int>(relabel.size());
            relabel.push_back(raw[s]);
            p.blocks.emplace_back();
        }
        p.block_of[s] = dense;
        p.blocks[static_cast<std::size_t>(dense)].push_back(static_cast<int>(s));
    }
    return p;
}

Partition coarsest_bisimulation(const Mdp& mdp) {
    const Mdp m = normalized_valid(mdp);

    // Initial blocks: states with matching reward vectors R(s, .). Leader
    // grouping keeps the tolerance comparison pairwise and deterministic.
    std::vector<int> block_of(static_cast<std::size_t>(m.n_states), -1);
    std::vector<int> leaders;
    for (int s = 0; s < m.n_states; ++s) {
        for (std::size_t k = 0; k < leaders.size(); ++k) {
            if (rewards_close(m, leaders[k], s)) {
                block_of[static_cast<std::size_t>(s)] = static_cast<int>(k);
                break;
            }
        }
        if (block_of[static_cast<std::size_t>(s)] < 0) {
            block_of[static_cast<std::size_t>(s)] = static_cast<int>(leaders.size());
            leaders.push_back(s);
        }
    }
    int num_blocks = static_cast<int>(leaders.size());

    // Split until no block contains two states whose block-aggregated
    // transition signatures differ.
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<double>> sigs(static_cast<std::size_t>(m.n_states));
        for (int s = 0; s < m.n_states; ++s) {
            sigs[static_cast<std::size_t>(s)] = transition_signature(m, block_of, num_blocks, s);
        }
        std::vector<int> next(block_of.size(), -1);
        int next_blocks = 0;
        for (int b = 0; b < num_blocks; ++b) {
            std::vector<int> sub_leaders;
            for (int s = 0; s < m.n_states; ++s) {
                if (block_of[static_cast<std::size_t>(s)] != b) continue;
                int assigned = -1;
                for (int leader : sub_leaders) {
                    if (signatures_close(sigs[static_cast<std::size_t>(leader)],
                                         sigs[static_cast<std::size_t>(s)])) {
                        assigned = next[static_cast<std::size_t>(leader)];
                        break;
                    }
                }
                if (assigned < 0) {
                    assigned = next_blocks++;
                    sub_leaders.push_back(s);
                }
                next[static_cast<std::size_t>(s)] = assigned;
            }
            if (sub_leaders.size() > 1) changed = true;
        }
        block_of = std::move(next);
        num_blocks = next_blocks;
    }
    return Partition::from_block_of(block_of);
}

std::optional<BisimViolation> check_bisimulation(const Mdp& m, const Partition& p) {
    const int num_blocks = p.num_blocks();
    for (const auto& block : p.blocks) {
        const int rep = block.front();
        const auto rep_sig = transition_signature(m, p.block_of, num_blocks, rep);
        for (std::size_t i = 1; i < block.size(); ++i) {
            const int s = block[i];
            for (int a = 0; a < m.n_actions; ++a) {
                if (!close(m.reward(rep, a), m.reward(s, a))) {
                    char buf[96];
                    std::snprintf(buf, sizeof(buf), "R(%d,%d) != R(%d,%d)", rep, a, s, a);
                    return BisimViolation{rep, s, a, buf};
                }
            }
            const auto sig = transition_signature(m, p.block_of, num_blocks, s);
            for (int a = 0; a < m.n_actions; ++a) {
                for (int z = 0; z < num_blocks; ++z) {
                    const std::size_t idx = static_cast<std::size_t>(a) * num_blocks + z;
                    if (!close(rep_sig[idx], sig[idx])) {
                        char buf[96];
                        std::snprintf(buf, sizeof(buf),
                                      "P(block %d | %d, a=%d) != P(block %d | %d, a=%d)", z, rep, a,
                                      z, s, a);
                        return BisimViolation{rep, s, a, buf};
                    }
                }
            }
        }
    }
    return std::nullopt;
}

Abstraction build_abstraction(const Mdp& mdp, const Partition& p, int catalog_index) {
    const Mdp m = normalized_valid(mdp);
    if (static_cast<int>(p.block_of.size()) != m.n_states) {
        throw Error(ErrorCode::kInvalidArgument, "partition does not cover the state set");
    }
    if (auto violation = check_bisimulation(m, p)) {
        throw Error(ErrorCode::kValidation,
                    "partition is not a bisimulation: " + violation->detail);
    }

    const int k = p.num_blocks();
    Mdp quotient;
    quotient.n_states = k;
    quotient.n_actions = m.n_actions;
    quotient.transitions.assign(static_cast<std::size_t>(m.n_actions),
                                std::vector<double>(static_cast<std::size_t>(k) * k, 0.0));
    quotient.rewards.assign(static_cast<std::size_t>(k) * m.n_actions, 0.0);

    for (int z = 0; z < k; ++z) {
        const int rep = p.blocks[static_cast<std::size_t>(z)].front();
        const auto sig = transition_signature(m, p.block_of, k, rep);
        for (int a = 0; a < m.n_actions; ++a) {
            for (int z2 = 0; z2 < k; ++z2) {
                quotient.transitions[static_cast<std::size_t>(a)][static_cast<std::size_t>(z) * k + z2] =
                    sig[static_cast<std::size_t>(a) * k + z2];
            }
            quotient.rewards[static_cast<std::size_t>(z) * m.n_actions + a] = m.reward(rep, a);
        }
    }
    quotient.action_labels = m.action_labels;
    quotient = normalized_valid(std::move(quotient));

    Abstraction ab;
    ab.source = m;
    ab.partition = p;
    ab.quotient = std::move(quotient);
    ab.catalog_index = catalog_index;
    return ab;
}

int map_state(const Abstraction& ab, int state) {
    if (state < 0 || state >= static_cast<int>(ab.partition.block_of.size())) {
        throw Error(ErrorCode::kInvalidArgument, "map_state: state out of range");
    }
    return ab.partition.block_of[static_cast<std::size_t>(state)];
}

}  // namespace oas
