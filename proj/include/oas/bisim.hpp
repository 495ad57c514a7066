#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oas/mdp.hpp"

namespace oas {

/// Partition of the state set into disjoint blocks with dense ids. Blocks are
/// ordered by their smallest member, members sorted ascending, so equal
/// partitions compare equal structurally.
struct Partition {
    std::vector<int> block_of;             // state -> block id
    std::vector<std::vector<int>> blocks;  // block id -> sorted member states

    int num_blocks() const { return static_cast<int>(blocks.size()); }

    /// Canonicalizes an arbitrary state->group labeling into dense ids
    /// ordered by first occurrence (i.e. by smallest member).
    static Partition from_block_of(const std::vector<int>& raw);

    bool operator==(const Partition& other) const {
        return block_of == other.block_of;
    }
};

/// Coarsest partition under which equivalent states have equal reward vectors
/// R(s, .) and equal block-aggregated transition probabilities for every
/// action and target block (within kBisimTolerance).
///
/// Splitting iterates to a fixpoint: blocks are initialized by reward vector
/// and any block containing states with differing aggregated transition
/// signatures is split. The block count strictly grows per split and is
/// bounded by n_states, so termination is guaranteed.
Partition coarsest_bisimulation(const Mdp& m);

struct BisimViolation {
    int state_a = -1;
    int state_b = -1;
    int action = -1;
    std::string detail;
};

/// Returns the first violating (state pair, action) if `p` is not a
/// bisimulation partition of `m`; std::nullopt if it is one.
std::optional<BisimViolation> check_bisimulation(const Mdp& m, const Partition& p);

/// Quotient MDP of a context under a bisimulation partition, together with
/// the state -> abstract-state attention map.
struct Abstraction {
    Mdp source;
    Partition partition;
    Mdp quotient;           // abstract states are block ids
    int catalog_index = 0;

    int num_abstract_states() const { return partition.num_blocks(); }
};

/// Builds the quotient: P(z'|z,a) aggregated from the lowest-index
/// representative of z, R(z,a) copied from the same representative. Verifies
/// `p` first and throws Error(kValidation) naming the violating pair/action
/// if it is not a bisimulation of `m`.
Abstraction build_abstraction(const Mdp& m, const Partition& p, int catalog_index);

/// Abstract state (block id) of `state` under the abstraction.
int map_state(const Abstraction& ab, int state);

}  // namespace oas
