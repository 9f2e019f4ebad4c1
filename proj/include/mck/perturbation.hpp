#pragma once

#include <vector>

#include "mck/morse_graph.hpp"
#include "mck/permutohedron.hpp"

namespace mck {

// Replaces level `level` (0-based) by m = blocks.size() consecutive levels. blocks are
// disjoint sets of 1-based saddle labels covering that level. Sub-level k keeps the
// saddles of block k as vertices, up-resolves those of earlier blocks and down-resolves
// those of later ones. Throws ArgumentError for an invalid block family and
// InvariantViolation if the result fails validation.
MorseGraph split_level(const MorseGraph& g, int level, const std::vector<std::vector<int>>& blocks);

// The perturbed class on the face tau_{J'} of g's permutohedron face. Iterates two-way
// splits: the first block of the current partition that J' splits is cut into its first
// J'-sub-block and the rest.
MorseGraph delta(const MorseGraph& g, const OrderedPartition& target);

// Same, along an explicit chain J(g) = chain[0] > chain[1] > ... where each step refines
// exactly one block into two. The last element need not be a total order.
MorseGraph delta_along(const MorseGraph& g, const std::vector<OrderedPartition>& chain);

// All maximal chains of two-way splits from `from` down to `to` (inclusive endpoints).
std::vector<std::vector<OrderedPartition>> maximal_chains(const OrderedPartition& from, const OrderedPartition& to);

// Collapses all levels into one by zipping cylinders shut, top levels first, so that
// delta(merge_all_levels(g), J(g)) reproduces g.
MorseGraph merge_all_levels(const MorseGraph& g);

}  // namespace mck
