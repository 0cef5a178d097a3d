// SPDX-License-Identifier: MIT

#ifndef OSGP_GENOPS_HPP
#define OSGP_GENOPS_HPP

#include <optional>
#include <string_view>
#include <vector>

#include "tree.hpp"

namespace osgp {

// Probabilistic tree creation: grows toward target_size by expanding random
// open slots with functions, then closes every remaining slot with a
// terminal. Output size lands in [target_size, target_size + maxArity - 1];
// a target below 1 is clamped to 1.
ExpressionTree ptc2(Rng& rng, size_t target_size, const PrimitiveSet& prims);

enum class MutationClass { Auto, Function, Terminal };

struct MutationResult {
    ExpressionTree tree;
    // False when the primitive set offers no replacement in either class;
    // the tree is returned unchanged in that case.
    bool changed = false;
};

// Replaces one symbol in place, preserving tree shape. Class picked by fair
// coin (or forced): a function node gets a different function of the same
// arity, a terminal node gets a freshly sampled terminal. An empty or
// unusable class falls back to the other.
MutationResult single_point_mutation(const ExpressionTree& tree, Rng& rng,
                                     const PrimitiveSet& prims,
                                     MutationClass force = MutationClass::Auto);

// Position-paired nodes of two trees, reachable from the roots while arities
// match at every step. Interior pairs have equal arity >= 1; their child
// pairs are also in the region. Pairs are listed in depth-first preorder.
struct RegionPair {
    NodeCoord a;
    NodeCoord b;
    size_t a_index = 0;
    size_t b_index = 0;
    bool interior = false;
};

struct CommonRegion {
    std::vector<RegionPair> pairs;
};

CommonRegion common_region(const ExpressionTree& a, const ExpressionTree& b);

enum class CrossoverKind { Standard, OnePoint, Uniform, SizeFair, Homologous, Mixed };

std::string_view to_string(CrossoverKind kind);
std::optional<CrossoverKind> crossover_kind_from(std::string_view name);
// The five concrete kinds Mixed dispatches over, in dispatch order.
extern const CrossoverKind kConcreteCrossovers[5];

// Subtree swap with the classic 90/10 internal-node bias on both points.
ExpressionTree crossover_standard(const ExpressionTree& p1, const ExpressionTree& p2,
                                  Rng& rng);

// Swap the full subtrees at one uniformly chosen common-region pair.
ExpressionTree crossover_onepoint(const ExpressionTree& p1, const ExpressionTree& p2,
                                  Rng& rng);
// Same exchange at an explicit region pair index, for exhaustive checks.
ExpressionTree crossover_onepoint_at(const ExpressionTree& p1, const ExpressionTree& p2,
                                     size_t pair_index);

// Independent fair coin per common-region pair: take the other parent's
// symbol at interior pairs, its whole subtree at boundary pairs.
ExpressionTree crossover_uniform(const ExpressionTree& p1, const ExpressionTree& p2,
                                 Rng& rng);
// Deterministic variant; take[i] decides the i-th region pair (preorder).
ExpressionTree crossover_uniform_decided(const ExpressionTree& p1,
                                         const ExpressionTree& p2,
                                         const std::vector<bool>& take);

// Replacement subtree drawn from the donor with size capped at 2l+1 (l =
// size of the removed subtree) and group probabilities arranged so the
// expected size change is zero.
ExpressionTree crossover_sizefair(const ExpressionTree& p1, const ExpressionTree& p2,
                                  Rng& rng);

// Size-fair selection of the group, then the positionally closest candidate
// (path-prefix distance to the removed subtree's coordinate) instead of a
// uniform draw; distance ties are broken uniformly.
ExpressionTree crossover_homologous(const ExpressionTree& p1, const ExpressionTree& p2,
                                    Rng& rng);

struct CrossoverOutcome {
    ExpressionTree child;
    // Concrete operator that produced the child; for Mixed this records the
    // dispatched kind.
    CrossoverKind used = CrossoverKind::Standard;
};

CrossoverOutcome crossover(CrossoverKind kind, const ExpressionTree& p1,
                           const ExpressionTree& p2, Rng& rng);

} // namespace osgp

#endif
