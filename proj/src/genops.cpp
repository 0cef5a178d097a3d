// SPDX-License-Identifier: MIT

#include "genops.hpp"

#include <algorithm>
#include <array>
#include <cassert>

namespace osgp {

namespace {

constexpr double kInternalBias = 0.9;

struct TempNode {
    Symbol sym;
    std::array<int32_t, 3> child = {-1, -1, -1};
};

struct OpenSlot {
    int32_t parent;
    int8_t slot;
};

ExpressionTree serialize(const std::vector<TempNode>& temp) {
    // Children are created after their parents, so sizes resolve in one
    // backward sweep.
    std::vector<uint32_t> sizes(temp.size(), 1);
    for (size_t i = temp.size(); i-- > 0;)
        for (int k = 0; k < static_cast<int>(temp[i].sym.arity); ++k)
            sizes[i] += sizes[static_cast<size_t>(temp[i].child[static_cast<size_t>(k)])];

    std::vector<Node> out;
    out.reserve(temp.size());
    std::vector<int32_t> stack = {0};
    while (!stack.empty()) {
        const int32_t i = stack.back();
        stack.pop_back();
        const TempNode& t = temp[static_cast<size_t>(i)];
        out.push_back(Node{t.sym, sizes[static_cast<size_t>(i)]});
        for (int k = static_cast<int>(t.sym.arity); k-- > 0;) stack.push_back(t.child[static_cast<size_t>(k)]);
    }
    return ExpressionTree(std::move(out));
}

} // namespace

ExpressionTree ptc2(Rng& rng, size_t target_size, const PrimitiveSet& prims) {
    if (target_size <= 1) return ExpressionTree::leaf(prims.sample_terminal(rng));

    std::vector<TempNode> temp;
    auto place = [&temp](Symbol sym) {
        TempNode t;
        t.sym = sym;
        temp.push_back(t);
        return static_cast<int32_t>(temp.size() - 1);
    };

    place(prims.sample_function(rng));
    std::vector<OpenSlot> slots;
    for (int k = 0; k < static_cast<int>(temp[0].sym.arity); ++k)
        slots.push_back(OpenSlot{0, static_cast<int8_t>(k)});
    size_t placed = 1;

    while (placed + slots.size() < target_size) {
        const size_t pick = rng.below(slots.size());
        std::swap(slots[pick], slots.back());
        const OpenSlot s = slots.back();
        slots.pop_back();

        const Symbol f = prims.sample_function(rng);
        const int32_t idx = place(f);
        temp[static_cast<size_t>(s.parent)].child[static_cast<size_t>(s.slot)] = idx;
        ++placed;
        for (int k = 0; k < static_cast<int>(f.arity); ++k)
            slots.push_back(OpenSlot{idx, static_cast<int8_t>(k)});
    }

    for (const OpenSlot& s : slots) {
        const int32_t idx = place(prims.sample_terminal(rng));
        temp[static_cast<size_t>(s.parent)].child[static_cast<size_t>(s.slot)] = idx;
    }
    return serialize(temp);
}

MutationResult single_point_mutation(const ExpressionTree& tree, Rng& rng,
                                     const PrimitiveSet& prims, MutationClass force) {
    // A function node is usable only if the set holds another function of
    // its arity; the sole ternary in the extended set has none, for example.
    std::vector<size_t> function_nodes;
    std::vector<size_t> terminal_nodes;
    for (size_t i = 0; i < tree.size(); ++i) {
        const Symbol& s = tree[i].sym;
        if (s.is_function()) {
            if (!prims.function_alternatives(s.op, static_cast<int>(s.arity)).empty())
                function_nodes.push_back(i);
        } else {
            terminal_nodes.push_back(i);
        }
    }
    // Resampling a lone variable with no constant generator cannot alter the
    // tree, so that configuration offers no terminal replacement.
    const bool terminal_usable =
        prims.constants().present() || prims.variable_count() >= 2;

    bool function_first;
    switch (force) {
    case MutationClass::Function: function_first = true; break;
    case MutationClass::Terminal: function_first = false; break;
    case MutationClass::Auto: function_first = rng.bernoulli(0.5); break;
    default: function_first = true; break;
    }

    for (int attempt = 0; attempt < 2; ++attempt) {
        const bool use_function = attempt == 0 ? function_first : !function_first;
        if (use_function) {
            if (function_nodes.empty()) continue;
            const size_t at = function_nodes[rng.below(function_nodes.size())];
            const auto alts =
                prims.function_alternatives(tree[at].sym.op, static_cast<int>(tree[at].sym.arity));
            const Symbol repl = alts[rng.below(alts.size())];
            std::vector<Node> nodes = tree.nodes();
            nodes[at].sym = repl;
            return MutationResult{ExpressionTree(std::move(nodes)), true};
        }
        if (!terminal_usable) continue;
        const size_t at = terminal_nodes[rng.below(terminal_nodes.size())];
        const Symbol repl = prims.sample_terminal(rng);
        std::vector<Node> nodes = tree.nodes();
        nodes[at].sym = repl;
        return MutationResult{ExpressionTree(std::move(nodes)), true};
    }
    return MutationResult{tree, false};
}

CommonRegion common_region(const ExpressionTree& a, const ExpressionTree& b) {
    CommonRegion region;
    struct Frame {
        size_t ai, bi;
        NodeCoord path;
    };
    std::vector<Frame> stack;
    stack.push_back(Frame{0, 0, NodeCoord{}});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        const int ka = static_cast<int>(a[f.ai].sym.arity);
        const int kb = static_cast<int>(b[f.bi].sym.arity);
        const bool equal_arity = ka == kb;
        region.pairs.push_back(
            RegionPair{f.path, f.path, f.ai, f.bi, equal_arity && ka >= 1});
        if (!equal_arity || ka == 0) continue;
        // Push right-to-left so pairs come out in preorder.
        std::array<size_t, 3> ac{}, bc{};
        size_t ai = f.ai + 1, bi = f.bi + 1;
        for (int k = 0; k < ka; ++k) {
            ac[static_cast<size_t>(k)] = ai;
            bc[static_cast<size_t>(k)] = bi;
            ai += a[ai].length;
            bi += b[bi].length;
        }
        for (int k = ka; k-- > 0;) {
            Frame child;
            child.ai = ac[static_cast<size_t>(k)];
            child.bi = bc[static_cast<size_t>(k)];
            child.path = f.path;
            child.path.path.push_back(k);
            stack.push_back(std::move(child));
        }
    }
    return region;
}

std::string_view to_string(CrossoverKind kind) {
    switch (kind) {
    case CrossoverKind::Standard: return "standard";
    case CrossoverKind::OnePoint: return "onepoint";
    case CrossoverKind::Uniform: return "uniform";
    case CrossoverKind::SizeFair: return "sizefair";
    case CrossoverKind::Homologous: return "homologous";
    case CrossoverKind::Mixed: return "mixed";
    }
    return "?";
}

std::optional<CrossoverKind> crossover_kind_from(std::string_view name) {
    for (CrossoverKind k :
         {CrossoverKind::Standard, CrossoverKind::OnePoint, CrossoverKind::Uniform,
          CrossoverKind::SizeFair, CrossoverKind::Homologous, CrossoverKind::Mixed})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

const CrossoverKind kConcreteCrossovers[5] = {
    CrossoverKind::Standard, CrossoverKind::OnePoint, CrossoverKind::Uniform,
    CrossoverKind::SizeFair, CrossoverKind::Homologous};

ExpressionTree crossover_standard(const ExpressionTree& p1, const ExpressionTree& p2,
                                  Rng& rng) {
    const size_t c1 = random_node_index(p1, rng, kInternalBias);
    const size_t c2 = random_node_index(p2, rng, kInternalBias);
    return p1.replace_subtree_at(c1, p2.subtree_at(c2));
}

ExpressionTree crossover_onepoint_at(const ExpressionTree& p1, const ExpressionTree& p2,
                                     size_t pair_index) {
    const CommonRegion region = common_region(p1, p2);
    if (pair_index >= region.pairs.size())
        throw ValidationError("region pair index out of range");
    const RegionPair& pair = region.pairs[pair_index];
    return p1.replace_subtree_at(pair.a_index, p2.subtree_at(pair.b_index));
}

ExpressionTree crossover_onepoint(const ExpressionTree& p1, const ExpressionTree& p2,
                                  Rng& rng) {
    const CommonRegion region = common_region(p1, p2);
    const RegionPair& pair = region.pairs[rng.below(region.pairs.size())];
    return p1.replace_subtree_at(pair.a_index, p2.subtree_at(pair.b_index));
}

ExpressionTree crossover_uniform_decided(const ExpressionTree& p1,
                                         const ExpressionTree& p2,
                                         const std::vector<bool>& take) {
    const CommonRegion region = common_region(p1, p2);
    if (take.size() != region.pairs.size())
        throw ValidationError("decision count does not match region size");

    // Symbol swaps first (indices still line up with p1), then boundary
    // splices from the highest index down so earlier positions stay valid.
    std::vector<Node> nodes = p1.nodes();
    std::vector<const RegionPair*> splices;
    for (size_t i = 0; i < region.pairs.size(); ++i) {
        if (!take[i]) continue;
        const RegionPair& pair = region.pairs[i];
        if (pair.interior)
            nodes[pair.a_index].sym = p2[pair.b_index].sym;
        else
            splices.push_back(&pair);
    }
    ExpressionTree child(std::move(nodes));
    std::sort(splices.begin(), splices.end(),
              [](const RegionPair* x, const RegionPair* y) { return x->a_index > y->a_index; });
    for (const RegionPair* pair : splices)
        child = child.replace_subtree_at(pair->a_index, p2.subtree_at(pair->b_index));
    return child;
}

ExpressionTree crossover_uniform(const ExpressionTree& p1, const ExpressionTree& p2,
                                 Rng& rng) {
    const CommonRegion region = common_region(p1, p2);
    std::vector<bool> take(region.pairs.size());
    for (size_t i = 0; i < take.size(); ++i) take[i] = rng.bernoulli(0.5);
    return crossover_uniform_decided(p1, p2, take);
}

namespace {

// Candidate positions in the donor with size <= 2l+1, split by size relative
// to l. Group probabilities make the expected size change zero; an empty
// decrease group folds its mass into the increase group. When the donor has
// no size-increasing candidate the swap falls back to an exact-size match,
// and kKeepSubtree means no such match exists so the removed subtree stays.
constexpr size_t kKeepSubtree = SIZE_MAX;

size_t size_fair_candidate(const ExpressionTree& p1, size_t c1, const ExpressionTree& p2,
                           Rng& rng, bool homologous) {
    const size_t l = p1.subtree_size_at(c1);
    const size_t cap = 2 * l + 1;
    std::vector<size_t> below, equal, above;
    double decrease_sum = 0, increase_sum = 0;
    for (size_t i = 0; i < p2.size(); ++i) {
        const size_t sz = p2[i].length;
        if (sz > cap) continue;
        if (sz < l) {
            below.push_back(i);
            decrease_sum += static_cast<double>(l - sz);
        } else if (sz == l) {
            equal.push_back(i);
        } else {
            above.push_back(i);
            increase_sum += static_cast<double>(sz - l);
        }
    }
    const size_t total = below.size() + equal.size() + above.size();
    assert(total > 0);

    const std::vector<size_t>* group;
    if (above.empty()) {
        if (equal.empty()) return kKeepSubtree;
        group = &equal;
    } else {
        const double p_equal = static_cast<double>(equal.size()) / static_cast<double>(total);
        const double rest = 1.0 - p_equal;
        double p_below = 0;
        if (!below.empty()) {
            const double mean_dec = decrease_sum / static_cast<double>(below.size());
            const double mean_inc = increase_sum / static_cast<double>(above.size());
            p_below = rest * mean_inc / (mean_inc + mean_dec);
        }
        const double u = rng.real();
        if (!equal.empty() && u < p_equal)
            group = &equal;
        else if (!below.empty() && u < p_equal + p_below)
            group = &below;
        else
            group = &above;
    }

    if (!homologous) return (*group)[rng.below(group->size())];

    const NodeCoord at = p1.coord_of(c1);
    std::vector<size_t> closest;
    size_t best = SIZE_MAX;
    for (size_t i : *group) {
        const NodeCoord cand = p2.coord_of(i);
        size_t shared = 0;
        while (shared < at.path.size() && shared < cand.path.size() &&
               at.path[shared] == cand.path[shared])
            ++shared;
        const size_t dist = (at.path.size() - shared) + (cand.path.size() - shared);
        if (dist < best) {
            best = dist;
            closest.clear();
        }
        if (dist == best) closest.push_back(i);
    }
    if (closest.size() == 1) return closest[0];
    return closest[rng.below(closest.size())];
}

ExpressionTree size_fair_family(const ExpressionTree& p1, const ExpressionTree& p2,
                                Rng& rng, bool homologous) {
    const size_t c1 = random_node_index(p1, rng, kInternalBias);
    const size_t c2 = size_fair_candidate(p1, c1, p2, rng, homologous);
    if (c2 == kKeepSubtree) return p1;
    return p1.replace_subtree_at(c1, p2.subtree_at(c2));
}

} // namespace

ExpressionTree crossover_sizefair(const ExpressionTree& p1, const ExpressionTree& p2,
                                  Rng& rng) {
    return size_fair_family(p1, p2, rng, false);
}

ExpressionTree crossover_homologous(const ExpressionTree& p1, const ExpressionTree& p2,
                                    Rng& rng) {
    return size_fair_family(p1, p2, rng, true);
}

CrossoverOutcome crossover(CrossoverKind kind, const ExpressionTree& p1,
                           const ExpressionTree& p2, Rng& rng) {
    if (kind == CrossoverKind::Mixed) kind = kConcreteCrossovers[rng.below(5)];
    switch (kind) {
    case CrossoverKind::Standard: return {crossover_standard(p1, p2, rng), kind};
    case CrossoverKind::OnePoint: return {crossover_onepoint(p1, p2, rng), kind};
    case CrossoverKind::Uniform: return {crossover_uniform(p1, p2, rng), kind};
    case CrossoverKind::SizeFair: return {crossover_sizefair(p1, p2, rng), kind};
    case CrossoverKind::Homologous: return {crossover_homologous(p1, p2, rng), kind};
    case CrossoverKind::Mixed: break;
    }
    throw ValidationError("unhandled crossover kind");
}

} // namespace osgp
