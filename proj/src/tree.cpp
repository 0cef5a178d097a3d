// SPDX-License-Identifier: MIT

#include "tree.hpp"

#include <utility>

namespace osgp {

ExpressionTree::ExpressionTree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
    validate();
}

ExpressionTree ExpressionTree::leaf(Symbol terminal) {
    if (terminal.is_function()) throw ValidationError("leaf symbol must be a terminal");
    ExpressionTree t;
    t.nodes_.push_back(Node{terminal, 1});
    return t;
}

ExpressionTree ExpressionTree::function(Symbol fn, std::vector<ExpressionTree> children) {
    if (!fn.is_function()) throw ValidationError("function symbol required");
    if (children.size() != static_cast<size_t>(fn.arity))
        throw ValidationError("child count does not match function arity");
    ExpressionTree t;
    uint32_t total = 1;
    for (const auto& c : children) total += static_cast<uint32_t>(c.size());
    t.nodes_.reserve(total);
    t.nodes_.push_back(Node{fn, total});
    for (auto& c : children)
        t.nodes_.insert(t.nodes_.end(), c.nodes_.begin(), c.nodes_.end());
    return t;
}

void ExpressionTree::check_index(size_t index) const {
    if (index >= nodes_.size()) throw InvalidCoordinate("node index out of range");
}

size_t ExpressionTree::index_of(const NodeCoord& c) const {
    if (nodes_.empty()) throw InvalidCoordinate("empty tree");
    size_t index = 0;
    for (int step : c.path) {
        const Node& n = nodes_[index];
        if (step < 0 || step >= static_cast<int>(n.sym.arity))
            throw InvalidCoordinate("child index exceeds node arity");
        size_t child = index + 1;
        for (int k = 0; k < step; ++k) child += nodes_[child].length;
        index = child;
    }
    return index;
}

NodeCoord ExpressionTree::coord_of(size_t index) const {
    check_index(index);
    NodeCoord c;
    size_t at = 0;
    while (at != index) {
        size_t child = at + 1;
        int slot = 0;
        while (child + nodes_[child].length <= index) {
            child += nodes_[child].length;
            ++slot;
        }
        c.path.push_back(slot);
        at = child;
    }
    return c;
}

size_t ExpressionTree::subtree_size_at(size_t index) const {
    check_index(index);
    return nodes_[index].length;
}

ExpressionTree ExpressionTree::subtree_at(size_t index) const {
    check_index(index);
    ExpressionTree t;
    t.nodes_.assign(nodes_.begin() + static_cast<ptrdiff_t>(index),
                    nodes_.begin() + static_cast<ptrdiff_t>(index + nodes_[index].length));
    return t;
}

ExpressionTree ExpressionTree::replace_subtree(const NodeCoord& c,
                                               const ExpressionTree& sub) const {
    return replace_subtree_at(index_of(c), sub);
}

ExpressionTree ExpressionTree::replace_subtree_at(size_t index,
                                                  const ExpressionTree& sub) const {
    check_index(index);
    if (sub.empty()) throw ValidationError("replacement subtree is empty");
    const uint32_t old_len = nodes_[index].length;
    const uint32_t new_len = static_cast<uint32_t>(sub.size());

    ExpressionTree out;
    out.nodes_.reserve(nodes_.size() - old_len + new_len);
    out.nodes_.insert(out.nodes_.end(), nodes_.begin(),
                      nodes_.begin() + static_cast<ptrdiff_t>(index));
    out.nodes_.insert(out.nodes_.end(), sub.nodes_.begin(), sub.nodes_.end());
    out.nodes_.insert(out.nodes_.end(),
                      nodes_.begin() + static_cast<ptrdiff_t>(index + old_len),
                      nodes_.end());

    // Every ancestor of the replaced node precedes it in prefix order, so the
    // indices collected on the way down are stable in the spliced vector.
    const int32_t delta = static_cast<int32_t>(new_len) - static_cast<int32_t>(old_len);
    if (delta != 0) {
        size_t at = 0;
        while (at != index) {
            out.nodes_[at].length = static_cast<uint32_t>(
                static_cast<int32_t>(out.nodes_[at].length) + delta);
            size_t child = at + 1;
            while (child + nodes_[child].length <= index) child += nodes_[child].length;
            at = child;
        }
    }
    return out;
}

void ExpressionTree::validate() const {
    if (nodes_.empty()) throw ValidationError("tree has no nodes");
    if (nodes_[0].length != nodes_.size())
        throw ValidationError("root length does not cover the tree");
    for (size_t i = 0; i < nodes_.size(); ++i) {
        const Node& n = nodes_[i];
        if (n.length < 1 || i + n.length > nodes_.size())
            throw ValidationError("node length out of bounds");
        uint32_t sum = 0;
        size_t child = i + 1;
        for (int k = 0; k < static_cast<int>(n.sym.arity); ++k) {
            if (child >= i + n.length) throw ValidationError("missing child node");
            sum += nodes_[child].length;
            child += nodes_[child].length;
        }
        if (n.length != 1 + sum)
            throw ValidationError("node length does not match children");
    }
}

std::string ExpressionTree::to_prefix_string() const {
    std::string out;
    out.reserve(nodes_.size() * 6);
    std::vector<int> open;
    bool need_space = false;
    for (const Node& n : nodes_) {
        if (need_space) out += ' ';
        need_space = true;
        if (n.sym.is_function()) {
            out += '(';
            out += n.sym.name();
            open.push_back(static_cast<int>(n.sym.arity));
        } else {
            out += n.sym.name();
            while (!open.empty() && --open.back() == 0) {
                out += ')';
                open.pop_back();
            }
        }
    }
    return out;
}

ShapeSignature shape_signature(const ExpressionTree& tree) {
    ShapeSignature sig;
    sig.reserve(tree.size());
    for (const Node& n : tree.nodes()) sig.push_back(n.sym.arity);
    return sig;
}

size_t random_node_index(const ExpressionTree& tree, Rng& rng, double internal_bias) {
    size_t internal = 0;
    for (const Node& n : tree.nodes())
        if (n.sym.is_function()) ++internal;
    if (internal == 0) return 0;

    const bool pick_internal = rng.bernoulli(internal_bias);
    const size_t leaves = tree.size() - internal;
    const size_t pool = pick_internal ? internal : leaves;
    size_t target = rng.below(pool);
    for (size_t i = 0; i < tree.size(); ++i) {
        if (tree[i].sym.is_function() != pick_internal) continue;
        if (target == 0) return i;
        --target;
    }
    throw Error("node pool exhausted");
}

NodeCoord random_node(const ExpressionTree& tree, Rng& rng, double internal_bias) {
    return tree.coord_of(random_node_index(tree, rng, internal_bias));
}

} // namespace osgp
