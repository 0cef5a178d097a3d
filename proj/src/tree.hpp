// SPDX-License-Identifier: MIT

#ifndef OSGP_TREE_HPP
#define OSGP_TREE_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"
#include "symbols.hpp"

namespace osgp {

// Path of child indices from the root; empty path = root.
struct NodeCoord {
    std::vector<int> path;

    bool operator==(const NodeCoord&) const = default;
};

struct Node {
    Symbol sym;
    // Node count of the subtree rooted here, including this node.
    uint32_t length = 1;

    bool operator==(const Node&) const = default;
};

// Expression tree stored as a flat vector in prefix (preorder) order. Each
// node records its subtree length, so subtree extraction and replacement are
// contiguous-range operations. Genetic operators copy; they never mutate a
// parent in place.
class ExpressionTree {
public:
    ExpressionTree() = default;
    explicit ExpressionTree(std::vector<Node> nodes);

    static ExpressionTree leaf(Symbol terminal);
    static ExpressionTree function(Symbol fn, std::vector<ExpressionTree> children);

    const std::vector<Node>& nodes() const { return nodes_; }
    size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    const Node& operator[](size_t i) const { return nodes_[i]; }

    // Prefix index of the node addressed by the coordinate.
    size_t index_of(const NodeCoord& c) const;
    NodeCoord coord_of(size_t index) const;

    const Node& node_at(const NodeCoord& c) const { return nodes_[index_of(c)]; }

    size_t subtree_size(const NodeCoord& c) const { return nodes_[index_of(c)].length; }
    size_t subtree_size_at(size_t index) const;

    // Copy of the subtree rooted at the given position, as its own tree.
    ExpressionTree subtree(const NodeCoord& c) const { return subtree_at(index_of(c)); }
    ExpressionTree subtree_at(size_t index) const;

    // New tree with the subtree at the given position replaced; this tree is
    // left untouched.
    ExpressionTree replace_subtree(const NodeCoord& c, const ExpressionTree& sub) const;
    ExpressionTree replace_subtree_at(size_t index, const ExpressionTree& sub) const;

    // Throws if lengths or arities are inconsistent anywhere.
    void validate() const;

    std::string to_prefix_string() const;

    bool operator==(const ExpressionTree&) const = default;

private:
    void check_index(size_t index) const;

    std::vector<Node> nodes_;
};

// Arity sequence in prefix order; equal iff the trees have identical shape.
using ShapeSignature = std::vector<uint8_t>;

ShapeSignature shape_signature(const ExpressionTree& tree);

// Biased point choice: with probability internal_bias pick uniformly among
// internal nodes, otherwise uniformly among leaves. A tree without internal
// nodes yields the root without consuming randomness.
size_t random_node_index(const ExpressionTree& tree, Rng& rng, double internal_bias);
NodeCoord random_node(const ExpressionTree& tree, Rng& rng, double internal_bias);

} // namespace osgp

#endif
