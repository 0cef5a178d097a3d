// SPDX-License-Identifier: MIT

#ifndef OSGP_TEST_HELPERS_HPP
#define OSGP_TEST_HELPERS_HPP

#include <utility>
#include <vector>

#include "genops.hpp"
#include "rng.hpp"
#include "symbols.hpp"
#include "tree.hpp"

namespace osgp::test {

inline ExpressionTree X(int column) {
    return ExpressionTree::leaf(Symbol::variable(column));
}

inline ExpressionTree C(double value) {
    return ExpressionTree::leaf(Symbol::constant(value));
}

inline ExpressionTree F(Op op, std::vector<ExpressionTree> children) {
    return ExpressionTree::function(Symbol::function(op), std::move(children));
}

inline ExpressionTree random_tree(Rng& rng, const PrimitiveSet& prims, size_t lo = 3,
                                  size_t hi = 20) {
    const size_t target =
        static_cast<size_t>(rng.integer(static_cast<int64_t>(lo), static_cast<int64_t>(hi)));
    return ptc2(rng, target, prims);
}

} // namespace osgp::test

#endif
