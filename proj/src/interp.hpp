// SPDX-License-Identifier: MIT

#ifndef OSGP_INTERP_HPP
#define OSGP_INTERP_HPP

#include <limits>
#include <vector>

#include "dataset.hpp"
#include "tree.hpp"

namespace osgp {

// Minimization fitness. Non-finite evaluations map to the worst value, which
// orders after every finite quality.
struct Quality {
    double value = worst_value();

    static constexpr double worst_value() { return std::numeric_limits<double>::infinity(); }
    static Quality worst() { return {}; }

    bool is_worst() const { return !(value < worst_value()); }
    bool better_than(const Quality& other) const { return value < other.value; }

    bool operator==(const Quality&) const = default;
};

// Scalar semantics of one primitive application. Any non-finite argument
// yields NaN so that overflow anywhere in a tree reaches the fitness sentinel
// instead of being absorbed by a protected or relational primitive.
double apply_primitive(const Symbol& sym, const std::vector<double>& args);

// Row-wise evaluation over every dataset row. Variable leaves read their raw
// column; the result length equals ds.rows().
std::vector<double> eval_tree(const ExpressionTree& tree, const Dataset& ds);

Quality mse(const std::vector<double>& predictions, const std::vector<double>& targets);

// Reusable evaluation context. Walks the prefix vector backwards so that each
// function node finds its argument rows on top of an explicit stack; rows are
// processed in fixed-size tiles and buffers persist across calls to avoid
// reallocation in the engine's hot loop.
class Evaluator {
public:
    explicit Evaluator(const Dataset& ds);

    const std::vector<double>& eval(const ExpressionTree& tree);
    Quality quality(const ExpressionTree& tree);

    // Exact quality when it is below the cutoff. Once the accumulated squared
    // error already proves mse >= cutoff the remaining rows are skipped and
    // the partial mean (>= cutoff, <= the true mse) is returned; the squared
    // errors accumulate in row order, so a returned value below the cutoff is
    // bit-identical to quality().
    Quality quality_below(const ExpressionTree& tree, double cutoff);

    const Dataset& dataset() const { return ds_; }

private:
    const double* eval_tile(const std::vector<Node>& nodes, size_t row0, size_t len);

    const Dataset& ds_;
    std::vector<double> targets_;
    // Column-major copy of the dataset so variable tiles load contiguously.
    std::vector<std::vector<double>> columns_;
    std::vector<double> result_;
    // Owned tile buffer per stack slot plus the live value pointer, which is
    // either that buffer or a borrowed dataset column (variable leaves are
    // never copied).
    std::vector<std::vector<double>> stack_;
    std::vector<const double*> srcs_;
    size_t top_ = 0;
};

} // namespace osgp

#endif
