// SPDX-License-Identifier: MIT

#include "interp.hpp"

#include <algorithm>
#include <cmath>

namespace osgp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Shared scalar kernel. args must hold exactly the op's arity.
double apply_op(Op op, const double* a, int arity) {
    for (int i = 0; i < arity; ++i)
        if (!std::isfinite(a[i])) return kNaN;
    switch (op) {
    case Op::Add: return a[0] + a[1];
    case Op::Sub: return a[0] - a[1];
    case Op::Mul: return a[0] * a[1];
    case Op::Div: return a[1] == 0.0 ? 1.0 : a[0] / a[1];
    case Op::Log: return a[0] == 0.0 ? 0.0 : std::log(std::fabs(a[0]));
    case Op::Exp: return std::exp(a[0]);
    case Op::Signum: return a[0] > 0.0 ? 1.0 : (a[0] < 0.0 ? -1.0 : 0.0);
    case Op::Sin: return std::sin(a[0]);
    case Op::Cos: return std::cos(a[0]);
    case Op::Tan: return std::tan(a[0]);
    case Op::IfThenElse: return a[0] > 0.0 ? a[1] : a[2];
    case Op::LessThan: return a[0] < a[1] ? 1.0 : 0.0;
    case Op::GreaterThan: return a[0] > a[1] ? 1.0 : 0.0;
    case Op::Equal: return a[0] == a[1] ? 1.0 : 0.0;
    case Op::Not: return a[0] <= 0.0 ? 1.0 : 0.0;
    case Op::And: return (a[0] > 0.0 && a[1] > 0.0) ? 1.0 : 0.0;
    case Op::Or: return (a[0] > 0.0 || a[1] > 0.0) ? 1.0 : 0.0;
    case Op::Xor: return ((a[0] > 0.0) != (a[1] > 0.0)) ? 1.0 : 0.0;
    case Op::Variable:
    case Op::Constant: break;
    }
    throw ValidationError("apply_op expects a function op");
}

} // namespace

double apply_primitive(const Symbol& sym, const std::vector<double>& args) {
    if (args.size() != static_cast<size_t>(sym.arity))
        throw ValidationError("argument count does not match arity of " + sym.name());
    switch (sym.kind()) {
    case SymbolKind::Constant:
        return sym.value;
    case SymbolKind::Variable:
        throw ValidationError("variable symbols are evaluated against a dataset row");
    case SymbolKind::Function:
        return apply_op(sym.op, args.data(), static_cast<int>(sym.arity));
    }
    throw ValidationError("unknown symbol kind");
}

// Rows per evaluation tile. Small enough to keep the hot frames in cache for
// deep trees, large enough to amortize the per-node dispatch.
constexpr size_t kTileRows = 25;

// dst is either the same buffer as b (the result reuses the deeper argument's
// slot) or fully disjoint from it, never partially overlapping, and a is
// always a distinct buffer. Each branch keeps the restrict qualifiers exact.
template <class F>
void run_binary(F f, const double* a, const double* b, double* dst, size_t len) {
    if (b == dst) {
        const double* __restrict ap = a;
        double* __restrict dp = dst;
        for (size_t r = 0; r < len; ++r) {
            const double x = ap[r], y = dp[r];
            dp[r] = (std::isfinite(x) && std::isfinite(y)) ? f(x, y) : kNaN;
        }
    } else {
        const double* __restrict ap = a;
        const double* __restrict bp = b;
        double* __restrict dp = dst;
        for (size_t r = 0; r < len; ++r) {
            const double x = ap[r], y = bp[r];
            dp[r] = (std::isfinite(x) && std::isfinite(y)) ? f(x, y) : kNaN;
        }
    }
}

Evaluator::Evaluator(const Dataset& ds) : ds_(ds), targets_(ds.target_values()) {
    columns_.resize(ds.cols());
    for (size_t c = 0; c < ds.cols(); ++c) {
        columns_[c].resize(ds.rows());
        for (size_t r = 0; r < ds.rows(); ++r) columns_[c][r] = ds.value(r, c);
    }
}

// Evaluates the tree over rows [row0, row0 + len), len <= kTileRows, and
// returns the root frame. Scanning the prefix vector backwards visits
// children before parents with the first argument ending up on top of the
// stack.
const double* Evaluator::eval_tile(const std::vector<Node>& nodes, size_t row0, size_t len) {
    top_ = 0;

    auto grow_to = [&](size_t slot) {
        if (slot >= stack_.size()) {
            stack_.resize(slot + 1, std::vector<double>(kTileRows));
            srcs_.resize(slot + 1, nullptr);
        }
    };

    for (size_t i = nodes.size(); i-- > 0;) {
        const Symbol& sym = nodes[i].sym;
        switch (sym.kind()) {
        case SymbolKind::Variable: {
            const size_t col = static_cast<size_t>(sym.column);
            if (col >= columns_.size())
                throw ValidationError("unknown variable " + sym.name() + ": dataset has " +
                                      std::to_string(ds_.cols()) + " columns");
            grow_to(top_);
            srcs_[top_++] = columns_[col].data() + row0;
            break;
        }
        case SymbolKind::Constant: {
            grow_to(top_);
            std::fill_n(stack_[top_].data(), len, sym.value);
            srcs_[top_] = stack_[top_].data();
            ++top_;
            break;
        }
        case SymbolKind::Function: {
            const size_t dst_slot = top_ - static_cast<size_t>(sym.arity);
            double* dst = stack_[dst_slot].data();
            if (sym.arity == 2) {
                const double* a = srcs_[top_ - 1];
                const double* b = srcs_[top_ - 2];
                switch (sym.op) {
                case Op::Add:
                    run_binary([](double x, double y) { return x + y; }, a, b, dst, len);
                    break;
                case Op::Sub:
                    run_binary([](double x, double y) { return x - y; }, a, b, dst, len);
                    break;
                case Op::Mul:
                    run_binary([](double x, double y) { return x * y; }, a, b, dst, len);
                    break;
                case Op::Div:
                    run_binary([](double x, double y) { return y == 0.0 ? 1.0 : x / y; }, a, b,
                               dst, len);
                    break;
                default: {
                    double argv[2];
                    for (size_t r = 0; r < len; ++r) {
                        argv[0] = a[r];
                        argv[1] = b[r];
                        dst[r] = apply_op(sym.op, argv, 2);
                    }
                }
                }
            } else {
                double argv[3];
                const int k = static_cast<int>(sym.arity);
                for (size_t r = 0; r < len; ++r) {
                    for (int j = 0; j < k; ++j)
                        argv[j] = srcs_[top_ - 1 - static_cast<size_t>(j)][r];
                    dst[r] = apply_op(sym.op, argv, k);
                }
            }
            srcs_[dst_slot] = dst;
            top_ = dst_slot + 1;
            break;
        }
        }
    }
    return srcs_[0];
}

const std::vector<double>& Evaluator::eval(const ExpressionTree& tree) {
    const size_t n = ds_.rows();
    const auto& nodes = tree.nodes();
    if (nodes.empty()) throw ValidationError("cannot evaluate an empty tree");
    result_.resize(n);
    for (size_t row0 = 0; row0 < n; row0 += kTileRows) {
        const size_t len = std::min(kTileRows, n - row0);
        const double* out = eval_tile(nodes, row0, len);
        std::copy(out, out + len, result_.begin() + static_cast<ptrdiff_t>(row0));
    }
    return result_;
}

Quality Evaluator::quality(const ExpressionTree& tree) {
    return quality_below(tree, Quality::worst_value());
}

Quality Evaluator::quality_below(const ExpressionTree& tree, double cutoff) {
    const size_t n = ds_.rows();
    const auto& nodes = tree.nodes();
    if (nodes.empty()) throw ValidationError("cannot evaluate an empty tree");
    const double rows = static_cast<double>(n);
    // sum >= limit proves mse >= cutoff; an infinite cutoff never triggers it.
    const double limit = cutoff * rows;
    double sum = 0.0;
    for (size_t row0 = 0; row0 < n; row0 += kTileRows) {
        const size_t len = std::min(kTileRows, n - row0);
        const double* out = eval_tile(nodes, row0, len);
        for (size_t r = 0; r < len; ++r) {
            const double p = out[r];
            if (!std::isfinite(p)) return Quality::worst();
            const double d = p - targets_[row0 + r];
            sum += d * d;
        }
        if (!(sum < limit)) return Quality{sum / rows};
    }
    const double m = sum / rows;
    if (!std::isfinite(m)) return Quality::worst();
    return Quality{m};
}

std::vector<double> eval_tree(const ExpressionTree& tree, const Dataset& ds) {
    Evaluator ev(ds);
    return ev.eval(tree);
}

Quality mse(const std::vector<double>& predictions, const std::vector<double>& targets) {
    if (predictions.size() != targets.size())
        throw ValidationError("prediction and target lengths differ");
    if (predictions.empty()) throw ValidationError("mse over empty vectors");
    double sum = 0.0;
    for (size_t i = 0; i < predictions.size(); ++i) {
        if (!std::isfinite(predictions[i])) return Quality::worst();
        const double d = predictions[i] - targets[i];
        sum += d * d;
    }
    const double m = sum / static_cast<double>(predictions.size());
    if (!std::isfinite(m)) return Quality::worst();
    return Quality{m};
}

} // namespace osgp
