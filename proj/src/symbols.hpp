// SPDX-License-Identifier: MIT

#ifndef OSGP_SYMBOLS_HPP
#define OSGP_SYMBOLS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace osgp {

enum class Op : uint8_t {
    Add,
    Sub,
    Mul,
    Div, // protected
    Log,
    Exp,
    Signum,
    Sin,
    Cos,
    Tan,
    IfThenElse,
    LessThan,
    GreaterThan,
    Equal,
    Not,
    And,
    Or,
    Xor,
    Variable,
    Constant,
};

enum class SymbolKind : uint8_t { Function, Variable, Constant };

int function_arity(Op op);
std::string_view function_name(Op op);

// One alphabet entry. Variable symbols carry the dataset column they read,
// constant symbols carry their value (constants are materialized per leaf at
// creation time so mutation can resample them).
struct Symbol {
    Op op = Op::Constant;
    uint8_t arity = 0;
    int16_t column = -1;
    double value = 0.0;

    static Symbol function(Op op);
    static Symbol variable(int column);
    static Symbol constant(double value);

    SymbolKind kind() const {
        if (op == Op::Variable) return SymbolKind::Variable;
        if (op == Op::Constant) return SymbolKind::Constant;
        return SymbolKind::Function;
    }
    bool is_function() const { return kind() == SymbolKind::Function; }

    std::string name() const;

    bool operator==(const Symbol&) const = default;
};

// Range the constant generator draws from; integer ranges are inclusive,
// real ranges half-open.
struct ConstantSampler {
    enum class Kind : uint8_t { None, IntRange, RealRange };
    Kind kind = Kind::None;
    double lo = 0.0;
    double hi = 0.0;

    static ConstantSampler none() { return {}; }
    static ConstantSampler int_range(int64_t lo, int64_t hi);
    static ConstantSampler real_range(double lo, double hi);

    bool present() const { return kind != Kind::None; }
    double sample(Rng& rng) const;

    bool operator==(const ConstantSampler&) const = default;
};

// Function and terminal alphabet for one problem.
class PrimitiveSet {
public:
    PrimitiveSet(std::vector<Op> functions, int variable_count, ConstantSampler constants);

    // ADD, SUB, MUL, DIV over the given variables.
    static PrimitiveSet arithmetic(int variable_count,
                                   ConstantSampler constants = ConstantSampler::none());
    // The full mixed-arity alphabet (arithmetic, transcendental, relational,
    // boolean, conditional).
    static PrimitiveSet extended(int variable_count,
                                 ConstantSampler constants = ConstantSampler::none());

    const std::vector<Symbol>& functions() const { return functions_; }
    int variable_count() const { return variable_count_; }
    const ConstantSampler& constants() const { return constants_; }
    int max_arity() const { return max_arity_; }

    // Number of terminal generators: one per variable plus one for the
    // constant sampler when present.
    int terminal_generator_count() const {
        return variable_count_ + (constants_.present() ? 1 : 0);
    }

    Symbol sample_function(Rng& rng) const;
    Symbol sample_terminal(Rng& rng) const;

    // Functions of the given arity other than `current`; used by mutation.
    std::vector<Symbol> function_alternatives(Op current, int arity) const;

private:
    std::vector<Symbol> functions_;
    int variable_count_ = 0;
    ConstantSampler constants_;
    int max_arity_ = 0;
};

} // namespace osgp

#endif
