// SPDX-License-Identifier: MIT

#include "symbols.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace osgp {

namespace {

struct OpInfo {
    std::string_view name;
    int arity;
};

constexpr std::array<OpInfo, 18> kFunctionInfo = {{
    {"ADD", 2},
    {"SUB", 2},
    {"MUL", 2},
    {"DIV", 2},
    {"LOG", 1},
    {"EXP", 1},
    {"SIGNUM", 1},
    {"SIN", 1},
    {"COS", 1},
    {"TAN", 1},
    {"IF-THEN-ELSE", 3},
    {"LESS-THAN", 2},
    {"GREATER-THAN", 2},
    {"EQUAL", 2},
    {"NOT", 1},
    {"AND", 2},
    {"OR", 2},
    {"XOR", 2},
}};

const OpInfo& info_for(Op op) {
    auto index = static_cast<size_t>(op);
    if (index >= kFunctionInfo.size())
        throw ValidationError("not a function op");
    return kFunctionInfo[index];
}

} // namespace

int function_arity(Op op) { return info_for(op).arity; }

std::string_view function_name(Op op) { return info_for(op).name; }

Symbol Symbol::function(Op op) {
    Symbol s;
    s.op = op;
    s.arity = static_cast<uint8_t>(function_arity(op));
    return s;
}

Symbol Symbol::variable(int column) {
    if (column < 0 || column > INT16_MAX)
        throw ValidationError("variable column out of range");
    Symbol s;
    s.op = Op::Variable;
    s.column = static_cast<int16_t>(column);
    return s;
}

Symbol Symbol::constant(double value) {
    Symbol s;
    s.op = Op::Constant;
    s.value = value;
    return s;
}

std::string Symbol::name() const {
    switch (kind()) {
    case SymbolKind::Function:
        return std::string(function_name(op));
    case SymbolKind::Variable:
        return "x" + std::to_string(column + 1);
    case SymbolKind::Constant: {
        char buf[32];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
        (void)ec;
        return std::string(buf, ptr);
    }
    }
    return "?";
}

ConstantSampler ConstantSampler::int_range(int64_t lo, int64_t hi) {
    if (lo > hi) throw ValidationError("constant range lower bound exceeds upper bound");
    ConstantSampler s;
    s.kind = Kind::IntRange;
    s.lo = static_cast<double>(lo);
    s.hi = static_cast<double>(hi);
    return s;
}

ConstantSampler ConstantSampler::real_range(double lo, double hi) {
    if (!(lo <= hi)) throw ValidationError("constant range lower bound exceeds upper bound");
    ConstantSampler s;
    s.kind = Kind::RealRange;
    s.lo = lo;
    s.hi = hi;
    return s;
}

double ConstantSampler::sample(Rng& rng) const {
    switch (kind) {
    case Kind::IntRange:
        return static_cast<double>(
            rng.integer(static_cast<int64_t>(lo), static_cast<int64_t>(hi)));
    case Kind::RealRange:
        return rng.real(lo, hi);
    case Kind::None:
        break;
    }
    throw ValidationError("no constant sampler configured");
}

PrimitiveSet::PrimitiveSet(std::vector<Op> functions, int variable_count,
                           ConstantSampler constants)
    : variable_count_(variable_count), constants_(constants) {
    if (functions.empty()) throw ValidationError("primitive set needs at least one function");
    if (terminal_generator_count() < 1)
        throw ValidationError("primitive set needs at least one terminal");
    functions_.reserve(functions.size());
    for (Op op : functions) {
        Symbol s = Symbol::function(op);
        if (std::find(functions_.begin(), functions_.end(), s) != functions_.end())
            throw ValidationError("duplicate function in primitive set");
        functions_.push_back(s);
        max_arity_ = std::max(max_arity_, static_cast<int>(s.arity));
    }
}

PrimitiveSet PrimitiveSet::arithmetic(int variable_count, ConstantSampler constants) {
    return PrimitiveSet({Op::Add, Op::Sub, Op::Mul, Op::Div}, variable_count, constants);
}

PrimitiveSet PrimitiveSet::extended(int variable_count, ConstantSampler constants) {
    return PrimitiveSet({Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Log, Op::Exp, Op::Signum,
                         Op::Sin, Op::Cos, Op::Tan, Op::IfThenElse, Op::LessThan,
                         Op::GreaterThan, Op::Equal, Op::Not, Op::And, Op::Or, Op::Xor},
                        variable_count, constants);
}

Symbol PrimitiveSet::sample_function(Rng& rng) const {
    return functions_[rng.below(functions_.size())];
}

Symbol PrimitiveSet::sample_terminal(Rng& rng) const {
    auto pick = rng.below(static_cast<uint64_t>(terminal_generator_count()));
    if (pick < static_cast<uint64_t>(variable_count_))
        return Symbol::variable(static_cast<int>(pick));
    return Symbol::constant(constants_.sample(rng));
}

std::vector<Symbol> PrimitiveSet::function_alternatives(Op current, int arity) const {
    std::vector<Symbol> out;
    for (const Symbol& s : functions_)
        if (static_cast<int>(s.arity) == arity && s.op != current) out.push_back(s);
    return out;
}

} // namespace osgp
