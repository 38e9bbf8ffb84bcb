#pragma once

// Small arithmetic-expression language for integrands on [0,1]^d.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative, binds tighter than unary minus
//   primary := number | 'u' index | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Functions: sin cos exp log sqrt abs (one argument), min max (two arguments).
// Variables are u1..ud. The full grammar is documented in docs/expressions.md.

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "choquet_qmc/errors.hpp"

namespace choquet_qmc {

class ParseError : public std::invalid_argument {
public:
    enum class Code { Syntax, UnknownIdentifier, Arity, VariableOutOfRange };

    ParseError(Code code, std::size_t position, const std::string& message)
        : std::invalid_argument(message + " at position " + std::to_string(position)),
          code_(code),
          position_(position) {}

    Code code() const noexcept { return code_; }
    std::size_t position() const noexcept { return position_; }

private:
    Code code_;
    std::size_t position_;
};

enum class NodeKind { Literal, Variable, Add, Sub, Mul, Div, Pow, Neg, Call };
enum class Function { Sin, Cos, Exp, Log, Sqrt, Abs, Min, Max };

inline constexpr std::array<std::pair<std::string_view, Function>, 8> kFunctionNames{{
    {"sin", Function::Sin}, {"cos", Function::Cos}, {"exp", Function::Exp}, {"log", Function::Log},
    {"sqrt", Function::Sqrt}, {"abs", Function::Abs}, {"min", Function::Min}, {"max", Function::Max},
}};

inline std::size_t arity(Function f) { return f == Function::Min || f == Function::Max ? 2 : 1; }

inline std::string_view name_of(Function f) {
    for (const auto& [name, fn] : kFunctionNames)
        if (fn == f) return name;
    return "?";
}

/// Immutable AST node with value semantics. `variable` is 1-based.
struct Expression {
    NodeKind kind = NodeKind::Literal;
    double literal = 0.0;
    std::size_t variable = 0;
    Function function = Function::Sin;
    std::vector<Expression> args;

    static Expression constant(double v) { return {NodeKind::Literal, v, 0, Function::Sin, {}}; }
    static Expression var(std::size_t index) { return {NodeKind::Variable, 0.0, index, Function::Sin, {}}; }
    static Expression unary(NodeKind k, Expression a) { return {k, 0.0, 0, Function::Sin, {std::move(a)}}; }
    static Expression binary(NodeKind k, Expression a, Expression b) {
        std::vector<Expression> v;
        v.push_back(std::move(a));
        v.push_back(std::move(b));
        return {k, 0.0, 0, Function::Sin, std::move(v)};
    }
    static Expression call(Function f, std::vector<Expression> a) { return {NodeKind::Call, 0.0, 0, f, std::move(a)}; }

    friend bool operator==(const Expression&, const Expression&) = default;
};

namespace detail {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

    Expression parse() {
        Expression e = parse_expr();
        skip_space();
        if (pos_ != text_.size()) fail(ParseError::Code::Syntax, "unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(ParseError::Code code, const std::string& msg) const { throw ParseError(code, pos_, msg); }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(ParseError::Code::Syntax, std::string("expected '") + c + "' but input ended");
            fail(ParseError::Code::Syntax, std::string("expected '") + c + "'");
        }
    }

    Expression parse_expr() {
        Expression lhs = parse_term();
        while (true) {
            if (accept('+')) lhs = Expression::binary(NodeKind::Add, std::move(lhs), parse_term());
            else if (accept('-')) lhs = Expression::binary(NodeKind::Sub, std::move(lhs), parse_term());
            else return lhs;
        }
    }

    Expression parse_term() {
        Expression lhs = parse_unary();
        while (true) {
            if (accept('*')) lhs = Expression::binary(NodeKind::Mul, std::move(lhs), parse_unary());
            else if (accept('/')) lhs = Expression::binary(NodeKind::Div, std::move(lhs), parse_unary());
            else return lhs;
        }
    }

    Expression parse_unary() {
        if (accept('-')) return Expression::unary(NodeKind::Neg, parse_unary());
        return parse_power();
    }

    Expression parse_power() {
        Expression base = parse_primary();
        if (accept('^')) return Expression::binary(NodeKind::Pow, std::move(base), parse_unary());
        return base;
    }

    Expression parse_primary() {
        skip_space();
        if (pos_ >= text_.size()) fail(ParseError::Code::Syntax, "unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expression e = parse_expr();
            expect(')');
            return e;
        }
        if ((c >= '0' && c <= '9') || c == '.') return parse_number();
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return parse_identifier();
        fail(ParseError::Code::Syntax, "unexpected '" + std::string(1, c) + "'");
    }

    Expression parse_number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            const std::size_t s = pos_;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
            return pos_ - s;
        };
        std::size_t count = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            count += digits();
        }
        if (count == 0) {
            pos_ = start;
            fail(ParseError::Code::Syntax, "malformed number");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail(ParseError::Code::Syntax, "malformed exponent");
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc() || ptr != text_.data() + pos_) {
            pos_ = start;
            fail(ParseError::Code::Syntax, "number out of range");
        }
        return Expression::constant(v);
    }

    Expression parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_') ++pos_;
            else break;
        }
        const std::string_view name = text_.substr(start, pos_ - start);

        if (name.size() >= 2 && name[0] == 'u' && name.find_first_not_of("0123456789", 1) == std::string_view::npos) {
            std::size_t index = 0;
            std::from_chars(name.data() + 1, name.data() + name.size(), index);
            if (index < 1 || index > dim_) {
                pos_ = start;
                fail(ParseError::Code::VariableOutOfRange,
                     "variable " + std::string(name) + " outside u1..u" + std::to_string(dim_));
            }
            return Expression::var(index);
        }

        for (const auto& [fname, fn] : kFunctionNames) {
            if (fname != name) continue;
            const std::size_t call_pos = start;
            expect('(');
            std::vector<Expression> args;
            args.push_back(parse_expr());
            while (accept(',')) args.push_back(parse_expr());
            expect(')');
            if (args.size() != arity(fn)) {
                pos_ = call_pos;
                fail(ParseError::Code::Arity, std::string(fname) + " takes " + std::to_string(arity(fn)) +
                                                  " argument(s), got " + std::to_string(args.size()));
            }
            return Expression::call(fn, std::move(args));
        }
        pos_ = start;
        fail(ParseError::Code::UnknownIdentifier, "unknown identifier '" + std::string(name) + "'");
    }

    std::string_view text_;
    std::size_t dim_;
    std::size_t pos_ = 0;
};

inline double checked(double v, const char* what) {
    if (!std::isfinite(v)) throw EvaluationError(std::string("expression: non-finite result from ") + what);
    return v;
}

inline double apply_function(Function f, double a, double b) {
    switch (f) {
        case Function::Sin: return std::sin(a);
        case Function::Cos: return std::cos(a);
        case Function::Exp: return checked(std::exp(a), "exp");
        case Function::Log:
            if (!(a > 0.0)) throw EvaluationError("expression: log of non-positive value " + detail::format_real(a));
            return std::log(a);
        case Function::Sqrt:
            if (a < 0.0) throw EvaluationError("expression: sqrt of negative value " + detail::format_real(a));
            return std::sqrt(a);
        case Function::Abs: return std::abs(a);
        case Function::Min: return std::min(a, b);
        case Function::Max: return std::max(a, b);
    }
    return 0.0;
}

inline double apply_binary(NodeKind k, double a, double b) {
    switch (k) {
        case NodeKind::Add: return checked(a + b, "+");
        case NodeKind::Sub: return checked(a - b, "-");
        case NodeKind::Mul: return checked(a * b, "*");
        case NodeKind::Div:
            if (b == 0.0) throw EvaluationError("expression: division by zero");
            return checked(a / b, "/");
        case NodeKind::Pow: return checked(std::pow(a, b), "^");
        default: return 0.0;
    }
}

}  // namespace detail

/// Parses `text` as a function of u1..u`dim`. Throws ParseError.
inline Expression parse_expression(std::string_view text, std::size_t dim) {
    return detail::ExpressionParser(text, dim).parse();
}

/// Fully parenthesized canonical text; parse(print(e)) == e.
inline std::string to_string(const Expression& e) {
    switch (e.kind) {
        case NodeKind::Literal: {
            char buf[32];
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, e.literal);
            return std::string(buf, ptr);
        }
        case NodeKind::Variable: return "u" + std::to_string(e.variable);
        case NodeKind::Neg: return "(-" + to_string(e.args[0]) + ")";
        case NodeKind::Call: {
            std::string out(name_of(e.function));
            out += '(';
            for (std::size_t i = 0; i < e.args.size(); ++i) out += (i ? "," : "") + to_string(e.args[i]);
            return out + ')';
        }
        default: {
            static constexpr std::string_view ops = "+-*/^";
            const char op = ops[static_cast<std::size_t>(e.kind) - static_cast<std::size_t>(NodeKind::Add)];
            return "(" + to_string(e.args[0]) + op + to_string(e.args[1]) + ")";
        }
    }
}

/// Reference tree-walking evaluation.
inline double evaluate(const Expression& e, std::span<const double> u) {
    switch (e.kind) {
        case NodeKind::Literal: return e.literal;
        case NodeKind::Variable: return u[e.variable - 1];
        case NodeKind::Neg: return -evaluate(e.args[0], u);
        case NodeKind::Call:
            return detail::apply_function(e.function, evaluate(e.args[0], u),
                                          e.args.size() > 1 ? evaluate(e.args[1], u) : 0.0);
        default: return detail::apply_binary(e.kind, evaluate(e.args[0], u), evaluate(e.args[1], u));
    }
}

/// Expression flattened to a postfix program for repeated evaluation.
/// Evaluation is reentrant: all scratch state lives on the caller's stack.
class CompiledExpression {
public:
    explicit CompiledExpression(const Expression& e) {
        emit(e, 0);
    }

    double operator()(std::span<const double> u) const {
        if (max_depth_ <= kInlineStack) {
            std::array<double, kInlineStack> stack;
            return run(u, stack.data());
        }
        std::vector<double> stack(max_depth_);
        return run(u, stack.data());
    }

private:
    static constexpr std::size_t kInlineStack = 32;

    struct Instr {
        NodeKind kind;
        double literal;
        std::size_t variable;
        Function function;
    };

    void emit(const Expression& e, std::size_t depth) {
        for (std::size_t i = 0; i < e.args.size(); ++i) emit(e.args[i], depth + i);
        max_depth_ = std::max(max_depth_, depth + 1);
        code_.push_back({e.kind, e.literal, e.variable, e.function});
    }

    double run(std::span<const double> u, double* stack) const {
        std::size_t top = 0;
        for (const Instr& in : code_) {
            switch (in.kind) {
                case NodeKind::Literal: stack[top++] = in.literal; break;
                case NodeKind::Variable: stack[top++] = u[in.variable - 1]; break;
                case NodeKind::Neg: stack[top - 1] = -stack[top - 1]; break;
                case NodeKind::Call:
                    if (arity(in.function) == 2) {
                        --top;
                        stack[top - 1] = detail::apply_function(in.function, stack[top - 1], stack[top]);
                    } else {
                        stack[top - 1] = detail::apply_function(in.function, stack[top - 1], 0.0);
                    }
                    break;
                default:
                    --top;
                    stack[top - 1] = detail::apply_binary(in.kind, stack[top - 1], stack[top]);
                    break;
            }
        }
        return stack[0];
    }

    std::vector<Instr> code_;
    std::size_t max_depth_ = 0;
};

}  // namespace choquet_qmc
