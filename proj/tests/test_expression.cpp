#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "choquet_qmc/expression.hpp"

using namespace choquet_qmc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

using E = Expression;

ParseError::Code error_code(const std::string& text, std::size_t dim) {
    try {
        parse_expression(text, dim);
    } catch (const ParseError& e) {
        return e.code();
    }
    FAIL("expected a ParseError for '" << text << "'");
    return ParseError::Code::Syntax;
}

// Random well-formed expression text over u1..u`dim`.
std::string random_expression(std::mt19937_64& rng, std::size_t dim, int depth) {
    const auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned>(n)); };
    if (depth == 0 || pick(4) == 0) {
        if (pick(2) == 0) return "u" + std::to_string(1 + pick(static_cast<int>(dim)));
        return std::to_string(pick(50) / 10.0 + 0.1);
    }
    switch (pick(9)) {
        case 0: return random_expression(rng, dim, depth - 1) + " + " + random_expression(rng, dim, depth - 1);
        case 1: return random_expression(rng, dim, depth - 1) + " - " + random_expression(rng, dim, depth - 1);
        case 2: return random_expression(rng, dim, depth - 1) + "*" + random_expression(rng, dim, depth - 1);
        case 3: return "(" + random_expression(rng, dim, depth - 1) + ")/(2 + abs(" + random_expression(rng, dim, depth - 1) + "))";
        case 4: return "-" + random_expression(rng, dim, depth - 1);
        case 5: return "sin(" + random_expression(rng, dim, depth - 1) + ")";
        case 6: return "exp(-abs(" + random_expression(rng, dim, depth - 1) + "))";
        case 7: return "max(" + random_expression(rng, dim, depth - 1) + ", " + random_expression(rng, dim, depth - 1) + ")";
        default: return "sqrt(1 + (" + random_expression(rng, dim, depth - 1) + ")^2)";
    }
}

}  // namespace

TEST_CASE("parses to the expected tree", "[expression]") {
    CHECK(parse_expression("u1 + 2*u2", 2) ==
          E::binary(NodeKind::Add, E::var(1), E::binary(NodeKind::Mul, E::constant(2), E::var(2))));
    // ^ is right-associative and binds tighter than unary minus
    CHECK(parse_expression("-u1^2^3", 1) ==
          E::unary(NodeKind::Neg,
                   E::binary(NodeKind::Pow, E::var(1), E::binary(NodeKind::Pow, E::constant(2), E::constant(3)))));
    // left-associative - and /
    CHECK(parse_expression("u1 - u2 - 1", 2) ==
          E::binary(NodeKind::Sub, E::binary(NodeKind::Sub, E::var(1), E::var(2)), E::constant(1)));
    CHECK(parse_expression("8/4/2", 1) ==
          E::binary(NodeKind::Div, E::binary(NodeKind::Div, E::constant(8), E::constant(4)), E::constant(2)));
    CHECK(parse_expression("2^-1", 1) == E::binary(NodeKind::Pow, E::constant(2), E::unary(NodeKind::Neg, E::constant(1))));
    CHECK(parse_expression("max(u1, 0.5e1)", 1) == E::call(Function::Max, {E::var(1), E::constant(5)}));
    CHECK(parse_expression(" ( .5 ) ", 1) == E::constant(0.5));
}

TEST_CASE("evaluates the 5-d benchmark integrand", "[expression]") {
    const auto e = parse_expression("exp(-(u1*u2*u3 + sin(u3*u4*u5)))", 5);
    const std::vector<double> ones(5, 1.0);
    CHECK_THAT(evaluate(e, ones), WithinRel(std::exp(-(1.0 + std::sin(1.0))), 1e-15));
    CHECK_THAT(evaluate(e, ones), WithinAbs(0.1585840, 1e-7));
    CHECK(CompiledExpression(e)(ones) == evaluate(e, ones));
}

TEST_CASE("operator semantics", "[expression]") {
    const std::vector<double> u{0.25, 0.5};
    CHECK(evaluate(parse_expression("2^3^2", 1), u) == 512.0);
    CHECK(evaluate(parse_expression("-2^2", 1), u) == -4.0);
    CHECK(evaluate(parse_expression("1 - 2 - 3", 1), u) == -4.0);
    CHECK(evaluate(parse_expression("min(u1, u2) + max(u1, u2)", 2), u) == 0.75);
    CHECK(evaluate(parse_expression("abs(-u2) * sqrt(4) + log(exp(1)) + cos(0)", 2), u) == 3.0);
}

TEST_CASE("error kinds", "[expression]") {
    CHECK(error_code("u3", 2) == ParseError::Code::VariableOutOfRange);
    CHECK(error_code("u0", 2) == ParseError::Code::VariableOutOfRange);
    CHECK(error_code("foo(u1)", 1) == ParseError::Code::UnknownIdentifier);
    CHECK(error_code("x + 1", 1) == ParseError::Code::UnknownIdentifier);
    CHECK(error_code("sin(u1, u1)", 1) == ParseError::Code::Arity);
    CHECK(error_code("max(u1)", 1) == ParseError::Code::Arity);
    CHECK(error_code("u1 +", 1) == ParseError::Code::Syntax);
    CHECK(error_code("(u1", 1) == ParseError::Code::Syntax);
    CHECK(error_code("u1 u1", 1) == ParseError::Code::Syntax);
    CHECK(error_code("1e", 1) == ParseError::Code::Syntax);
    CHECK(error_code("1e999", 1) == ParseError::Code::Syntax);
    CHECK(error_code("", 1) == ParseError::Code::Syntax);
    CHECK(error_code("sin u1", 1) == ParseError::Code::Syntax);

    try {
        parse_expression("u1 + * u1", 1);
    } catch (const ParseError& e) {
        CHECK(e.position() == 5);
    }
}

TEST_CASE("evaluation errors instead of NaN", "[expression]") {
    const std::vector<double> u{0.0};
    CHECK_THROWS_AS(evaluate(parse_expression("log(u1)", 1), u), EvaluationError);
    CHECK_THROWS_AS(CompiledExpression(parse_expression("log(u1)", 1))(u), EvaluationError);
    CHECK_THROWS_AS(evaluate(parse_expression("sqrt(u1 - 1)", 1), u), EvaluationError);
    CHECK_THROWS_AS(evaluate(parse_expression("1/u1", 1), u), EvaluationError);
    CHECK_THROWS_AS(evaluate(parse_expression("(-1)^0.5", 1), u), EvaluationError);
    CHECK_THROWS_AS(evaluate(parse_expression("exp(1000)", 1), u), EvaluationError);
}

TEST_CASE("print then parse reproduces the tree", "[expression][property]") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t dim = 1 + rng() % 5;
        const std::string text = random_expression(rng, dim, 4);
        const auto tree = parse_expression(text, dim);
        INFO(text << "  ->  " << to_string(tree));
        REQUIRE(parse_expression(to_string(tree), dim) == tree);
    }
    const auto tiny = parse_expression("1e-05 * u1 + 0.1", 1);
    REQUIRE(parse_expression(to_string(tiny), 1) == tiny);
}

TEST_CASE("compiled and tree-walking evaluation agree", "[expression][property]") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dim = 1 + rng() % 5;
        const std::string text = random_expression(rng, dim, 5);
        const auto tree = parse_expression(text, dim);
        const CompiledExpression compiled(tree);
        std::vector<double> u(dim);
        for (int k = 0; k < 1000; ++k) {
            for (double& x : u) x = (rng() >> 11) * 0x1.0p-53;
            const double reference = evaluate(tree, u);
            REQUIRE_THAT(compiled(u), WithinAbs(reference, 1e-15 * std::max(1.0, std::abs(reference))));
        }
    }
}

TEST_CASE("deep expressions use the heap stack", "[expression]") {
    std::string text = "u1";
    for (int k = 0; k < 60; ++k) text = "(1 + " + text + ")";
    std::string right = "u1";
    for (int k = 0; k < 60; ++k) right = "max(u1, " + right + ")";
    const std::vector<double> u{0.5};
    CHECK(CompiledExpression(parse_expression(text, 1))(u) == 60.5);
    CHECK(CompiledExpression(parse_expression("1 + " + right, 1))(u) == 1.5);
}
