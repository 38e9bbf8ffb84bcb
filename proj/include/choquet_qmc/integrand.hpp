#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "choquet_qmc/errors.hpp"
#include "choquet_qmc/expression.hpp"

namespace choquet_qmc {

/// f: [0,1]^d -> R with optional regularity metadata.
///
/// The Lipschitz constant is taken w.r.t. the max norm, so
/// |f(x) - f(y)| <= L * max_j |x_j - y_j|. A user-supplied modulus of
/// continuity t -> rho(f; t), when present, takes precedence over L.
/// The evaluator must be reentrant; Integrand is cheap to copy.
class Integrand {
public:
    using Evaluator = std::function<double(std::span<const double>)>;
    using Modulus = std::function<double(double)>;

    Integrand(std::size_t dim, Evaluator evaluator, std::optional<double> lipschitz_constant = std::nullopt,
              std::optional<double> sup_norm_bound = std::nullopt, std::string description = {})
        : dim_(dim),
          evaluator_(std::move(evaluator)),
          lipschitz_(lipschitz_constant),
          sup_norm_(sup_norm_bound),
          description_(std::move(description)) {
        if (dim_ == 0) throw DomainError("Integrand: dimension must be >= 1");
        if (!evaluator_) throw InvalidInput("Integrand: empty evaluator");
        if (lipschitz_ && !(*lipschitz_ >= 0.0)) throw InvalidInput("Integrand: Lipschitz constant must be >= 0");
        if (sup_norm_ && !(*sup_norm_ >= 0.0)) throw InvalidInput("Integrand: sup-norm bound must be >= 0");
    }

    std::size_t dim() const noexcept { return dim_; }
    const std::optional<double>& lipschitz_constant() const noexcept { return lipschitz_; }
    const std::optional<double>& sup_norm_bound() const noexcept { return sup_norm_; }
    const Modulus& modulus() const noexcept { return modulus_; }
    const std::string& description() const noexcept { return description_; }

    double operator()(std::span<const double> u) const {
        if (u.size() != dim_)
            throw DomainError("Integrand: expected " + std::to_string(dim_) + " coordinates, got " + std::to_string(u.size()));
        return evaluator_(u);
    }

    Integrand with_lipschitz_constant(double L) const {
        Integrand copy = *this;
        if (!(L >= 0.0)) throw InvalidInput("Integrand: Lipschitz constant must be >= 0");
        copy.lipschitz_ = L;
        return copy;
    }

    Integrand with_sup_norm_bound(double M) const {
        Integrand copy = *this;
        if (!(M >= 0.0)) throw InvalidInput("Integrand: sup-norm bound must be >= 0");
        copy.sup_norm_ = M;
        return copy;
    }

    /// Attaches a modulus-of-continuity model; it must satisfy rho(f;t) <= modulus(t).
    Integrand with_modulus(Modulus modulus) const {
        Integrand copy = *this;
        copy.modulus_ = std::move(modulus);
        return copy;
    }

private:
    std::size_t dim_;
    Evaluator evaluator_;
    std::optional<double> lipschitz_;
    std::optional<double> sup_norm_;
    Modulus modulus_;
    std::string description_;
};

/// Integrand from expression text in u1..u`dim`; no regularity metadata unless given.
inline Integrand integrand_from_expression(std::string_view text, std::size_t dim,
                                           std::optional<double> lipschitz_constant = std::nullopt,
                                           std::optional<double> sup_norm_bound = std::nullopt) {
    auto program = std::make_shared<const CompiledExpression>(parse_expression(text, dim));
    return Integrand(
        dim, [program](std::span<const double> u) { return (*program)(u); }, lipschitz_constant, sup_norm_bound,
        "expr:" + std::string(text));
}

// Regularity of the 5-d benchmark f(u) = exp(-(u1 u2 u3 + sin(u3 u4 u5))):
// with g the exponent, 0 <= g <= 1 + sin(1), so f lies in [e^{-1.85}, 1].
// Per coordinate |df/du_k| <= f |dg/du_k| <= |dg/du_k|, and the partial bounds
// are 1, 1, 2, 1, 1 (du3 picks up u1 u2 + cos(.) u4 u5). The max-norm
// Lipschitz constant is bounded by the l1 sum of the partial bounds: L = 6.
inline constexpr double kBenchmarkLipschitz = 6.0;
inline const double kBenchmarkSupNorm = std::exp(1.0);

inline const std::vector<std::string_view>& builtin_names() {
    static const std::vector<std::string_view> names{"linear-1d", "paper-example"};
    return names;
}

/// Built-in integrands: `linear-1d` (f(u) = u, L = 1, M = 1) and
/// `paper-example` (the 5-d benchmark above, L = 6, M = e).
inline Integrand builtin(std::string_view name) {
    if (name == "linear-1d") {
        return Integrand(1, [](std::span<const double> u) { return u[0]; }, 1.0, 1.0, "builtin:linear-1d");
    }
    if (name == "paper-example") {
        return Integrand(
            5,
            [](std::span<const double> u) { return std::exp(-(u[0] * u[1] * u[2] + std::sin(u[2] * u[3] * u[4]))); },
            kBenchmarkLipschitz, kBenchmarkSupNorm, "builtin:paper-example");
    }
    std::string known;
    for (const auto n : builtin_names()) known += (known.empty() ? "" : ", ") + std::string(n);
    throw InvalidInput("unknown built-in integrand '" + std::string(name) + "' (available: " + known + ")");
}

/// Parses `builtin:<name>` or `expr:<text>`. For `expr:`, `dim` is required.
inline Integrand parse_function_spec(std::string_view spec, std::optional<std::size_t> dim) {
    if (spec.starts_with("builtin:")) {
        Integrand f = builtin(spec.substr(8));
        if (dim && *dim != f.dim())
            throw InvalidInput("built-in '" + std::string(spec.substr(8)) + "' has dimension " + std::to_string(f.dim()) +
                               ", but --dim is " + std::to_string(*dim));
        return f;
    }
    if (spec.starts_with("expr:")) {
        if (!dim) throw InvalidInput("expr: functions need an explicit dimension");
        return integrand_from_expression(spec.substr(5), *dim);
    }
    throw InvalidInput("function spec must be 'builtin:<name>' or 'expr:<text>', got '" + std::string(spec) + "'");
}

}  // namespace choquet_qmc
