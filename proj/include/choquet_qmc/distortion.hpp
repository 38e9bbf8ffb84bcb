#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "choquet_qmc/errors.hpp"

namespace choquet_qmc {

/// A real number or +infinity. Infinity is a distinct state, never a large float.
class ExtendedReal {
public:
    static constexpr ExtendedReal infinity() noexcept { return ExtendedReal(); }
    constexpr ExtendedReal(double v) noexcept : value_(v), infinite_(false) {}  // NOLINT

    constexpr bool is_finite() const noexcept { return !infinite_; }
    constexpr bool is_infinite() const noexcept { return infinite_; }

    /// Finite value; calling this on +infinity is a logic error.
    double value() const {
        if (infinite_) throw DomainError("ExtendedReal: value() on +infinity");
        return value_;
    }
    /// IEEE view (+inf for the infinite state), for printing and comparisons only.
    double as_double() const noexcept { return infinite_ ? HUGE_VAL : value_; }

    friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) noexcept {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
    }
    friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) noexcept {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) noexcept { return !(a < b); }

private:
    constexpr ExtendedReal() noexcept : value_(0.0), infinite_(true) {}
    double value_;
    bool infinite_;
};

struct AVaRKind { double lambda; };
struct PowerKind { double exponent; };
struct IdentityKind {};
struct Knot { double t; double y; };
struct PiecewiseLinearKind { std::vector<Knot> knots; };

/// Concave distortion function psi: [0,1] -> [0,1], psi(0)=0, psi(1)=1.
///
/// Construct through the named factories; every factory validates its
/// arguments so a Distortion is always a valid concave distortion.
/// Immutable after construction.
class Distortion {
public:
    using Kind = std::variant<AVaRKind, PowerKind, IdentityKind, PiecewiseLinearKind>;

    /// psi(t) = min(t, lambda) / lambda, lambda in (0,1].
    static Distortion avar(double lambda) {
        if (!(lambda > 0.0 && lambda <= 1.0))
            throw InvalidInput("avar: lambda must lie in (0,1], got " + detail::format_real(lambda));
        return Distortion(AVaRKind{lambda});
    }

    /// psi(t) = t^a, a in (0,1].
    static Distortion power(double a) {
        if (!(a > 0.0 && a <= 1.0))
            throw InvalidInput("power: exponent must lie in (0,1], got " + detail::format_real(a));
        return Distortion(PowerKind{a});
    }

    static Distortion identity() { return Distortion(IdentityKind{}); }

    /// Knots must start at (0,0), end at (1,1), have strictly increasing t,
    /// and nonincreasing, nonnegative slopes. Invalid input is rejected.
    static Distortion piecewise_linear(std::vector<Knot> knots) {
        if (knots.size() < 2) throw InvalidInput("pwl: need at least the knots (0,0) and (1,1)");
        if (knots.front().t != 0.0 || knots.front().y != 0.0)
            throw InvalidInput("pwl: first knot must be (0,0)");
        if (knots.back().t != 1.0 || knots.back().y != 1.0)
            throw InvalidInput("pwl: last knot must be (1,1)");
        double previous_slope = HUGE_VAL;
        for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
            const Knot& a = knots[k];
            const Knot& b = knots[k + 1];
            if (!(b.t > a.t)) throw InvalidInput("pwl: knot abscissae must be strictly increasing");
            if (!(b.y >= 0.0 && b.y <= 1.0)) throw InvalidInput("pwl: knot values must lie in [0,1]");
            const double slope = (b.y - a.y) / (b.t - a.t);
            if (slope < 0.0) throw InvalidInput("pwl: distortion must be nondecreasing");
            if (slope > previous_slope * (1.0 + 1e-12) + 1e-12)
                throw InvalidInput("pwl: slopes must be nonincreasing (distortion must be concave)");
            previous_slope = slope;
        }
        return Distortion(PiecewiseLinearKind{std::move(knots)});
    }

    const Kind& kind() const noexcept { return kind_; }

    /// psi(t) for t in [0,1].
    double operator()(double t) const { return eval(t); }

    double eval(double t) const {
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("distortion: t must lie in [0,1], got " + detail::format_real(t));
        return std::visit(
            [t](const auto& k) -> double {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, AVaRKind>) {
                    return std::min(t, k.lambda) / k.lambda;
                } else if constexpr (std::is_same_v<K, PowerKind>) {
                    return std::pow(t, k.exponent);
                } else if constexpr (std::is_same_v<K, IdentityKind>) {
                    return t;
                } else {
                    if (t == 1.0) return 1.0;
                    const auto& kn = k.knots;
                    const auto it = std::upper_bound(kn.begin(), kn.end(), t,
                                                     [](double v, const Knot& x) { return v < x.t; });
                    const Knot& a = *(it - 1);
                    const Knot& b = *it;
                    if (t == a.t) return a.y;
                    return a.y + (b.y - a.y) * (t - a.t) / (b.t - a.t);
                }
            },
            kind_);
    }

    /// Right derivative psi'_+(t) for t in [0,1).
    ExtendedReal right_derivative(double t) const {
        if (!(t >= 0.0 && t < 1.0))
            throw DomainError("distortion: right derivative needs t in [0,1), got " + detail::format_real(t));
        return std::visit(
            [t](const auto& k) -> ExtendedReal {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, AVaRKind>) {
                    return t < k.lambda ? 1.0 / k.lambda : 0.0;
                } else if constexpr (std::is_same_v<K, PowerKind>) {
                    if (k.exponent == 1.0) return 1.0;
                    if (t == 0.0) return ExtendedReal::infinity();
                    return k.exponent * std::pow(t, k.exponent - 1.0);
                } else if constexpr (std::is_same_v<K, IdentityKind>) {
                    return 1.0;
                } else {
                    const auto& kn = k.knots;
                    const auto it = std::upper_bound(kn.begin(), kn.end(), t,
                                                     [](double v, const Knot& x) { return v < x.t; });
                    const Knot& a = *(it - 1);
                    const Knot& b = *it;
                    return (b.y - a.y) / (b.t - a.t);
                }
            },
            kind_);
    }

    bool has_finite_zero_derivative() const { return right_derivative(0.0).is_finite(); }

    /// Canonical textual form, parseable by parse_distortion.
    std::string to_string() const;

private:
    explicit Distortion(Kind k) : kind_(std::move(k)) {}
    Kind kind_;
};

namespace detail {

inline double parse_real(std::string_view text, std::string_view what) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    double v = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc() || ptr != last)
        throw InvalidInput("distortion spec: cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    return v;
}

}  // namespace detail

inline std::string Distortion::to_string() const {
    return std::visit(
        [](const auto& k) -> std::string {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, AVaRKind>) {
                return "avar:" + detail::format_real(k.lambda);
            } else if constexpr (std::is_same_v<K, PowerKind>) {
                return "power:" + detail::format_real(k.exponent);
            } else if constexpr (std::is_same_v<K, IdentityKind>) {
                return "identity";
            } else {
                std::string out = "pwl:";
                bool first = true;
                for (std::size_t i = 1; i + 1 < k.knots.size(); ++i) {
                    if (!first) out += ';';
                    first = false;
                    out += detail::format_real(k.knots[i].t) + "," + detail::format_real(k.knots[i].y);
                }
                return out;
            }
        },
        kind_);
}

/// Parses `avar:<lambda>`, `power:<a>`, `identity`, or `pwl:t1,y1;t2,y2;...`.
/// For pwl the anchors (0,0) and (1,1) are implied; listing them explicitly is allowed.
inline Distortion parse_distortion(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon);
    const std::string_view body = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

    if (head == "identity") {
        if (colon != std::string_view::npos) throw InvalidInput("distortion spec: 'identity' takes no argument");
        return Distortion::identity();
    }
    if (colon == std::string_view::npos)
        throw InvalidInput("distortion spec: expected avar:<l>, power:<a>, identity or pwl:<t,y;...>, got '" +
                           std::string(spec) + "'");
    if (head == "avar") return Distortion::avar(detail::parse_real(body, "lambda"));
    if (head == "power") return Distortion::power(detail::parse_real(body, "exponent"));
    if (head == "pwl") {
        std::vector<Knot> knots{{0.0, 0.0}};
        std::string_view rest = body;
        while (!rest.empty()) {
            const auto semi = rest.find(';');
            const std::string_view pair = rest.substr(0, semi);
            rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
            const auto comma = pair.find(',');
            if (comma == std::string_view::npos)
                throw InvalidInput("distortion spec: pwl knot '" + std::string(pair) + "' is not 't,y'");
            const Knot k{detail::parse_real(pair.substr(0, comma), "knot t"),
                         detail::parse_real(pair.substr(comma + 1), "knot y")};
            if (k.t == 0.0 && k.y == 0.0 && knots.size() == 1) continue;
            knots.push_back(k);
        }
        if (knots.back().t != 1.0) knots.push_back({1.0, 1.0});
        return Distortion::piecewise_linear(std::move(knots));
    }
    throw InvalidInput("distortion spec: unknown kind '" + std::string(head) + "'");
}

}  // namespace choquet_qmc
