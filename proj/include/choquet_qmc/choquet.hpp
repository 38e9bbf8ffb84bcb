#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "choquet_qmc/distortion.hpp"
#include "choquet_qmc/errors.hpp"
#include "choquet_qmc/integrand.hpp"
#include "choquet_qmc/pointset.hpp"

namespace choquet_qmc {

enum class MethodKind { QMC, MC, DiscreteExact, SurvivalQuadrature, AVaRDual };

inline const char* to_string(MethodKind m) {
    switch (m) {
        case MethodKind::QMC: return "qmc";
        case MethodKind::MC: return "mc";
        case MethodKind::DiscreteExact: return "discrete_exact";
        case MethodKind::SurvivalQuadrature: return "survival_quadrature";
        case MethodKind::AVaRDual: return "avar_dual";
    }
    return "?";
}

struct Method {
    MethodKind kind;
    std::optional<std::uint64_t> seed;  // MC only
};

struct ChoquetEstimate {
    double value;
    std::size_t n;
    Method method;
    double min_value;
    double max_value;
};

/// Choquet integral of the equal-weight empirical distribution of
/// `sorted` (ascending) w.r.t. c_psi:
///   v_(1) + sum_{i=2}^{n} (v_(i) - v_(i-1)) psi((n-i+1)/n).
/// Accumulation runs in index order, so the result is bitwise reproducible.
inline double choquet_from_sorted(std::span<const double> sorted, const Distortion& psi) {
    if (sorted.empty()) throw DomainError("choquet: need at least one value");
    const std::size_t n = sorted.size();
    const double dn = static_cast<double>(n);
    double total = sorted[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double increment = sorted[i] - sorted[i - 1];
        if (increment != 0.0) total += increment * psi(static_cast<double>(n - i) / dn);
    }
    return total;
}

/// Sorts a copy of `values` and applies choquet_from_sorted. NaN is rejected.
inline double choquet_from_samples(std::vector<double> values, const Distortion& psi) {
    for (std::size_t i = 0; i < values.size(); ++i)
        if (std::isnan(values[i])) throw EvaluationError("choquet: NaN sample", i);
    std::stable_sort(values.begin(), values.end());
    return choquet_from_sorted(values, psi);
}

/// f at every point, in point order. Failures and non-finite values are
/// reported with the offending point index.
inline std::vector<double> evaluate_on(const Integrand& f, const PointSet& points) {
    if (points.dim() != f.dim())
        throw DomainError("integrand has dimension " + std::to_string(f.dim()) + " but points have dimension " +
                          std::to_string(points.dim()));
    std::vector<double> values(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        double v = 0.0;
        try {
            v = f(points[i]);
        } catch (const EvaluationError& e) {
            if (e.has_point_index()) throw;
            throw EvaluationError(e.what(), i);
        }
        if (!std::isfinite(v)) throw EvaluationError("integrand returned a non-finite value", i);
        values[i] = v;
    }
    return values;
}

namespace detail {

inline ChoquetEstimate estimate_from_values(std::vector<double> values, const Distortion& psi, Method method) {
    std::stable_sort(values.begin(), values.end());
    return {choquet_from_sorted(values, psi), values.size(), method, values.front(), values.back()};
}

}  // namespace detail

/// Quasi-Monte Carlo estimate of the Choquet integral of f(U) w.r.t. c_psi over `points`.
inline ChoquetEstimate qmc_estimate(const Integrand& f, const PointSet& points, const Distortion& psi) {
    return detail::estimate_from_values(evaluate_on(f, points), psi, {MethodKind::QMC, std::nullopt});
}

/// Same estimator over pseudo_random(dim, n, seed).
inline ChoquetEstimate mc_estimate(const Integrand& f, std::size_t dim, std::size_t n, std::uint64_t seed,
                                   const Distortion& psi) {
    if (dim != f.dim()) throw DomainError("mc_estimate: dim does not match the integrand");
    return detail::estimate_from_values(evaluate_on(f, pseudo_random(dim, n, seed)), psi, {MethodKind::MC, seed});
}

struct Atom {
    double value;
    double probability;
};

/// Finite distribution with positive weights summing to 1 (within 1e-12).
class DiscreteDistribution {
public:
    explicit DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw InvalidInput("discrete distribution: need at least one atom");
        double total = 0.0;
        for (const Atom& a : atoms_) {
            if (!std::isfinite(a.value)) throw InvalidInput("discrete distribution: non-finite atom value");
            if (!(a.probability > 0.0)) throw InvalidInput("discrete distribution: probabilities must be positive");
            total += a.probability;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw InvalidInput("discrete distribution: probabilities sum to " + detail::format_real(total) + ", not 1");
    }

    /// Equal weights 1/n on `values`.
    static DiscreteDistribution uniform(std::span<const double> values) {
        if (values.empty()) throw InvalidInput("discrete distribution: need at least one atom");
        std::vector<Atom> atoms;
        atoms.reserve(values.size());
        const double p = 1.0 / static_cast<double>(values.size());
        for (double v : values) atoms.push_back({v, p});
        DiscreteDistribution d(std::move(atoms), true);
        return d;
    }

    const std::vector<Atom>& atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    bool equal_weights() const noexcept { return equal_weights_; }

    double mean() const {
        double m = 0.0;
        for (const Atom& a : atoms_) m += a.value * a.probability;
        return m;
    }

    /// P(X > x).
    double survival(double x) const {
        double s = 0.0;
        for (const Atom& a : atoms_)
            if (a.value > x) s += a.probability;
        return std::min(s, 1.0);
    }

private:
    DiscreteDistribution(std::vector<Atom> atoms, bool equal) : DiscreteDistribution(std::move(atoms)) {
        equal_weights_ = equal;
    }

    std::vector<Atom> atoms_;
    bool equal_weights_ = false;
};

/// Exact Choquet integral of a discrete X w.r.t. c_psi by comonotone telescoping:
/// a_(1) + sum_{i>=2} (a_(i) - a_(i-1)) psi(P(X >= a_(i))), tail masses summed from the top.
/// Equal-weight distributions use the tail fractions (n-i+1)/n exactly as the QMC estimator does.
inline ChoquetEstimate choquet_discrete(const DiscreteDistribution& dist, const Distortion& psi) {
    std::vector<Atom> atoms = dist.atoms();
    std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    const std::size_t n = atoms.size();
    const Method method{MethodKind::DiscreteExact, std::nullopt};

    if (dist.equal_weights()) {
        std::vector<double> sorted(n);
        for (std::size_t i = 0; i < n; ++i) sorted[i] = atoms[i].value;
        return {choquet_from_sorted(sorted, psi), n, method, sorted.front(), sorted.back()};
    }

    std::vector<double> tail(n);
    double acc = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        acc += atoms[i].probability;
        tail[i] = std::min(acc, 1.0);
    }
    double total = atoms[0].value;
    for (std::size_t i = 1; i < n; ++i) {
        const double increment = atoms[i].value - atoms[i - 1].value;
        if (increment != 0.0) total += increment * psi(tail[i]);
    }
    return {total, n, method, atoms.front().value, atoms.back().value};
}

/// Layer-cake quadrature of the Choquet integral from a survival function S(x) = P(X > x):
///   int_0^inf psi(S(x)) dx + int_{-inf}^0 (psi(S(x)) - 1) dx,
/// with X supported in [lo, hi]. The integrand is known exactly outside [lo, hi]
/// (S = 1 below lo, S = 0 above hi); inside, each of the two half-lines is
/// integrated by the composite midpoint rule with n_nodes nodes.
inline double choquet_by_survival(const std::function<double(double)>& survival, double lo, double hi,
                                  const Distortion& psi, std::size_t n_nodes = 100000) {
    if (n_nodes < 2) throw DomainError("choquet_by_survival: n_nodes must be >= 2");
    if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi))
        throw DomainError("choquet_by_survival: need finite lo <= hi");

    auto psi_of_survival = [&](double x) {
        const double s = survival(x);
        if (!(s >= 0.0 && s <= 1.0))
            throw DomainError("choquet_by_survival: survival function returned " + detail::format_real(s) + " at x = " +
                              detail::format_real(x));
        return psi(s);
    };
    auto midpoint = [&](double a, double b, double shift) {
        const double h = (b - a) / static_cast<double>(n_nodes);
        double sum = 0.0;
        for (std::size_t k = 0; k < n_nodes; ++k)
            sum += psi_of_survival(a + (static_cast<double>(k) + 0.5) * h) - shift;
        return sum * h;
    };

    double total = 0.0;
    if (lo > 0.0) total += lo;  // S = 1 on [0, lo)
    if (hi < 0.0) total += hi;  // S = 0 on [hi, 0): psi(0) - 1 = -1
    const double pos_lo = std::max(0.0, lo);
    const double neg_hi = std::min(0.0, hi);
    if (hi > pos_lo) total += midpoint(pos_lo, hi, 0.0);
    if (neg_hi > lo) total += midpoint(lo, neg_hi, 1.0);
    return total;
}

/// AVaR at level lambda by the dual minimization
///   min_y [ E(X - y)_+ + lambda y ] / lambda,
/// scanning y over the atoms (the objective is convex piecewise linear with
/// breaks at the atoms, minimized at the upper lambda-quantile).
inline double avar_dual(const DiscreteDistribution& dist, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("avar_dual: lambda must lie in (0,1]");
    double best = HUGE_VAL;
    for (const Atom& candidate : dist.atoms()) {
        const double y = candidate.value;
        double excess = 0.0;
        for (const Atom& a : dist.atoms()) excess += a.probability * std::max(a.value - y, 0.0);
        best = std::min(best, (excess + lambda * y) / lambda);
    }
    return best;
}

}  // namespace choquet_qmc
