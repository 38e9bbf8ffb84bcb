#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "choquet_qmc/discrepancy.hpp"
#include "choquet_qmc/distortion.hpp"
#include "choquet_qmc/integrand.hpp"
#include "choquet_qmc/pointset.hpp"

namespace choquet_qmc {

enum class BoundBranch { GeneralPsi, FiniteDerivative, NoCertificate };

inline const char* to_string(BoundBranch b) {
    switch (b) {
        case BoundBranch::GeneralPsi: return "GeneralPsi";
        case BoundBranch::FiniteDerivative: return "FiniteDerivative";
        case BoundBranch::NoCertificate: return "NoCertificate";
    }
    return "?";
}

/// Certified bound on |Choquet integral - QMC estimate|.
struct ErrorBound {
    double value = 0.0;  // meaningful unless branch == NoCertificate
    BoundBranch branch = BoundBranch::NoCertificate;
    std::string reason;  // why no certificate could be issued
    std::optional<double> rho;
    std::optional<DiscrepancyResult> discrepancy;
    double constant = 4.0;
};

/// Upper model of the modulus of continuity rho(f; t) (max norm).
/// Uses the user-supplied modulus if any, else min(L t, 2M) (cap only when M is known).
/// nullopt means no certificate is available for t > 0.
inline std::optional<double> modulus(const Integrand& f, double t) {
    if (!(t >= 0.0)) throw DomainError("modulus: t must be >= 0");
    if (t == 0.0) return 0.0;
    if (f.modulus()) return f.modulus()(t);
    if (!f.lipschitz_constant()) return std::nullopt;
    double rho = *f.lipschitz_constant() * t;
    if (f.sup_norm_bound()) rho = std::min(rho, 2.0 * *f.sup_norm_bound());
    return rho;
}

/// Sampled lower bound on rho(f; t): max |f(x) - f(y)| over random pairs with |x - y|_max <= t.
/// y = x + delta, delta uniform in [-t, t]^d, clamped into [0,1)^d (clamping never increases |x - y|).
inline double empirical_modulus_lower(const Integrand& f, double t, std::size_t samples, std::uint64_t seed) {
    if (!(t > 0.0)) throw DomainError("empirical_modulus_lower: t must be > 0");
    if (samples < 1) throw DomainError("empirical_modulus_lower: samples must be >= 1");
    const std::size_t d = f.dim();
    std::mt19937_64 engine(seed);
    std::vector<double> x(d);
    std::vector<double> y(d);
    const double below_one = std::nextafter(1.0, 0.0);
    double best = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = unit_interval_from_bits(engine());
            const double delta = (2.0 * unit_interval_from_bits(engine()) - 1.0) * t;
            y[j] = std::clamp(x[j] + delta, 0.0, below_one);
        }
        best = std::max(best, std::abs(f(x) - f(y)));
    }
    return best;
}

/// Constant of the discrepancy term: 4 in general, 1 in one dimension.
inline double discrepancy_constant(std::size_t dim) { return dim == 1 ? 1.0 : 4.0; }

/// C psi'_+(0) rho, valid when psi'_+(0) is finite.
inline double finite_derivative_bound(const Distortion& psi, double rho, std::size_t dim) {
    return discrepancy_constant(dim) * psi.right_derivative(0.0).value() * rho;
}

/// (2M + C) psi(rho), valid when rho < 1.
inline double general_psi_bound(const Distortion& psi, double rho, double sup_norm, std::size_t dim) {
    return (2.0 * sup_norm + discrepancy_constant(dim)) * psi(rho);
}

/// Branch selection given rho = rho(f; D*^{1/d}): the finite-derivative bound
/// whenever psi'_+(0) < inf, else the general bound if rho < 1 and a sup-norm
/// bound is known, else no certificate.
inline ErrorBound certify_from_rho(const Distortion& psi, double rho, std::optional<double> sup_norm, std::size_t dim) {
    ErrorBound b;
    b.rho = rho;
    b.constant = discrepancy_constant(dim);
    if (psi.has_finite_zero_derivative()) {
        b.value = finite_derivative_bound(psi, rho, dim);
        b.branch = BoundBranch::FiniteDerivative;
    } else if (!(rho < 1.0)) {
        b.reason = "modulus rho(f; D*^(1/d)) = " + detail::format_real(rho) + " is not < 1";
    } else if (!sup_norm) {
        b.reason = "integrand has no sup-norm bound";
    } else {
        b.value = general_psi_bound(psi, rho, *sup_norm, dim);
        b.branch = BoundBranch::GeneralPsi;
    }
    return b;
}

/// Error certificate for qmc_estimate(f, points, psi) from the star discrepancy
/// of `points`. A LowerBound-mode discrepancy cannot certify anything.
inline ErrorBound theorem1_bound(const Integrand& f, const PointSet& points, const Distortion& psi,
                                 const DiscrepancyResult& discrepancy) {
    if (discrepancy.n != points.size() || discrepancy.dim != points.dim())
        throw DomainError("theorem1_bound: discrepancy was computed for a different point set");
    if (points.dim() != f.dim()) throw DomainError("theorem1_bound: integrand and point set dimensions differ");

    const std::size_t d = points.dim();
    ErrorBound b;
    b.discrepancy = discrepancy;
    b.constant = discrepancy_constant(d);
    if (discrepancy.mode != DiscrepancyMode::Exact) {
        b.reason = "discrepancy is only a lower bound";
        return b;
    }
    const double t = d == 1 ? discrepancy.value : std::pow(discrepancy.value, 1.0 / static_cast<double>(d));
    const std::optional<double> rho = modulus(f, t);
    if (!rho) {
        b.reason = "integrand has no Lipschitz constant or modulus of continuity";
        return b;
    }
    ErrorBound out = certify_from_rho(psi, *rho, f.sup_norm_bound(), d);
    out.discrepancy = discrepancy;
    return out;
}

}  // namespace choquet_qmc
