#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "choquet_qmc/errors.hpp"
#include "choquet_qmc/pointset.hpp"

namespace choquet_qmc {

enum class DiscrepancyMode { Exact, LowerBound };

inline const char* to_string(DiscrepancyMode m) { return m == DiscrepancyMode::Exact ? "Exact" : "LowerBound"; }

struct DiscrepancyResult {
    double value;
    DiscrepancyMode mode;
    std::size_t n;
    std::size_t dim;
};

inline constexpr double kDefaultDiscrepancyBudget = 1e8;

// All routines compute the star discrepancy
//   D* = sup_{xi in [0,1]^d} | #{x_i in [0,xi)} / n - vol([0,xi)) |
// over half-open anchored boxes.

/// Closed form for d = 1: D* = 1/(2n) + max_i |x_(i) - (2i-1)/(2n)|.
inline DiscrepancyResult star_discrepancy_1d(const PointSet& points) {
    if (points.dim() != 1) throw DomainError("star_discrepancy_1d: point set has dimension " + std::to_string(points.dim()));
    std::vector<double> x(points.coordinates().begin(), points.coordinates().end());
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        worst = std::max(worst, std::abs(x[i] - (2.0 * static_cast<double>(i) + 1.0) / (2.0 * n)));
    return {1.0 / (2.0 * n) + worst, DiscrepancyMode::Exact, x.size(), 1};
}

namespace detail {

/// Sorted distinct coordinates of dimension j, with 1 appended.
inline std::vector<double> critical_coordinates(const PointSet& points, std::size_t j) {
    std::vector<double> c;
    c.reserve(points.size() + 1);
    for (std::size_t i = 0; i < points.size(); ++i) c.push_back(points[i][j]);
    c.push_back(1.0);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
}

}  // namespace detail

/// Work estimate (corner count times n) of star_discrepancy_exact.
inline double exact_discrepancy_cost(const PointSet& points) {
    double corners = 1.0;
    for (std::size_t j = 0; j < points.dim(); ++j)
        corners *= static_cast<double>(detail::critical_coordinates(points, j).size());
    return corners * static_cast<double>(points.size());
}

/// Exact D* by enumerating every critical corner. Upper corners take each
/// coordinate from the point coordinates in that dimension plus 1. At each
/// corner the open count (points strictly inside) gives the supremum of
/// vol - count/n, the closed count (points with x <= corner) the supremum of
/// count/n - vol approached from above.
///
/// Throws BudgetExceeded when the corner count times n exceeds `budget`.
inline DiscrepancyResult star_discrepancy_exact(const PointSet& points, double budget = kDefaultDiscrepancyBudget) {
    const std::size_t d = points.dim();
    const std::size_t n = points.size();

    std::vector<std::vector<double>> grid(d);
    double corners = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
        grid[j] = detail::critical_coordinates(points, j);
        corners *= static_cast<double>(grid[j].size());
    }
    const double cost = corners * static_cast<double>(n);
    if (cost > budget) throw BudgetExceeded(cost, budget);

    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> corner(d);
    double best = 0.0;
    while (true) {
        double volume = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            corner[j] = grid[j][idx[j]];
            volume *= corner[j];
        }
        std::size_t open = 0;
        std::size_t closed = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto p = points[i];
            bool in_open = true;
            bool in_closed = true;
            for (std::size_t j = 0; j < d && in_closed; ++j) {
                if (p[j] >= corner[j]) in_open = false;
                if (p[j] > corner[j]) in_closed = false;
            }
            open += in_open;
            closed += in_closed;
        }
        best = std::max(best, volume - static_cast<double>(open) * inv_n);
        best = std::max(best, static_cast<double>(closed) * inv_n - volume);

        std::size_t j = 0;
        while (j < d && ++idx[j] == grid[j].size()) idx[j++] = 0;
        if (j == d) break;
    }
    return {best, DiscrepancyMode::Exact, n, d};
}

/// Certified lower bound on D* from corners on the uniform grid {k/g : k = 1..g}^d.
///
/// For each grid corner the closed count is charged against the volume of the
/// corner snapped down to the nearest point coordinate (same count, smaller
/// box) and the open count against the corner snapped up (same count, larger
/// box). Counts for all corners come from a d-dimensional prefix sum, so the
/// cost is O(g^d d + n d log g). Every grid for g is contained in the grid for
/// any multiple of g, so refining by an integer factor never lowers the bound.
inline DiscrepancyResult star_discrepancy_lower_bound(const PointSet& points, std::size_t grid_per_dim) {
    if (grid_per_dim < 2) throw DomainError("star_discrepancy_lower_bound: grid_per_dim must be >= 2");
    const std::size_t d = points.dim();
    const std::size_t n = points.size();
    const std::size_t g = grid_per_dim;

    double cells_f = std::pow(static_cast<double>(g), static_cast<double>(d));
    if (cells_f > 5e7)
        throw ResourceError("star_discrepancy_lower_bound: grid of " + std::to_string(cells_f) + " corners is too large");
    const std::size_t cells = static_cast<std::size_t>(cells_f);

    std::vector<double> gamma(g);
    for (std::size_t k = 0; k < g; ++k) gamma[k] = static_cast<double>(k + 1) / static_cast<double>(g);

    // Per-dimension snapped volumes: down[j][k] is the largest coordinate <= gamma[k]
    // (gamma[k] itself if none), up[j][k] the smallest coordinate >= gamma[k] (1 if none).
    std::vector<std::vector<double>> down(d, std::vector<double>(g));
    std::vector<std::vector<double>> up(d, std::vector<double>(g));
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> c;
        c.reserve(n);
        for (std::size_t i = 0; i < n; ++i) c.push_back(points[i][j]);
        std::sort(c.begin(), c.end());
        for (std::size_t k = 0; k < g; ++k) {
            const auto hi = std::upper_bound(c.begin(), c.end(), gamma[k]);
            down[j][k] = hi == c.begin() ? gamma[k] : *(hi - 1);
            const auto lo = std::lower_bound(c.begin(), c.end(), gamma[k]);
            up[j][k] = lo == c.end() ? 1.0 : *lo;
        }
    }

    std::vector<std::size_t> stride(d);
    for (std::size_t j = 0, s = 1; j < d; ++j, s *= g) stride[j] = s;

    // Histogram of each point's first closed / open grid corner.
    std::vector<std::uint32_t> closed(cells, 0);
    std::vector<std::uint32_t> open(cells, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto p = points[i];
        std::size_t ci = 0;
        std::size_t oi = 0;
        bool open_reachable = true;
        for (std::size_t j = 0; j < d; ++j) {
            const auto kc = static_cast<std::size_t>(std::lower_bound(gamma.begin(), gamma.end(), p[j]) - gamma.begin());
            const auto ko = static_cast<std::size_t>(std::upper_bound(gamma.begin(), gamma.end(), p[j]) - gamma.begin());
            ci += kc * stride[j];
            if (ko == g) open_reachable = false;
            else oi += ko * stride[j];
        }
        ++closed[ci];
        if (open_reachable) ++open[oi];
    }
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t cell = 0; cell < cells; ++cell) {
            if ((cell / stride[j]) % g == 0) continue;
            closed[cell] += closed[cell - stride[j]];
            open[cell] += open[cell - stride[j]];
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    double best = 0.0;
    for (std::size_t cell = 0; cell < cells; ++cell) {
        double vol_down = 1.0;
        double vol_up = 1.0;
        for (std::size_t j = 0; j < d; ++j) {
            const std::size_t k = (cell / stride[j]) % g;
            vol_down *= down[j][k];
            vol_up *= up[j][k];
        }
        best = std::max(best, static_cast<double>(closed[cell]) * inv_n - vol_down);
        best = std::max(best, vol_up - static_cast<double>(open[cell]) * inv_n);
    }
    return {best, DiscrepancyMode::LowerBound, n, d};
}

enum class DiscrepancyStrategy { Auto, Exact, LowerBound };

/// Closed form in d = 1, exact enumeration when within budget, grid lower bound otherwise
/// (or as forced by `strategy`).
inline DiscrepancyResult star_discrepancy(const PointSet& points, DiscrepancyStrategy strategy = DiscrepancyStrategy::Auto,
                                          std::size_t grid_per_dim = 8, double budget = kDefaultDiscrepancyBudget) {
    switch (strategy) {
        case DiscrepancyStrategy::LowerBound:
            return star_discrepancy_lower_bound(points, grid_per_dim);
        case DiscrepancyStrategy::Exact:
            return points.dim() == 1 ? star_discrepancy_1d(points) : star_discrepancy_exact(points, budget);
        case DiscrepancyStrategy::Auto:
            break;
    }
    if (points.dim() == 1) return star_discrepancy_1d(points);
    if (exact_discrepancy_cost(points) <= budget) return star_discrepancy_exact(points, budget);
    return star_discrepancy_lower_bound(points, grid_per_dim);
}

}  // namespace choquet_qmc
