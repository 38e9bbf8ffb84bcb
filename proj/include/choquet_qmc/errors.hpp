#pragma once

#include <charconv>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace choquet_qmc {

namespace detail {

/// Shortest decimal form that round-trips.
inline std::string format_real(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace detail

/// Argument outside the mathematical domain of an operation (t outside [0,1],
/// base < 2, mismatched dimensions, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed user input that could be fixed by the caller: distortion specs,
/// knot lists, CSV files, discrete distributions.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A fixed-size resource (prime table, work budget) is too small for the request.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exact star-discrepancy enumeration would exceed the configured work budget.
class BudgetExceeded : public ResourceError {
public:
    BudgetExceeded(double estimated_cost, double budget)
        : ResourceError("exact star discrepancy needs ~" + std::to_string(estimated_cost) +
                        " steps (budget " + std::to_string(budget) +
                        "); use star_discrepancy_lower_bound instead"),
          estimated_cost_(estimated_cost),
          budget_(budget) {}

    double estimated_cost() const noexcept { return estimated_cost_; }
    double budget() const noexcept { return budget_; }

private:
    double estimated_cost_;
    double budget_;
};

/// An integrand failed (or produced a non-finite value) at a specific point.
class EvaluationError : public std::runtime_error {
public:
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
    EvaluationError(const std::string& what, std::size_t point_index)
        : std::runtime_error(what + " (point index " + std::to_string(point_index) + ")"),
          point_index_(point_index),
          has_index_(true) {}

    bool has_point_index() const noexcept { return has_index_; }
    std::size_t point_index() const noexcept { return point_index_; }

private:
    std::size_t point_index_ = 0;
    bool has_index_ = false;
};

}  // namespace choquet_qmc
