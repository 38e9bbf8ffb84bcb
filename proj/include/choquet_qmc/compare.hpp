#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "choquet_qmc/choquet.hpp"
#include "choquet_qmc/distortion.hpp"
#include "choquet_qmc/errors.hpp"
#include "choquet_qmc/integrand.hpp"
#include "choquet_qmc/pointset.hpp"

namespace choquet_qmc {

struct CompareRow {
    std::size_t n;
    double qmc;
    double mc;
    std::uint64_t seed;
};

struct SweepSpec {
    std::size_t n_start = 10000;
    std::size_t n_end = 100000;
    std::size_t n_step = 10000;
    std::uint64_t seed = 0;
    std::uint64_t start_index = 1;
};

/// QMC vs MC estimates over the sweep n = n_start, n_start + n_step, ..., <= n_end.
///
/// Both methods use nested samples: f is evaluated once on halton(dim, n_end)
/// and on pseudo_random(dim, n_end, seed), and each row sorts the length-n
/// prefix. Each QMC value is bit-identical to qmc_estimate over halton(dim, n).
/// `on_row` (optional) is called after each row, e.g. for progress output.
inline std::vector<CompareRow> compare_sweep(const Integrand& f, const Distortion& psi, const SweepSpec& spec,
                                             const std::function<void(const CompareRow&)>& on_row = {}) {
    if (spec.n_start < 1 || spec.n_step < 1 || spec.n_start > spec.n_end)
        throw DomainError("compare: need 1 <= n_start <= n_end and n_step >= 1");
    const std::size_t last = spec.n_start + (spec.n_end - spec.n_start) / spec.n_step * spec.n_step;

    const std::vector<double> qmc_values = evaluate_on(f, halton(f.dim(), last, spec.start_index));
    const std::vector<double> mc_values = evaluate_on(f, pseudo_random(f.dim(), last, spec.seed));

    std::vector<CompareRow> rows;
    std::vector<double> scratch;
    auto prefix_estimate = [&](const std::vector<double>& all, std::size_t n) {
        scratch.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n));
        std::stable_sort(scratch.begin(), scratch.end());
        return choquet_from_sorted(scratch, psi);
    };
    for (std::size_t n = spec.n_start; n <= last; n += spec.n_step) {
        rows.push_back({n, prefix_estimate(qmc_values, n), prefix_estimate(mc_values, n), spec.seed});
        if (on_row) on_row(rows.back());
    }
    return rows;
}

inline void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
    out << "n,qmc,mc,seed\n";
    char buf[32];
    auto put = [&](double v) {
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
        out.write(buf, ptr - buf);
    };
    for (const CompareRow& r : rows) {
        out << r.n << ',';
        put(r.qmc);
        out << ',';
        put(r.mc);
        out << ',' << r.seed << '\n';
    }
}

/// Reads the `n,qmc,mc,seed` format back; rows must have strictly increasing n.
inline std::vector<CompareRow> read_compare_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || (line != "n,qmc,mc,seed" && line != "n,qmc,mc,seed\r"))
        throw InvalidInput("compare CSV: header must be 'n,qmc,mc,seed'");
    std::vector<CompareRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        CompareRow r{};
        const char* p = line.data();
        const char* end = p + line.size();
        auto field = [&](auto& v, bool last) {
            const auto [ptr, ec] = std::from_chars(p, end, v);
            const bool at_end = ptr == end;
            if (ec != std::errc() || at_end != last || (!at_end && *ptr != ','))
                throw InvalidInput("compare CSV: malformed line " + std::to_string(lineno) + ": '" + line + "'");
            p = ptr == end ? end : ptr + 1;
        };
        field(r.n, false);
        field(r.qmc, false);
        field(r.mc, false);
        field(r.seed, true);
        if (!rows.empty() && r.n <= rows.back().n)
            throw InvalidInput("compare CSV: n must be strictly increasing (line " + std::to_string(lineno) + ")");
        rows.push_back(r);
    }
    return rows;
}

}  // namespace choquet_qmc
