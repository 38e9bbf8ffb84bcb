#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "choquet_qmc/errors.hpp"

namespace choquet_qmc {

namespace detail {

inline constexpr std::size_t kPrimeCount = 100;

constexpr std::array<std::uint32_t, kPrimeCount> make_prime_table() {
    std::array<std::uint32_t, kPrimeCount> primes{};
    std::size_t found = 0;
    for (std::uint32_t c = 2; found < kPrimeCount; ++c) {
        bool prime = true;
        for (std::size_t k = 0; k < found && primes[k] * primes[k] <= c; ++k) {
            if (c % primes[k] == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes[found++] = c;
    }
    return primes;
}

}  // namespace detail

/// The first 100 primes; Halton coordinate j uses base kPrimes[j].
inline constexpr std::array<std::uint32_t, detail::kPrimeCount> kPrimes = detail::make_prime_table();
static_assert(kPrimes[0] == 2 && kPrimes[4] == 11 && kPrimes[99] == 541);

/// Radical inverse: reflects the base-b digits of index about the radix point.
inline double radical_inverse(std::uint64_t base, std::uint64_t index) {
    if (base < 2) throw DomainError("radical_inverse: base must be >= 2");
    if (index < 1) throw DomainError("radical_inverse: index must be >= 1");

    // Integer digit reversal gives a single correctly rounded division while
    // base^k stays below 2^53; otherwise accumulate in floating point.
    constexpr std::uint64_t kExact = std::uint64_t{1} << 53;
    std::uint64_t reversed = 0;
    std::uint64_t scale = 1;
    std::uint64_t i = index;
    while (i > 0 && scale <= kExact / base) {
        reversed = reversed * base + i % base;
        scale *= base;
        i /= base;
    }
    if (i == 0) return static_cast<double>(reversed) / static_cast<double>(scale);

    const double inv_base = 1.0 / static_cast<double>(base);
    double result = 0.0;
    double factor = inv_base;
    for (i = index; i > 0; i /= base) {
        result += factor * static_cast<double>(i % base);
        factor *= inv_base;
    }
    return result < 1.0 ? result : std::nextafter(1.0, 0.0);
}

struct HaltonProvenance { std::uint64_t start_index; };
struct PseudoRandomProvenance { std::uint64_t seed; };
struct ExplicitProvenance {};
using Provenance = std::variant<HaltonProvenance, PseudoRandomProvenance, ExplicitProvenance>;

/// n points in [0,1)^d, stored row-major. Immutable after construction.
class PointSet {
public:
    /// Validates shape and range; every coordinate must lie in [0,1).
    PointSet(std::size_t dim, std::vector<double> coordinates, Provenance provenance = ExplicitProvenance{})
        : dim_(dim), data_(std::move(coordinates)), provenance_(provenance) {
        if (dim_ == 0) throw DomainError("PointSet: dimension must be >= 1");
        if (data_.empty() || data_.size() % dim_ != 0)
            throw InvalidInput("PointSet: need n >= 1 points with exactly dim coordinates each");
        for (double x : data_)
            if (!(x >= 0.0 && x < 1.0)) throw DomainError("PointSet: coordinate " + detail::format_real(x) + " outside [0,1)");
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return data_.size() / dim_; }
    const Provenance& provenance() const noexcept { return provenance_; }

    std::span<const double> operator[](std::size_t i) const { return {data_.data() + i * dim_, dim_}; }
    std::span<const double> coordinates() const noexcept { return data_; }

    /// First m points, same provenance.
    PointSet prefix(std::size_t m) const {
        if (m == 0 || m > size()) throw DomainError("PointSet::prefix: m out of range");
        return PointSet(dim_, std::vector<double>(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(m * dim_)),
                        provenance_);
    }

    friend bool operator==(const PointSet& a, const PointSet& b) {
        return a.dim_ == b.dim_ && a.data_ == b.data_;
    }

private:
    std::size_t dim_;
    std::vector<double> data_;
    Provenance provenance_;
};

/// Points start_index, ..., start_index+n-1 of the Halton sequence in the first dim prime bases.
inline PointSet halton(std::size_t dim, std::size_t n, std::uint64_t start_index = 1) {
    if (dim < 1 || n < 1) throw DomainError("halton: dim and n must be >= 1");
    if (start_index < 1) throw DomainError("halton: start_index must be >= 1");
    if (dim > kPrimes.size())
        throw ResourceError("halton: dimension " + std::to_string(dim) + " exceeds the prime table (" +
                            std::to_string(kPrimes.size()) + ")");
    std::vector<double> data(dim * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < dim; ++j) data[i * dim + j] = radical_inverse(kPrimes[j], start_index + i);
    return PointSet(dim, std::move(data), HaltonProvenance{start_index});
}

/// Maps a 64-bit word to [0,1) using its top 53 bits.
inline double unit_interval_from_bits(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// IID uniform points from std::mt19937_64(seed), consumed row-major, so
/// (dim, n, seed) is a prefix of (dim, n+m, seed). Bit-identical across
/// platforms: the engine is fully specified by the standard and the mapping
/// to [0,1) does not use std::uniform_real_distribution.
inline PointSet pseudo_random(std::size_t dim, std::size_t n, std::uint64_t seed) {
    if (dim < 1 || n < 1) throw DomainError("pseudo_random: dim and n must be >= 1");
    std::mt19937_64 engine(seed);
    std::vector<double> data(dim * n);
    for (double& x : data) x = unit_interval_from_bits(engine());
    return PointSet(dim, std::move(data), PseudoRandomProvenance{seed});
}

// CSV: header u1,...,ud then one point per row, 17 significant digits.

inline void write_csv(std::ostream& out, const PointSet& points) {
    for (std::size_t j = 0; j < points.dim(); ++j) out << (j ? ",u" : "u") << (j + 1);
    out << '\n';
    char buf[32];
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto row = points[i];
        for (std::size_t j = 0; j < row.size(); ++j) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[j], std::chars_format::general, 17);
            if (j) out << ',';
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

inline PointSet read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("point CSV: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::size_t dim = 0;
    {
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const auto comma = std::min(line.find(',', pos), line.size());
            const std::string expected = "u" + std::to_string(dim + 1);
            if (line.compare(pos, comma - pos, expected) != 0)
                throw InvalidInput("point CSV: header must be u1,...,ud, got '" + line + "'");
            ++dim;
            pos = comma + 1;
        }
    }

    std::vector<double> data;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t fields = 0;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        while (true) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(p, end, v);
            if (ec != std::errc() || (ptr != end && *ptr != ','))
                throw InvalidInput("point CSV: bad number on line " + std::to_string(row));
            data.push_back(v);
            ++fields;
            if (ptr == end) break;
            p = ptr + 1;
        }
        if (fields != dim)
            throw InvalidInput("point CSV: line " + std::to_string(row) + " has " + std::to_string(fields) +
                               " fields, expected " + std::to_string(dim));
    }
    if (data.empty()) throw InvalidInput("point CSV: no points");
    return PointSet(dim, std::move(data));
}

}  // namespace choquet_qmc
