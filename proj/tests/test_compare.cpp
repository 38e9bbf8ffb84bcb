#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "choquet_qmc/compare.hpp"

using namespace choquet_qmc;

TEST_CASE("sweep rows", "[compare]") {
    const auto f = builtin("linear-1d");
    std::size_t seen = 0;
    const auto rows = compare_sweep(f, Distortion::avar(0.05), {100, 1000, 300, 9, 1},
                                    [&](const CompareRow&) { ++seen; });
    REQUIRE(rows.size() == 4);
    CHECK(seen == 4);
    CHECK(rows[0].n == 100);
    CHECK(rows[3].n == 1000);
    for (const auto& r : rows) CHECK(r.seed == 9);

    CHECK(compare_sweep(f, Distortion::identity(), {10, 25, 10}).back().n == 20);
    CHECK_THROWS_AS(compare_sweep(f, Distortion::identity(), {10, 5, 1}), DomainError);
    CHECK_THROWS_AS(compare_sweep(f, Distortion::identity(), {10, 20, 0}), DomainError);
}

TEST_CASE("sweep rows equal standalone estimates bit for bit", "[compare][property]") {
    const auto f = builtin("paper-example");
    const auto psi = Distortion::avar(0.05);
    const SweepSpec spec{500, 2000, 500, 3, 1};
    for (const auto& r : compare_sweep(f, psi, spec)) {
        REQUIRE(r.qmc == qmc_estimate(f, halton(5, r.n, 1), psi).value);
        REQUIRE(r.mc == mc_estimate(f, 5, r.n, 3, psi).value);
    }
}

TEST_CASE("identity distortion gives prefix means", "[compare]") {
    const auto f = builtin("linear-1d");
    const auto rows = compare_sweep(f, Distortion::identity(), {8, 32, 8, 0, 1});
    const auto pts = halton(1, 32, 1);
    for (const auto& r : rows) {
        const auto c = pts.coordinates();
        const double mean = std::accumulate(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(r.n), 0.0) / double(r.n);
        REQUIRE(std::abs(r.qmc - mean) <= 1e-15);
    }
}

TEST_CASE("benchmark estimates stay inside the range of the integrand", "[compare]") {
    const auto rows = compare_sweep(builtin("paper-example"), Distortion::avar(0.05), {1000, 5000, 1000, 0, 1});
    for (const auto& r : rows) {
        CHECK(r.qmc > std::exp(-2.0));
        CHECK(r.qmc <= 1.0);
        CHECK(r.mc > std::exp(-2.0));
        CHECK(r.mc <= 1.0);
    }
}

TEST_CASE("compare CSV round trip", "[compare][csv]") {
    const auto rows = compare_sweep(builtin("paper-example"), Distortion::avar(0.05), {100, 400, 100, 12345, 1});
    std::stringstream buffer;
    write_compare_csv(buffer, rows);
    const std::string text = buffer.str();
    CHECK(text.rfind("n,qmc,mc,seed\n", 0) == 0);

    std::stringstream in(text);
    const auto back = read_compare_csv(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].n == rows[i].n);
        CHECK(back[i].qmc == rows[i].qmc);
        CHECK(back[i].mc == rows[i].mc);
        CHECK(back[i].seed == rows[i].seed);
    }
}

TEST_CASE("compare CSV reader rejects malformed input", "[compare][csv]") {
    const auto read = [](const std::string& text) {
        std::stringstream in(text);
        return read_compare_csv(in);
    };
    CHECK(read("n,qmc,mc,seed\r\n10,0.5,0.25,0\r\n").size() == 1);
    CHECK_THROWS_AS(read("n,qmc,mc\n10,0.5,0.25\n"), InvalidInput);
    CHECK_THROWS_AS(read("n,qmc,mc,seed\n10,0.5,0.25\n"), InvalidInput);
    CHECK_THROWS_AS(read("n,qmc,mc,seed\n10,0.5,0.25,0,1\n"), InvalidInput);
    CHECK_THROWS_AS(read("n,qmc,mc,seed\n10,0.5,0.25,0,\n"), InvalidInput);
    CHECK_THROWS_AS(read("n,qmc,mc,seed\n10,abc,0.25,0\n"), InvalidInput);
    CHECK_THROWS_AS(read("n,qmc,mc,seed\n20,0.5,0.25,0\n10,0.5,0.25,0\n"), InvalidInput);
    CHECK_THROWS_AS(read(""), InvalidInput);
}
