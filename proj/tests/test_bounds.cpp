#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "choquet_qmc/bounds.hpp"
#include "choquet_qmc/choquet.hpp"

using namespace choquet_qmc;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("modulus model", "[bounds]") {
    const auto lin = builtin("linear-1d");
    CHECK(modulus(lin, 0.05) == 0.05);
    CHECK(modulus(lin, 0.0) == 0.0);

    const auto capped = integrand_from_expression("u1", 1, 3.0, 1.0);
    CHECK(modulus(capped, 10.0) == 2.0);
    CHECK(modulus(capped, 0.1) == 0.30000000000000004);

    const auto bare = integrand_from_expression("u1", 1);
    CHECK_FALSE(modulus(bare, 0.1));
    CHECK_FALSE(modulus(bare.with_sup_norm_bound(1.0), 0.1));
    CHECK(modulus(bare, 0.0) == 0.0);

    const auto custom = bare.with_modulus([](double t) { return std::sqrt(t); });
    CHECK(modulus(custom, 0.25) == 0.5);
    CHECK_THROWS_AS(modulus(lin, -1.0), DomainError);
}

TEST_CASE("sampled modulus lower bound", "[bounds]") {
    const double lin = empirical_modulus_lower(builtin("linear-1d"), 0.1, 2000, 1);
    CHECK(lin > 0.09);
    CHECK(lin <= 0.1);

    const Integrand constant(2, [](std::span<const double>) { return 4.0; });
    CHECK(empirical_modulus_lower(constant, 0.5, 100, 1) == 0.0);

    const auto bench = builtin("paper-example");
    const double sampled = empirical_modulus_lower(bench, 0.01, 10000, 3);
    CHECK(sampled > 0.0);
    CHECK(sampled <= *modulus(bench, 0.01));
}

TEST_CASE("certificate arithmetic", "[bounds]") {
    const auto avar = Distortion::avar(0.05);
    const auto five = certify_from_rho(avar, 0.01, std::nullopt, 5);
    CHECK(five.branch == BoundBranch::FiniteDerivative);
    CHECK_THAT(five.value, WithinRel(0.8, 1e-14));
    CHECK(five.constant == 4.0);

    const auto one = certify_from_rho(avar, 1e-4, 1.0, 1);
    CHECK(one.branch == BoundBranch::FiniteDerivative);
    CHECK_THAT(one.value, WithinRel(0.002, 1e-14));
    CHECK(one.constant == 1.0);

    const auto root = Distortion::power(0.5);
    const auto general = certify_from_rho(root, 0.04, 1.0, 3);
    CHECK(general.branch == BoundBranch::GeneralPsi);
    CHECK_THAT(general.value, WithinRel(1.2, 1e-14));

    CHECK(certify_from_rho(root, 1.0, 1.0, 3).branch == BoundBranch::NoCertificate);
    CHECK(certify_from_rho(root, 0.5, std::nullopt, 3).branch == BoundBranch::NoCertificate);
    // the finite-derivative branch has no rho < 1 requirement
    CHECK(certify_from_rho(avar, 1.5, std::nullopt, 2).branch == BoundBranch::FiniteDerivative);
    CHECK(certify_from_rho(Distortion::power(1.0), 0.3, std::nullopt, 2).branch == BoundBranch::FiniteDerivative);
}

TEST_CASE("no certificate from a discrepancy lower bound", "[bounds]") {
    const auto f = builtin("paper-example");
    const auto pts = halton(5, 1000, 1);
    const auto lb = star_discrepancy_lower_bound(pts, 8);
    const auto b = theorem1_bound(f, pts, Distortion::avar(0.05), lb);
    CHECK(b.branch == BoundBranch::NoCertificate);
    CHECK(b.reason == "discrepancy is only a lower bound");
    REQUIRE(b.discrepancy);
    CHECK(b.discrepancy->mode == DiscrepancyMode::LowerBound);
}

TEST_CASE("no certificate without regularity metadata", "[bounds]") {
    const auto f = integrand_from_expression("u1*u2", 2, std::nullopt, 1.0);
    const auto pts = halton(2, 64, 1);
    const auto b = theorem1_bound(f, pts, Distortion::avar(0.1), star_discrepancy_exact(pts));
    CHECK(b.branch == BoundBranch::NoCertificate);
    CHECK_FALSE(b.reason.empty());
    CHECK_THROWS_AS(theorem1_bound(f, halton(2, 32, 1), Distortion::avar(0.1), star_discrepancy_exact(pts)),
                    DomainError);
}

TEST_CASE("certificates hold in one dimension", "[bounds][property]") {
    const auto f = builtin("linear-1d");
    for (double lambda : {0.05, 0.25, 0.5}) {
        const auto psi = Distortion::avar(lambda);
        const double truth = 1.0 - lambda / 2.0;
        for (int k = 4; k <= 14; ++k) {
            const auto pts = halton(1, std::size_t{1} << k, 1);
            const auto b = theorem1_bound(f, pts, psi, star_discrepancy(pts));
            REQUIRE(b.branch == BoundBranch::FiniteDerivative);
            REQUIRE(b.constant == 1.0);
            REQUIRE_THAT(b.value, WithinRel(b.discrepancy->value / lambda, 1e-14));
            const double err = std::abs(qmc_estimate(f, pts, psi).value - truth);
            INFO("lambda = " << lambda << " n = " << pts.size() << " err = " << err << " bound = " << b.value);
            REQUIRE(err <= b.value);
        }
    }
}

TEST_CASE("certificates hold in two dimensions", "[bounds][property]") {
    // (U1 + U2)/2 has a triangular law: S(x) = 1 - 2x^2 on [0,1/2], 2(1-x)^2 on [1/2,1].
    const auto f = integrand_from_expression("(u1 + u2)/2", 2, 1.0, 1.0);
    const auto survival = [](double x) {
        if (x <= 0.0) return 1.0;
        if (x >= 1.0) return 0.0;
        return x <= 0.5 ? 1.0 - 2.0 * x * x : 2.0 * (1.0 - x) * (1.0 - x);
    };
    for (const auto& psi : {Distortion::avar(0.25), Distortion::power(0.5)}) {
        const double truth = choquet_by_survival(survival, 0.0, 1.0, psi, 1000000);
        for (std::size_t n : {16u, 64u, 256u}) {
            const auto pts = halton(2, n, 1);
            const auto b = theorem1_bound(f, pts, psi, star_discrepancy_exact(pts));
            REQUIRE(b.branch != BoundBranch::NoCertificate);
            REQUIRE(std::abs(qmc_estimate(f, pts, psi).value - truth) <= b.value);
        }
    }
}

TEST_CASE("one-dimensional certificate decays like 1/n", "[bounds][property]") {
    const auto f = builtin("linear-1d");
    const auto psi = Distortion::avar(0.05);
    std::vector<double> xs, ys;
    for (int k = 4; k <= 14; ++k) {
        const auto pts = halton(1, std::size_t{1} << k, 1);
        xs.push_back(std::log(double(pts.size())));
        ys.push_back(std::log(theorem1_bound(f, pts, psi, star_discrepancy(pts)).value));
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / double(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    CHECK_THAT(sxy / sxx, WithinAbs(-1.0, 0.3));
}

TEST_CASE("branch follows the distortion", "[bounds][property]") {
    const auto f = builtin("paper-example");
    const auto pts = halton(5, 16, 1);
    const auto disc = star_discrepancy_exact(pts);
    for (const auto& psi : {Distortion::avar(0.05), Distortion::identity(), parse_distortion("pwl:0.2,0.6")}) {
        const auto b = theorem1_bound(f, pts, psi, disc);
        CHECK(b.branch == BoundBranch::FiniteDerivative);
        CHECK(b.constant == 4.0);
    }
    // power(1/2) has an infinite slope at 0 and rho = min(6 t, 2e) >= 1 for this small n
    const auto b = theorem1_bound(f, pts, Distortion::power(0.5), disc);
    CHECK(b.branch == BoundBranch::NoCertificate);
    CHECK(b.reason.find("not < 1") != std::string::npos);
}
