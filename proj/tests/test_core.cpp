#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "renyi/core.hpp"
#include "renyi/rng.hpp"
#include "renyi/sampling.hpp"

using namespace renyi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("validate_distribution accepts proper vectors") {
    REQUIRE(validate_distribution({0.5, 0.5}).support_size() == 2);
    REQUIRE(validate_distribution({0.2, 0.3, 0.5}).support_size() == 3);
    auto p = validate_distribution({0.25, 0.0, 0.75});
    REQUIRE(p[1] == 0.0);  // zeros are allowed
}

TEST_CASE("validate_distribution rejects bad vectors") {
    REQUIRE_THROWS_AS(validate_distribution({0.5, -0.5, 1.0}), NegativeEntry);
    REQUIRE_THROWS_AS(validate_distribution({0.5, 0.4}), SumOutOfTolerance);
    REQUIRE_THROWS_AS(validate_distribution({}), SumOutOfTolerance);
}

TEST_CASE("exact_power_sum known values") {
    auto u4 = validate_distribution({0.25, 0.25, 0.25, 0.25});
    REQUIRE_THAT(exact_power_sum(u4, 2.0), WithinAbs(0.25, 1e-15));

    // five symbols at 1/20, five at 3/20
    std::vector<double> step(10);
    for (int i = 0; i < 10; ++i) step[static_cast<std::size_t>(i)] = i < 5 ? 0.05 : 0.15;
    auto s10 = validate_distribution(step);
    REQUIRE_THAT(exact_power_sum(s10, 2.0), WithinAbs(0.125, 1e-15));

    // alpha = 1 recovers the total mass for anything
    auto z = make_distribution({DistributionKind::zipf, 50, 1.0, 1.0});
    REQUIRE_THAT(exact_power_sum(z, 1.0), WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(exact_power_sum(u4, 1.0), WithinAbs(1.0, 1e-15));
}

TEST_CASE("exact_renyi_entropy known values") {
    auto u4 = validate_distribution({0.25, 0.25, 0.25, 0.25});
    REQUIRE_THAT(exact_renyi_entropy(u4, 2.0), WithinAbs(std::log(4.0), 1e-12));

    std::vector<double> step(10);
    for (int i = 0; i < 10; ++i) step[static_cast<std::size_t>(i)] = i < 5 ? 0.05 : 0.15;
    REQUIRE_THAT(exact_renyi_entropy(validate_distribution(step), 2.0),
                 WithinAbs(2.0794415416798359, 1e-12));

    // high-precision summation oracle values
    auto z100 = make_distribution({DistributionKind::zipf, 100, 1.0, 1.0});
    REQUIRE_THAT(exact_renyi_entropy(z100, 2.0), WithinAbs(2.8008235911222794, 1e-12));
    REQUIRE_THAT(exact_renyi_entropy(z100, 3.0), WithinAbs(2.3773459148065388, 1e-12));
    auto z3 = make_distribution({DistributionKind::zipf, 3, 0.75, 1.0});
    REQUIRE_THAT(exact_renyi_entropy(z3, 2.0), WithinAbs(0.98364195527595548, 1e-12));

    REQUIRE_THROWS_AS(exact_renyi_entropy(u4, 1.0), AlphaIsOne);
}

TEST_CASE("entropy_from_power_sum transform and clamping") {
    auto a = entropy_from_power_sum(0.25, 2.0, 1e-300);
    REQUIRE_FALSE(a.clamped);
    REQUIRE_THAT(a.entropy, WithinAbs(std::log(4.0), 1e-12));

    auto b = entropy_from_power_sum(0.0, 2.0, 1e-12);
    REQUIRE(b.clamped);
    REQUIRE_THAT(b.entropy, WithinAbs(-std::log(1e-12), 1e-9));

    auto c = entropy_from_power_sum(2.0, 0.5, 1e-12);
    REQUIRE_FALSE(c.clamped);
    REQUIRE_THAT(c.entropy, WithinAbs(std::log(2.0) / 0.5, 1e-12));

    // consistency invariant when not clamped
    for (double ps : {0.01, 0.2, 0.9}) {
        auto e = entropy_from_power_sum(ps, 3.0, 1e-300);
        REQUIRE_THAT(e.entropy, WithinAbs(std::log(ps) / (1.0 - 3.0), 1e-12));
    }
}

TEST_CASE("histogram_from_samples") {
    std::vector<std::int64_t> s{0, 0, 0, 1};
    auto h = histogram_from_samples(s);
    REQUIRE(h.total_draws() == 4);
    REQUIRE(h.count_of(0) == 3);
    REQUIRE(h.count_of(1) == 1);
    REQUIRE(h.count_of(7) == 0);

    auto empty = histogram_from_samples(std::span<const std::int64_t>{});
    REQUIRE(empty.total_draws() == 0);
    REQUIRE(empty.counts().empty());

    std::vector<std::int64_t> rep{2, 2, 2, 2};
    auto h2 = histogram_from_samples(rep);
    REQUIRE(h2.counts().size() == 1);
    REQUIRE(h2.count_of(2) == 4);
}

TEST_CASE("profile_from_histogram") {
    std::vector<std::int64_t> s{0, 0, 0, 1};
    auto prof = profile_from_histogram(histogram_from_samples(s));
    REQUIRE(prof.phi.at(1) == 1);
    REQUIRE(prof.phi.at(3) == 1);

    std::vector<std::int64_t> s2{0, 0, 1, 1, 2, 2};
    auto prof2 = profile_from_histogram(histogram_from_samples(s2));
    REQUIRE(prof2.phi.size() == 1);
    REQUIRE(prof2.phi.at(2) == 3);

    auto prof3 = profile_from_histogram(Histogram{});
    REQUIRE(prof3.phi.empty());

    // mass identity: sum_l l * phi[l] = total draws
    RngStream rng(1, 1);
    auto p = make_distribution({DistributionKind::zipf, 40, 1.0, 1.0});
    auto h = sample_fixed(p, 500, rng);
    std::uint64_t mass = 0;
    for (auto [l, cnt] : profile_from_histogram(h).phi) mass += l * cnt;
    REQUIRE(mass == 500);
}

TEST_CASE("zipf_leading_term table cells") {
    const std::int64_t k = 1000000;
    REQUIRE_THAT(zipf_leading_term(2.0, 1.0, k).value(), WithinAbs(5.2515838289520216, 1e-9));
    REQUIRE_THAT(zipf_leading_term(2.0, 0.25, k).value(), WithinAbs(13.815510557964274, 1e-9));
    REQUIRE_THAT(zipf_leading_term(0.5, 2.0, k).value(), WithinAbs(5.2515838289520216, 1e-9));
    // alpha*beta > 1 with beta > 1 has constant-order leading behavior
    REQUIRE_FALSE(zipf_leading_term(2.0, 2.0, k).has_value());
    REQUIRE_THROWS_AS(zipf_leading_term(1.0, 1.0, k), AlphaIsOne);
}

TEST_CASE("entropy invariants on random distributions") {
    RngStream rng(42, 7);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = make_distribution({DistributionKind::dirichlet, 50, 1.0, 1.0}, &rng);
        double prev = std::numeric_limits<double>::infinity();
        for (double alpha : {0.5, 1.5, 2.0, 3.0}) {
            double h = exact_renyi_entropy(p, alpha);
            REQUIRE(h >= -1e-12);
            REQUIRE(h <= std::log(50.0) + 1e-12);
            REQUIRE(h <= prev + 1e-12);  // nonincreasing in alpha
            prev = h;
        }
    }
}

TEST_CASE("compensated accumulation survives cancellation") {
    CompensatedAccumulator acc;
    acc.add(1.0);
    for (int i = 0; i < 10000; ++i) acc.add(1e-16);
    REQUIRE_THAT(acc.value(), WithinRel(1.0 + 1e-12, 1e-15));
}
