#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "renyi/core.hpp"
#include "renyi/hardness.hpp"

using namespace renyi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("two_point_integer_pair k=100 alpha=2 delta=0.1") {
    auto inst = two_point_integer_pair(100, 2, 0.1);
    REQUIRE_THAT(inst.p[0], WithinAbs(0.1, 1e-15));
    REQUIRE_THAT(inst.p[1], WithinAbs(0.9 / 99.0, 1e-15));
    REQUIRE_THAT(inst.q[0], WithinAbs(0.11, 1e-15));
    // high-precision oracle values
    REQUIRE_THAT(exact_renyi_entropy(inst.p, 2.0), WithinAbs(4.007333185232471, 1e-12));
    REQUIRE_THAT(exact_renyi_entropy(inst.q, 2.0), WithinAbs(3.906985211398189, 1e-12));
    REQUIRE_THAT(inst.entropy_gap, WithinAbs(0.100347973834282, 1e-12));
}

TEST_CASE("two_point gap vanishes with delta and scales linearly") {
    REQUIRE(two_point_integer_pair(100, 2, 1e-6).entropy_gap < 1e-4);
    for (double delta : {0.01, 0.05, 0.1}) {
        double gap = two_point_integer_pair(10000, 2, delta).entropy_gap;
        REQUIRE(gap / delta >= 0.5);
        REQUIRE(gap / delta <= 2.0);
    }
    REQUIRE_THROWS_AS(two_point_integer_pair(100, 2, -0.1), InvalidDelta);
    REQUIRE_THROWS_AS(two_point_integer_pair(4, 2, 3.0), InvalidDelta);
}

TEST_CASE("newton_girard_vectors d=2 delta=0.1 closed form") {
    auto v = newton_girard_vectors(2, 0.1);
    REQUIRE_THAT(v.y[0], WithinAbs(0.9083920216900384, 1e-12));
    REQUIRE_THAT(v.y[1], WithinAbs(2.0916079783099616, 1e-12));
    REQUIRE_THAT(v.power_sum(v.y, 1.0), WithinAbs(3.0, 1e-12));
    REQUIRE_THAT(v.power_sum(v.y, 2.0), WithinAbs(5.2, 1e-12));
}

TEST_CASE("newton_girard invariants for d = 2..6") {
    for (int d = 2; d <= 6; ++d) {
        auto v = newton_girard_vectors(d);
        REQUIRE(v.delta > 0.0);
        for (double e : v.x) REQUIRE(e > 0.0);
        for (double e : v.y) REQUIRE(e > 0.0);
        for (int r = 1; r < d; ++r)
            REQUIRE_THAT(v.power_sum(v.y, r), WithinRel(v.power_sum(v.x, r), 1e-9));
        REQUIRE_THAT(v.power_sum(v.y, d) - v.power_sum(v.x, d),
                     WithinRel(d * v.delta, 1e-9));
    }
}

TEST_CASE("newton_girard alpha-norms separate at fractional orders") {
    auto v = newton_girard_vectors(4);
    double px = v.power_sum(v.x, 1.5), py = v.power_sum(v.y, 1.5);
    REQUIRE(std::abs(px - py) > 1e-6 * v.delta);
}

TEST_CASE("matched_moment_distributions") {
    auto v = newton_girard_vectors(2, 0.1);
    auto inst = matched_moment_distributions(v, 50, 1.5);
    REQUIRE(inst.p.support_size() == 100);
    double expect = 3.0 * std::abs(std::log(v.norm(v.x, 1.5) / v.norm(v.y, 1.5)));
    REQUIRE_THAT(inst.entropy_gap, WithinAbs(expect, 1e-12));
    // gap agrees with the exact entropy difference
    REQUIRE_THAT(std::abs(exact_renyi_entropy(inst.p, 1.5) - exact_renyi_entropy(inst.q, 1.5)),
                 WithinAbs(inst.entropy_gap, 1e-10));

    // low-order power sums of the two distributions coincide
    for (int a = 1; a < 2; ++a)
        REQUIRE_THAT(exact_power_sum(inst.q, a), WithinRel(exact_power_sum(inst.p, a), 1e-12));
    auto v4 = newton_girard_vectors(4, 0.05);
    auto inst4 = matched_moment_distributions(v4, 25, 3.5);
    for (int a = 1; a < 4; ++a)
        REQUIRE_THAT(exact_power_sum(inst4.q, a),
                     WithinRel(exact_power_sum(inst4.p, a), 1e-12));

    // degenerate delta = 0 gives x = y and a zero gap
    auto v0 = newton_girard_vectors(2, 0.0);
    REQUIRE_THAT(matched_moment_distributions(v0, 10, 1.5).entropy_gap, WithinAbs(0.0, 1e-12));
}

TEST_CASE("scaled_pair_alpha_lt1") {
    auto v = newton_girard_vectors(2, 0.1);
    auto inst = scaled_pair_alpha_lt1(v, 100, 0.5, 0.5);
    REQUIRE_THAT(inst.p[0], WithinAbs(0.9, 1e-12));  // 1 - k^(-beta) = 1 - 0.1
    REQUIRE(inst.p.support_size() == 201);
    REQUIRE(inst.entropy_gap > 0.0);

    REQUIRE_THROWS_AS(scaled_pair_alpha_lt1(v, 100, 0.5, 1.5), BetaTooLarge);
    REQUIRE_THROWS_AS(scaled_pair_alpha_lt1(v, 100, 1.5, 0.1), InvalidParameters);

    // as k grows the gap approaches (alpha/(1-alpha)) |ln ||x||_a / ||y||_a|
    const double limit =
        0.5 / 0.5 * std::abs(std::log(v.norm(v.x, 0.5) / v.norm(v.y, 0.5)));
    auto big = scaled_pair_alpha_lt1(v, 1000000, 0.5, 0.3);
    REQUIRE_THAT(big.entropy_gap, WithinRel(limit, 0.05));

    // beta -> 0 continuity: the gap stays close to the same limit
    auto tiny = scaled_pair_alpha_lt1(v, 1000000, 0.5, 1e-9);
    REQUIRE_THAT(tiny.entropy_gap, WithinRel(limit, 0.05));
}

TEST_CASE("heavy_element_instance") {
    auto p = heavy_element_instance(1000, 0.5, 0.5, 10000);
    REQUIRE_THAT(p[0], WithinAbs(0.995, 1e-12));
    REQUIRE_THAT(p[1], WithinAbs(5e-6, 1e-18));
    REQUIRE(p.support_size() == 1001);
    REQUIRE(std::isfinite(exact_renyi_entropy(p, 0.5)));
    REQUIRE_THROWS_AS(heavy_element_instance(1000, 0.5, 2.0, 1), InvalidParameters);
}

TEST_CASE("hellinger_sq") {
    auto u = validate_distribution({0.5, 0.5});
    REQUIRE_THAT(hellinger_sq(u, u), WithinAbs(0.0, 1e-15));
    auto a = validate_distribution({1.0, 0.0});
    auto b = validate_distribution({0.0, 1.0});
    REQUIRE_THAT(hellinger_sq(a, b), WithinAbs(2.0, 1e-15));

    auto inst = two_point_integer_pair(100, 2, 0.1);
    double expect = std::pow(std::sqrt(0.11) - std::sqrt(0.1), 2) +
                    99.0 * std::pow(std::sqrt(0.89 / 99.0) - std::sqrt(0.9 / 99.0), 2);
    REQUIRE_THAT(hellinger_sq(inst.p, inst.q), WithinAbs(expect, 1e-15));

    auto c = validate_distribution({1.0 / 3, 1.0 / 3, 1.0 / 3});
    REQUIRE_THROWS_AS(hellinger_sq(u, c), SupportMismatch);
}

TEST_CASE("tv_product_bound") {
    auto u = validate_distribution({0.5, 0.5});
    REQUIRE_THAT(tv_product_bound(u, u, 50), WithinAbs(0.0, 1e-15));

    // pair engineered to have squared Hellinger distance exactly 0.02
    auto q = validate_distribution({0.63965668619869226, 1.0 - 0.63965668619869226});
    REQUIRE_THAT(hellinger_sq(u, q), WithinAbs(0.02, 1e-12));
    REQUIRE_THAT(tv_product_bound(u, q, 10), WithinAbs(0.30922148209850413, 1e-12));

    double prev = 0.0;
    for (std::uint64_t n = 1; n <= 100; ++n) {
        double b = tv_product_bound(u, q, n);
        REQUIRE(b >= prev - 1e-15);
        REQUIRE(b <= 1.0);
        prev = b;
    }
}

TEST_CASE("profile_distance_bound") {
    // identical distributions: only the epsilon/2 term remains
    std::vector<double> flat(2000, 1.0 / 2000.0);
    auto u = validate_distribution(flat);
    REQUIRE_THAT(profile_distance_bound(u, u, 10.0, 0.5), WithinAbs(0.25, 1e-12));

    // matched-moment pair: the first surviving term sits at order d
    auto v = newton_girard_vectors(3, 0.01);
    auto inst = matched_moment_distributions(v, 2000, 2.5);
    const double n = 3.0, eps = 0.9;
    double expected_leading =
        5.0 * std::pow(n, 3) * std::abs(exact_power_sum(inst.p, 3) - exact_power_sum(inst.q, 3));
    double bound = profile_distance_bound(inst.p, inst.q, n, eps);
    REQUIRE(bound >= eps / 2.0);
    REQUIRE_THAT(bound - eps / 2.0, WithinRel(expected_leading, 0.05));

    // precondition: all probabilities must fit under eps/(40 n)
    REQUIRE_THROWS_AS(profile_distance_bound(u, u, 1000.0, 0.5), PreconditionViolated);
}

TEST_CASE("lecam_certificate") {
    // degenerate zero-gap instance is vacuous: risk 1/2
    auto v0 = newton_girard_vectors(2, 0.0);
    auto degen = matched_moment_distributions(v0, 10, 1.5);
    auto cert0 = lecam_certificate(degen, 25, CertificateMode::product, 0.1);
    REQUIRE_THAT(cert0.gap, WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(cert0.risk_lower_bound, WithinAbs(0.5, 1e-12));

    auto inst = two_point_integer_pair(10000, 2, 0.05);
    auto cert = lecam_certificate(inst, 100, CertificateMode::product, 0.1);
    REQUIRE_THAT(cert.distance_bound, WithinAbs(tv_product_bound(inst.p, inst.q, 100), 0.0));
    REQUIRE_THAT(cert.risk_lower_bound, WithinAbs((1.0 - cert.distance_bound) / 2.0, 1e-15));

    double prev = 1.0;
    for (std::uint64_t n = 1; n <= 100; ++n) {
        auto c = lecam_certificate(inst, n, CertificateMode::product, 0.1);
        REQUIRE(c.risk_lower_bound <= prev + 1e-15);
        prev = c.risk_lower_bound;
    }

    // profile mode composes with the profile distance bound
    auto v = newton_girard_vectors(3, 0.01);
    auto mm = matched_moment_distributions(v, 2000, 2.5);
    auto pc = lecam_certificate(mm, 3, CertificateMode::profile, 0.9);
    REQUIRE_THAT(pc.distance_bound,
                 WithinAbs(std::min(1.0, profile_distance_bound(mm.p, mm.q, 3.0, 0.9)), 0.0));
}
