#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "renyi/core.hpp"
#include "renyi/errors.hpp"

namespace renyi {

enum class HardConstruction {
    two_point_integer,
    matched_moments,
    matched_moments_scaled,
    heavy_element,
};

inline const char* construction_name(HardConstruction c) {
    switch (c) {
        case HardConstruction::two_point_integer: return "two_point_integer";
        case HardConstruction::matched_moments: return "matched_moments";
        case HardConstruction::matched_moments_scaled: return "matched_moments_scaled";
        case HardConstruction::heavy_element: return "heavy_element";
    }
    return "?";
}

/// A pair of distributions with an entropy gap at order alpha; the symbols of
/// p and q correspond index-by-index.
struct HardInstance {
    Distribution p;
    Distribution q;
    double entropy_gap = 0.0;
    double alpha = 0.0;
    HardConstruction construction = HardConstruction::two_point_integer;
};

/// Positive vectors whose power sums match up to order d-1 and differ by
/// exactly d*delta at order d (a constant-term shift of the root polynomial).
struct MomentMatchedVectors {
    std::vector<double> x;
    std::vector<double> y;
    double delta = 0.0;
    int d = 0;

    double power_sum(const std::vector<double>& v, double order) const {
        CompensatedAccumulator acc;
        for (double e : v) acc.add(std::pow(e, order));
        return acc.value();
    }
    double norm(const std::vector<double>& v, double order) const {
        return std::pow(power_sum(v, order), 1.0 / order);
    }
};

inline HardInstance two_point_integer_pair(std::int64_t k, int alpha, double delta) {
    if (k < 2 || alpha < 2) throw InvalidParameters("need k >= 2 and integer alpha >= 2");
    const double head = std::pow(static_cast<double>(k), -(1.0 - 1.0 / alpha));
    if (!(delta > 0.0) || (1.0 + delta) * head >= 1.0)
        throw InvalidDelta("delta must be positive with (1+delta)/k^(1-1/alpha) < 1");
    auto build = [&](double p1) {
        std::vector<double> v(static_cast<std::size_t>(k), (1.0 - p1) / static_cast<double>(k - 1));
        v[0] = p1;
        return validate_distribution(std::move(v));
    };
    HardInstance inst{build(head), build((1.0 + delta) * head), 0.0, static_cast<double>(alpha),
                      HardConstruction::two_point_integer};
    inst.entropy_gap = std::abs(exact_renyi_entropy(inst.p, inst.alpha) -
                                exact_renyi_entropy(inst.q, inst.alpha));
    return inst;
}

namespace detail {

inline double monic_from_roots(const std::vector<double>& roots, double z) {
    double v = 1.0;
    for (double r : roots) v *= (z - r);
    return v;
}

// Roots of prod(z - i) - delta by bisection in [i - 1/2, i + 1/2];
// empty result when some bracket has no sign change.
inline std::optional<std::vector<double>> shifted_roots(int d, double delta) {
    std::vector<double> base(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) base[static_cast<std::size_t>(i)] = static_cast<double>(i + 1);
    auto q = [&](double z) { return monic_from_roots(base, z) - delta; };
    std::vector<double> roots;
    for (int i = 1; i <= d; ++i) {
        double lo = i - 0.5, hi = i + 0.5;
        double qlo = q(lo), qhi = q(hi);
        if (qlo == 0.0) { roots.push_back(lo); continue; }
        if (qhi == 0.0) { roots.push_back(hi); continue; }
        if ((qlo > 0.0) == (qhi > 0.0)) return std::nullopt;
        for (int it = 0; it < 200 && hi - lo > 1e-16 * hi; ++it) {
            double mid = 0.5 * (lo + hi);
            double qm = q(mid);
            if (qm == 0.0) { lo = hi = mid; break; }
            if ((qm > 0.0) == (qlo > 0.0)) { lo = mid; qlo = qm; }
            else hi = mid;
        }
        double root = 0.5 * (lo + hi);
        if (!(root > 0.0)) return std::nullopt;
        roots.push_back(root);
    }
    return roots;
}

} // namespace detail

/// x = (1, ..., d); y = roots of prod(z - i) - delta. When delta is not
/// supplied, the largest 2^-j (j >= 0) keeping all d brackets rooted is used.
inline MomentMatchedVectors newton_girard_vectors(int d, std::optional<double> delta = {}) {
    if (d < 2) throw InvalidParameters("need d >= 2");
    MomentMatchedVectors v;
    v.d = d;
    v.x.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) v.x[static_cast<std::size_t>(i)] = static_cast<double>(i + 1);

    std::optional<std::vector<double>> roots;
    if (delta) {
        v.delta = *delta;
        roots = detail::shifted_roots(d, v.delta);
        if (!roots) throw InvalidDelta("delta too large: a bracket lost its root");
    } else {
        v.delta = 1.0;
        for (int j = 0; j < 64; ++j) {
            roots = detail::shifted_roots(d, v.delta);
            if (roots) break;
            v.delta *= 0.5;
        }
        if (!roots) throw NoConvergence("delta search failed");
    }
    v.y = std::move(*roots);
    std::sort(v.y.begin(), v.y.end());

    for (int r = 1; r < d; ++r) {
        double px = v.power_sum(v.x, r), py = v.power_sum(v.y, r);
        if (std::abs(px - py) > 1e-9 * std::abs(px))
            throw NoConvergence("moment match failed at order " + std::to_string(r));
    }
    double gap = v.power_sum(v.y, d) - v.power_sum(v.x, d);
    // tolerance is relative to the power-sum scale so delta = 0 stays valid
    if (std::abs(gap - d * v.delta) > 1e-9 * std::max(std::abs(d * v.delta),
                                                      v.power_sum(v.x, d)))
        throw NoConvergence("order-d power-sum gap is not d*delta");
    return v;
}

/// Block distributions p^x, p^y on d*k symbols: k copies of each block i with
/// mass x_i / (k ||x||_1). Low-order power sums agree; the alpha-norms differ.
inline HardInstance matched_moment_distributions(const MomentMatchedVectors& v, std::int64_t k,
                                                 double alpha) {
    if (k < 1) throw InvalidParameters("k must be >= 1");
    auto build = [&](const std::vector<double>& vec) {
        double l1 = v.power_sum(vec, 1.0);
        std::vector<double> probs;
        probs.reserve(vec.size() * static_cast<std::size_t>(k));
        for (double e : vec)
            for (std::int64_t j = 0; j < k; ++j)
                probs.push_back(e / (static_cast<double>(k) * l1));
        return validate_distribution(std::move(probs));
    };
    HardInstance inst{build(v.x), build(v.y), 0.0, alpha, HardConstruction::matched_moments};
    inst.entropy_gap =
        std::abs(alpha / (alpha - 1.0) * std::log(v.norm(v.x, alpha) / v.norm(v.y, alpha)));
    return inst;
}

/// alpha < 1 variant: a point mass 1 - k^-beta at symbol 0 plus the block
/// construction scaled by k^-beta, valid while alpha (1 + beta) < 1.
inline HardInstance scaled_pair_alpha_lt1(const MomentMatchedVectors& v, std::int64_t k,
                                          double alpha, double beta) {
    if (!(alpha < 1.0) || !(alpha > 0.0)) throw InvalidParameters("need 0 < alpha < 1");
    if (!(beta > 0.0) || alpha * (1.0 + beta) >= 1.0)
        throw BetaTooLarge("need alpha * (1 + beta) < 1");
    const double scale = std::pow(static_cast<double>(k), -beta);
    auto build = [&](const std::vector<double>& vec) {
        double l1 = v.power_sum(vec, 1.0);
        std::vector<double> probs;
        probs.reserve(vec.size() * static_cast<std::size_t>(k) + 1);
        probs.push_back(1.0 - scale);
        for (double e : vec)
            for (std::int64_t j = 0; j < k; ++j)
                probs.push_back(scale * e / (static_cast<double>(k) * l1));
        return validate_distribution(std::move(probs));
    };
    HardInstance inst{build(v.x), build(v.y), 0.0, alpha,
                      HardConstruction::matched_moments_scaled};
    inst.entropy_gap = std::abs(exact_renyi_entropy(inst.p, alpha) -
                                exact_renyi_entropy(inst.q, alpha));
    return inst;
}

/// One heavy element plus k uniform light ones; the instance on which the
/// plug-in estimator needs Omega((k / delta)^(1/alpha)) samples for alpha < 1.
inline Distribution heavy_element_instance(std::int64_t k, double alpha, double delta,
                                           std::uint64_t n) {
    if (!(alpha < 1.0) || !(alpha > 0.0) || k < 1 || n < 1)
        throw InvalidParameters("need 0 < alpha < 1, k >= 1, n >= 1");
    const double light_total = delta / std::pow(static_cast<double>(n), 1.0 - alpha);
    if (!(delta > 0.0) || light_total >= 1.0)
        throw InvalidParameters("delta / n^(1-alpha) must lie in (0, 1)");
    std::vector<double> probs(static_cast<std::size_t>(k) + 1,
                              light_total / static_cast<double>(k));
    probs[0] = 1.0 - light_total;
    return validate_distribution(std::move(probs));
}

inline double hellinger_sq(const Distribution& p, const Distribution& q) {
    if (p.support_size() != q.support_size())
        throw SupportMismatch("distributions have different support sizes");
    CompensatedAccumulator acc;
    for (std::size_t i = 0; i < p.support_size(); ++i) {
        double diff = std::sqrt(p[i]) - std::sqrt(q[i]);
        acc.add(diff * diff);
    }
    return acc.value();
}

/// The tightest stage of the chain ||p^n - q^n|| <= sqrt(1 - (1 - h^2/2)^n)
/// <= sqrt(n h^2 / 2), capped at 1.
inline double tv_product_bound(const Distribution& p, const Distribution& q, std::uint64_t n) {
    if (n < 1) throw InvalidParameters("n must be >= 1");
    const double h2 = hellinger_sq(p, q);
    const double stage1 = std::sqrt(1.0 - std::pow(1.0 - 0.5 * h2, static_cast<double>(n)));
    const double stage2 = std::sqrt(static_cast<double>(n) * 0.5 * h2);
    return std::min({1.0, stage1, stage2});
}

/// Profile-distance bound eps/2 + 5 sum_a n^a |P_a(p) - P_a(q)| under
/// Poissonized sampling; applicable only when every probability is at most
/// eps/(40 n). Power-sum differences are computed with the factored form
/// p^a - q^a = (p - q) sum_j p^j q^(a-1-j) to survive the near-perfect
/// cancellation of matched-moment pairs.
inline double profile_distance_bound(const Distribution& p, const Distribution& q, double n,
                                     double epsilon) {
    if (p.support_size() != q.support_size())
        throw SupportMismatch("distributions have different support sizes");
    if (!(n > 0.0) || !(epsilon > 0.0)) throw InvalidParameters("need n > 0 and epsilon > 0");
    double maxprob = 0.0;
    for (std::size_t i = 0; i < p.support_size(); ++i)
        maxprob = std::max({maxprob, p[i], q[i]});
    if (maxprob > epsilon / (40.0 * n))
        throw PreconditionViolated("max probability exceeds epsilon / (40 n)");

    // Group identical (p_x, q_x) pairs; block constructions repeat them k-fold.
    std::map<std::pair<double, double>, std::uint64_t> groups;
    for (std::size_t i = 0; i < p.support_size(); ++i) ++groups[{p[i], q[i]}];

    double total = 0.0;
    constexpr int max_order = 200;
    for (int a = 1; a <= max_order; ++a) {
        CompensatedAccumulator diff;
        for (const auto& [pair, mult] : groups) {
            const auto [px, qx] = pair;
            double geom = 0.0;
            for (int j = 0; j < a; ++j)
                geom += std::pow(px, j) * std::pow(qx, a - 1 - j);
            diff.add(static_cast<double>(mult) * (px - qx) * geom);
        }
        double term = std::pow(n, a) * std::abs(diff.value());
        total += term;
        if (term < 1e-18 * total) break;
    }
    return epsilon / 2.0 + 5.0 * total;
}

enum class CertificateMode { product, profile };

/// The packaged two-point argument: any estimator with accuracy below gap/2
/// must err with probability at least (1 - distance_bound)/2 on p or q.
struct LeCamCertificate {
    double gap = 0.0;
    double distance_bound = 0.0;
    double risk_lower_bound = 0.0;
};

inline LeCamCertificate lecam_certificate(const HardInstance& inst, std::uint64_t n,
                                          CertificateMode mode, double epsilon) {
    LeCamCertificate cert;
    cert.gap = inst.entropy_gap;
    cert.distance_bound =
        mode == CertificateMode::product
            ? tv_product_bound(inst.p, inst.q, n)
            : std::min(1.0, profile_distance_bound(inst.p, inst.q,
                                                   static_cast<double>(n), epsilon));
    cert.risk_lower_bound = (1.0 - cert.distance_bound) / 2.0;
    return cert;
}

} // namespace renyi
