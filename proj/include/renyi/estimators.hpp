#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "renyi/core.hpp"
#include "renyi/errors.hpp"
#include "renyi/polyapprox.hpp"
#include "renyi/rng.hpp"
#include "renyi/sampling.hpp"

namespace renyi {

enum class EstimatorKind { empirical, bias_corrected, polynomial };

enum class SamplingMode { fixed, poissonized };

// tau = ln n, d = ceil(1.5 tau) for experiments; tau = 4 ln n, d = ceil(ln(n)/2)
// for the proof-constant variant.
enum class TauRule { experiment, proof };

inline const char* estimator_name(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::empirical: return "empirical";
        case EstimatorKind::bias_corrected: return "bias_corrected";
        case EstimatorKind::polynomial: return "polynomial";
    }
    return "?";
}

struct EstimatorConfig {
    double alpha = 2.0;
    EstimatorKind kind = EstimatorKind::empirical;
    double tau = 0.0;      // polynomial only; <= 0 means "use ln(n)"
    int degree = 0;        // polynomial only; <= 0 means "use ceil(1.5 tau)"
    int median_copies = 1; // odd t >= 1
    SamplingMode sampling = SamplingMode::fixed;
    TauRule tau_rule = TauRule::experiment;

    void check() const {
        if (!(alpha > 0.0) || alpha == 1.0)
            throw InvalidParameters("estimator order must be positive and != 1");
        if (kind == EstimatorKind::bias_corrected &&
            (alpha != std::floor(alpha) || alpha < 2.0))
            throw NonIntegerAlpha("bias-corrected estimation needs integer alpha >= 2");
        if (median_copies < 1) throw InvalidParameters("median_copies must be >= 1");
    }
};

/// Plug-in power-sum estimate: sum over present symbols of (N_x / n)^alpha.
inline double empirical_power_sum(const Histogram& h, double n, double alpha) {
    if (!(n >= 1.0)) throw InvalidParameters("sample size must be >= 1");
    CompensatedAccumulator acc;
    for (const auto& [sym, mult] : h.counts()) {
        (void)sym;
        acc.add(std::pow(static_cast<double>(mult) / n, alpha));
    }
    return acc.value();
}

inline double falling_power(std::uint64_t count, int r) {
    if (static_cast<std::uint64_t>(r) > count) return 0.0;
    double v = 1.0;
    for (int j = 0; j < r; ++j) v *= static_cast<double>(count - static_cast<std::uint64_t>(j));
    return v;
}

/// Unbiased (under Poissonized sampling) power-sum estimate for integer alpha:
/// sum of falling powers N_x (N_x - 1) ... (N_x - alpha + 1) / n^alpha.
inline double bias_corrected_power_sum(const Histogram& h, double n, double alpha) {
    if (!(n >= 1.0)) throw InvalidParameters("sample size must be >= 1");
    if (alpha != std::floor(alpha) || alpha < 2.0)
        throw NonIntegerAlpha("bias-corrected power sums need integer alpha >= 2");
    const int r = static_cast<int>(alpha);
    const double na = std::pow(n, alpha);
    CompensatedAccumulator acc;
    for (const auto& [sym, mult] : h.counts()) {
        (void)sym;
        acc.add(falling_power(mult, r) / na);
    }
    return acc.value();
}

/// Two-sample polynomial-approximation power-sum estimate. The first
/// histogram only selects the branch per symbol; the second supplies the
/// multiplicities that enter either the empirical term or the falling-power
/// expansion of the shifted approximation of x^alpha. The raw sum may be
/// slightly negative; clamping happens at the log step.
inline double polynomial_power_sum(const Histogram& h_select, const Histogram& h_est, double n,
                                   double alpha, const EstimatorPolynomial& poly, double tau) {
    if (static_cast<int>(poly.coeffs.size()) != poly.degree)
        throw DegreeMismatch("polynomial degree and coefficient count disagree");
    const std::vector<double> w = scale_weights(poly, tau, n);
    const int d = poly.degree;
    CompensatedAccumulator acc;
    for (const auto& [sym, mult] : h_est.counts()) {
        const double selector = static_cast<double>(h_select.count_of(sym));
        if (selector > tau) {
            acc.add(std::pow(static_cast<double>(mult) / n, alpha));
        } else {
            double term = 0.0;
            double fp = 1.0;
            for (int m = 1; m <= d && static_cast<std::uint64_t>(m) <= mult; ++m) {
                fp *= static_cast<double>(mult - static_cast<std::uint64_t>(m) + 1);
                term += w[static_cast<std::size_t>(m - 1)] * fp;
            }
            acc.add(term);
        }
    }
    return acc.value();
}

/// Sample median; even lengths average the two middle order statistics.
inline double median_amplify(std::span<const double> estimates) {
    if (estimates.empty()) throw EmptyInput("median of an empty sequence");
    std::vector<double> sorted(estimates.begin(), estimates.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t t = sorted.size();
    if (t % 2 == 1) return sorted[t / 2];
    return 0.5 * (sorted[t / 2 - 1] + sorted[t / 2]);
}

namespace detail {

struct SampledBatch {
    Histogram select;  // polynomial estimator only
    Histogram est;
    double rate = 0.0;  // per-part sample rate entering the formulas
};

inline SampledBatch draw_batch(const Distribution& p, const AliasTable& table,
                               const EstimatorConfig& cfg, std::uint64_t n, RngStream& rng) {
    SampledBatch batch;
    if (cfg.kind == EstimatorKind::polynomial) {
        // Half the budget selects the branch, half estimates.
        if (cfg.sampling == SamplingMode::fixed) {
            std::uint64_t n1 = n / 2;
            batch.select = sample_fixed(table, p, n1, rng);
            batch.est = sample_fixed(table, p, n - n1, rng);
            batch.rate = static_cast<double>(n - n1);
        } else {
            auto [first, second] = sample_split(p, static_cast<double>(n) / 2.0, rng);
            batch.select = std::move(first);
            batch.est = std::move(second);
            batch.rate = static_cast<double>(n) / 2.0;
        }
    } else {
        if (cfg.sampling == SamplingMode::fixed)
            batch.est = sample_fixed(table, p, n, rng);
        else
            batch.est = sample_poissonized(p, static_cast<double>(n), rng);
        batch.rate = static_cast<double>(n);
    }
    return batch;
}

} // namespace detail

inline double default_tau(const EstimatorConfig& cfg, std::uint64_t n) {
    if (cfg.tau > 0.0) return cfg.tau;
    const double ln_n = std::log(static_cast<double>(std::max<std::uint64_t>(n, 2)));
    return cfg.tau_rule == TauRule::proof ? 4.0 * ln_n : ln_n;
}

inline int default_degree(const EstimatorConfig& cfg, double tau) {
    if (cfg.degree > 0) return cfg.degree;
    // tau is already rule-adjusted; the proof rule wants d = ln(n)/2 = tau/8.
    double d = cfg.tau_rule == TauRule::proof ? tau / 8.0 : 1.5 * tau;
    return std::max(1, static_cast<int>(std::ceil(d)));
}

inline double power_sum_estimate(const detail::SampledBatch& batch, const EstimatorConfig& cfg,
                                 const EstimatorPolynomial* poly, double tau) {
    switch (cfg.kind) {
        case EstimatorKind::empirical:
            return empirical_power_sum(batch.est, batch.rate, cfg.alpha);
        case EstimatorKind::bias_corrected:
            return bias_corrected_power_sum(batch.est, batch.rate, cfg.alpha);
        case EstimatorKind::polynomial:
            return polynomial_power_sum(batch.select, batch.est, batch.rate, cfg.alpha, *poly,
                                        tau);
    }
    throw InvalidParameters("unknown estimator kind");
}

/// One full estimate: samples config.median_copies independent batches that
/// split the budget n, medians the power-sum estimates, then maps through the
/// floored log transform. The floor (1/n)^alpha is the smallest magnitude a
/// one-sample empirical estimate can produce.
inline EntropyEstimate estimate_entropy(const Distribution& p, const AliasTable& table,
                                        const EstimatorConfig& cfg, std::uint64_t n,
                                        RngStream& rng,
                                        const EstimatorPolynomial* poly = nullptr) {
    cfg.check();
    if (n < 1) throw InvalidParameters("sample budget must be >= 1");
    const int t = cfg.median_copies;
    const std::uint64_t per_copy = std::max<std::uint64_t>(n / static_cast<std::uint64_t>(t), 1);
    const double tau = default_tau(cfg, per_copy);

    EstimatorPolynomial local;
    if (cfg.kind == EstimatorKind::polynomial && poly == nullptr) {
        local = best_shifted_approx(cfg.alpha, default_degree(cfg, tau));
        poly = &local;
    }

    std::vector<double> copies(static_cast<std::size_t>(t));
    for (auto& est : copies) {
        auto batch = detail::draw_batch(p, table, cfg, per_copy, rng);
        est = power_sum_estimate(batch, cfg, poly, tau);
    }
    const double ps = median_amplify(copies);
    const double floor = std::pow(1.0 / static_cast<double>(per_copy), cfg.alpha);
    return entropy_from_power_sum(ps, cfg.alpha, floor);
}

inline EntropyEstimate estimate_entropy(const Distribution& p, const EstimatorConfig& cfg,
                                        std::uint64_t n, RngStream& rng,
                                        const EstimatorPolynomial* poly = nullptr) {
    AliasTable table(p);
    return estimate_entropy(p, table, cfg, n, rng, poly);
}

} // namespace renyi
