#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "renyi/errors.hpp"

namespace renyi {

// Neumaier-compensated sum.
inline double compensated_sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

class CompensatedAccumulator {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Explicit finite probability vector. Entries are nonnegative and sum to 1
/// after construction; zero entries are allowed.
class Distribution {
public:
    static Distribution validated(std::vector<double> probs) {
        if (probs.empty()) throw SumOutOfTolerance("empty probability vector");
        for (double p : probs)
            if (p < 0.0 || !std::isfinite(p))
                throw NegativeEntry("probability entries must be nonnegative finite reals");
        double total = compensated_sum(probs);
        if (std::abs(total - 1.0) > 1e-6)
            throw SumOutOfTolerance("probabilities sum to " + std::to_string(total));
        for (double& p : probs) p /= total;
        return Distribution(std::move(probs));
    }

    std::size_t support_size() const { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::vector<double>& probs() const { return probs_; }

private:
    explicit Distribution(std::vector<double> probs) : probs_(std::move(probs)) {}
    std::vector<double> probs_;
};

inline Distribution validate_distribution(std::vector<double> probs) {
    return Distribution::validated(std::move(probs));
}

/// Multiplicity map of a sample: only symbols that appeared are stored,
/// kept sorted by symbol for canonical ordering.
class Histogram {
public:
    Histogram() = default;
    Histogram(std::vector<std::pair<std::int64_t, std::uint64_t>> counts,
              std::uint64_t total_draws)
        : counts_(std::move(counts)), total_(total_draws) {
        std::sort(counts_.begin(), counts_.end());
    }

    const std::vector<std::pair<std::int64_t, std::uint64_t>>& counts() const {
        return counts_;
    }
    std::uint64_t total_draws() const { return total_; }

    std::uint64_t count_of(std::int64_t symbol) const {
        auto it = std::lower_bound(counts_.begin(), counts_.end(),
                                   std::make_pair(symbol, std::uint64_t{0}));
        if (it != counts_.end() && it->first == symbol) return it->second;
        return 0;
    }

    bool operator==(const Histogram&) const = default;

private:
    std::vector<std::pair<std::int64_t, std::uint64_t>> counts_;
    std::uint64_t total_ = 0;
};

inline Histogram histogram_from_samples(std::span<const std::int64_t> samples) {
    std::map<std::int64_t, std::uint64_t> m;
    for (auto s : samples) ++m[s];
    std::vector<std::pair<std::int64_t, std::uint64_t>> counts(m.begin(), m.end());
    return Histogram(std::move(counts), samples.size());
}

/// Counts of symbols per multiplicity: phi[l] = #{x : N_x = l}.
struct Profile {
    std::map<std::uint64_t, std::uint64_t> phi;
};

inline Profile profile_from_histogram(const Histogram& h) {
    Profile prof;
    for (const auto& [sym, mult] : h.counts()) {
        (void)sym;
        ++prof.phi[mult];
    }
    return prof;
}

struct EntropyEstimate {
    double power_sum = 0.0;
    double entropy = 0.0;
    double alpha = 0.0;
    bool clamped = false;
};

inline double exact_power_sum(const Distribution& p, double alpha) {
    if (!(alpha > 0.0)) throw InvalidParameters("alpha must be positive");
    // Descending order: for alpha > 1 the sum is dominated by large entries.
    std::vector<double> sorted(p.probs());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    CompensatedAccumulator acc;
    for (double v : sorted) {
        if (v > 0.0) acc.add(std::pow(v, alpha));
    }
    return acc.value();
}

inline double exact_renyi_entropy(const Distribution& p, double alpha) {
    if (alpha == 1.0) throw AlphaIsOne("Renyi entropy of order 1 is out of scope");
    return std::log(exact_power_sum(p, alpha)) / (1.0 - alpha);
}

inline EntropyEstimate entropy_from_power_sum(double power_sum_estimate, double alpha,
                                              double floor) {
    if (alpha == 1.0) throw AlphaIsOne("order-1 transform undefined");
    EntropyEstimate e;
    e.alpha = alpha;
    e.clamped = !(power_sum_estimate >= floor);
    e.power_sum = e.clamped ? floor : power_sum_estimate;
    e.entropy = std::log(e.power_sum) / (1.0 - alpha);
    return e;
}

/// Leading term g(k) of the Renyi entropy of Zipf(beta, k), by the cell
/// (alpha*beta vs 1, beta vs 1). Returns nullopt for the cell whose leading
/// behavior is an unspecified constant.
inline std::optional<double> zipf_leading_term(double alpha, double beta, std::int64_t k) {
    if (alpha == 1.0) throw AlphaIsOne("order-1 leading terms are out of scope");
    if (!(alpha > 0.0) || !(beta > 0.0) || k < 2)
        throw InvalidParameters("need alpha > 0, beta > 0, k >= 2");
    const double ab = alpha * beta;
    const double logk = std::log(static_cast<double>(k));
    const double loglogk = std::log(logk);
    constexpr double eps = 1e-12;
    if (ab < 1.0 - eps) {
        if (beta < 1.0 - eps) return logk;
        return (1.0 - ab) / (1.0 - alpha) * logk;
    }
    if (ab <= 1.0 + eps) {  // alpha*beta == 1
        if (beta < 1.0 - eps) return (alpha - ab) / (alpha - 1.0) * logk;
        if (beta <= 1.0 + eps) return 0.5 * logk;
        return loglogk / (1.0 - alpha);
    }
    // alpha*beta > 1
    if (beta < 1.0 - eps) return (alpha - ab) / (alpha - 1.0) * logk;
    if (beta <= 1.0 + eps) return alpha / (alpha - 1.0) * loglogk;
    return std::nullopt;  // constant-order cell
}

} // namespace renyi
