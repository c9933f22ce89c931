#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "renyi/core.hpp"
#include "renyi/errors.hpp"
#include "renyi/rng.hpp"

namespace renyi {

enum class DistributionKind { uniform, step, zipf, dirichlet };

struct DistributionSpec {
    DistributionKind kind = DistributionKind::uniform;
    std::int64_t k = 2;
    double beta = 1.0;           // zipf exponent
    double concentration = 1.0;  // dirichlet parameter

    std::string name() const {
        switch (kind) {
            case DistributionKind::uniform: return "uniform";
            case DistributionKind::step: return "step";
            case DistributionKind::zipf: return "zipf" + format_param(beta);
            case DistributionKind::dirichlet: return "dirichlet" + format_param(concentration);
        }
        return "?";
    }

private:
    static std::string format_param(double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", v);
        return std::string("_") + buf;
    }
};

inline Distribution make_distribution(const DistributionSpec& spec, RngStream* rng = nullptr) {
    if (spec.k < 2) throw InvalidParameters("support size must be >= 2");
    const auto k = static_cast<std::size_t>(spec.k);
    std::vector<double> p(k);
    switch (spec.kind) {
        case DistributionKind::uniform: {
            for (auto& v : p) v = 1.0 / static_cast<double>(k);
            break;
        }
        case DistributionKind::step: {
            // ceil(k/2) light symbols at 1/(2k), the rest at 3/(2k); the odd-k
            // vector is renormalized by exact division.
            std::size_t light = (k + 1) / 2;
            double lo = 1.0 / (2.0 * static_cast<double>(k));
            double hi = 3.0 / (2.0 * static_cast<double>(k));
            double total = static_cast<double>(light) * lo + static_cast<double>(k - light) * hi;
            for (std::size_t i = 0; i < k; ++i) p[i] = (i < light ? lo : hi) / total;
            break;
        }
        case DistributionKind::zipf: {
            if (!(spec.beta > 0.0)) throw InvalidParameters("zipf beta must be > 0");
            CompensatedAccumulator norm;
            for (std::size_t i = 0; i < k; ++i) {
                p[i] = std::pow(static_cast<double>(i + 1), -spec.beta);
                norm.add(p[i]);
            }
            for (auto& v : p) v /= norm.value();
            break;
        }
        case DistributionKind::dirichlet: {
            if (rng == nullptr) throw MissingRng("dirichlet generation needs an RngStream");
            if (!(spec.concentration > 0.0))
                throw InvalidParameters("dirichlet concentration must be > 0");
            CompensatedAccumulator norm;
            for (auto& v : p) {
                v = rng->gamma_variate(spec.concentration);
                norm.add(v);
            }
            for (auto& v : p) v /= norm.value();
            break;
        }
    }
    return validate_distribution(std::move(p));
}

/// Walker/Vose alias table; O(k) construction, O(1) per draw.
class AliasTable {
public:
    explicit AliasTable(const Distribution& p) : prob_(p.support_size()), alias_(p.support_size()) {
        const std::size_t k = p.support_size();
        std::vector<double> scaled(k);
        std::vector<std::size_t> small, large;
        small.reserve(k);
        large.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            scaled[i] = p[i] * static_cast<double>(k);
            (scaled[i] < 1.0 ? small : large).push_back(i);
        }
        while (!small.empty() && !large.empty()) {
            std::size_t s = small.back();
            small.pop_back();
            std::size_t l = large.back();
            prob_[s] = scaled[s];
            alias_[s] = l;
            scaled[l] = (scaled[l] + scaled[s]) - 1.0;
            if (scaled[l] < 1.0) {
                large.pop_back();
                small.push_back(l);
            }
        }
        for (std::size_t i : large) {
            prob_[i] = 1.0;
            alias_[i] = i;
        }
        for (std::size_t i : small) {
            prob_[i] = 1.0;
            alias_[i] = i;
        }
    }

    std::int64_t draw(RngStream& rng) const {
        std::size_t i = static_cast<std::size_t>(rng.uniform_below(prob_.size()));
        return static_cast<std::int64_t>(rng.uniform() < prob_[i] ? i : alias_[i]);
    }

private:
    std::vector<double> prob_;
    std::vector<std::size_t> alias_;
};

namespace detail {

inline Histogram histogram_from_count_vector(const std::vector<std::uint64_t>& counts) {
    std::vector<std::pair<std::int64_t, std::uint64_t>> nonzero;
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            nonzero.emplace_back(static_cast<std::int64_t>(i), counts[i]);
            total += counts[i];
        }
    }
    return Histogram(std::move(nonzero), total);
}

} // namespace detail

inline Histogram sample_fixed(const AliasTable& table, const Distribution& p, std::uint64_t n,
                              RngStream& rng) {
    std::vector<std::uint64_t> counts(p.support_size(), 0);
    for (std::uint64_t i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(table.draw(rng))];
    return detail::histogram_from_count_vector(counts);
}

inline Histogram sample_fixed(const Distribution& p, std::uint64_t n, RngStream& rng) {
    AliasTable table(p);
    return sample_fixed(table, p, n, rng);
}

/// Poissonized sampling at rate n: each multiplicity is an independent
/// Poisson(n * p_x) draw, distributionally identical to drawing N ~ Poisson(n)
/// samples i.i.d. from p.
inline Histogram sample_poissonized(const Distribution& p, double n, RngStream& rng) {
    if (!(n > 0.0)) throw InvalidParameters("poissonized rate must be > 0");
    std::vector<std::uint64_t> counts(p.support_size());
    for (std::size_t i = 0; i < p.support_size(); ++i) counts[i] = rng.poisson(n * p[i]);
    return detail::histogram_from_count_vector(counts);
}

inline std::pair<Histogram, Histogram> sample_split(const Distribution& p, double n,
                                                    RngStream& rng) {
    Histogram first = sample_poissonized(p, n, rng);
    Histogram second = sample_poissonized(p, n, rng);
    return {std::move(first), std::move(second)};
}

inline std::uint64_t poisson_draw(double lambda, RngStream& rng) { return rng.poisson(lambda); }

} // namespace renyi
