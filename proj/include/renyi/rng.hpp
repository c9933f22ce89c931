#pragma once

#include <cmath>
#include <cstdint>

#include "renyi/errors.hpp"

namespace renyi {

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

/// Counter-based splittable generator in the SplitMix family. A fixed
/// (seed, stream_id) pair reproduces the same draws; distinct stream ids give
/// statistically independent streams regardless of scheduling.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(detail::mix64(seed ^ detail::mix64(stream_id))),
          gamma_(detail::mix64(detail::mix64(stream_id) + 0x632be59bd9b4e019ULL) | 1ULL) {}

    std::uint64_t next_u64() {
        state_ += gamma_;
        return detail::mix64(state_);
    }

    /// Uniform in (0, 1): never returns 0 or 1, safe to take logs of.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) by rejection from the top range.
    std::uint64_t uniform_below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Exact Poisson(lambda): sequential inversion below 30, Hormann's
    /// transformed rejection above.
    std::uint64_t poisson(double lambda) {
        if (!(lambda >= 0.0)) throw InvalidParameters("poisson rate must be >= 0");
        if (lambda == 0.0) return 0;
        if (lambda < 30.0) return poisson_inversion(lambda);
        return poisson_ptrd(lambda);
    }

    /// Exact Gamma(shape, 1) by Marsaglia-Tsang, with the shape < 1 boost.
    double gamma_variate(double shape) {
        if (!(shape > 0.0)) throw InvalidParameters("gamma shape must be > 0");
        if (shape < 1.0) {
            double g = gamma_variate(shape + 1.0);
            return g * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            double v = t * t * t;
            double u = uniform();
            double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    std::uint64_t poisson_inversion(double lambda) {
        const double el = std::exp(-lambda);
        std::uint64_t k = 0;
        double p = el;
        double cdf = p;
        double u = uniform();
        while (u > cdf) {
            ++k;
            p *= lambda / static_cast<double>(k);
            cdf += p;
            if (k > 2000) break;  // cdf underflow guard; unreachable for lambda < 30
        }
        return k;
    }

    std::uint64_t poisson_ptrd(double lambda) {
        const double smu = std::sqrt(lambda);
        const double b = 0.931 + 2.53 * smu;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        const double log_lambda = std::log(lambda);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform();
            double us = 0.5 - std::abs(u);
            double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
            if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
            double rhs = kf * log_lambda - lambda - std::lgamma(kf + 1.0);
            if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
        }
    }

    std::uint64_t state_;
    std::uint64_t gamma_;
};

} // namespace renyi
