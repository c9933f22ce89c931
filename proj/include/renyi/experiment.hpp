#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "renyi/core.hpp"
#include "renyi/errors.hpp"
#include "renyi/estimators.hpp"
#include "renyi/sampling.hpp"

namespace renyi {

struct ExperimentConfig {
    std::vector<DistributionSpec> distributions;
    std::int64_t k = 10000;
    double alpha = 2.0;
    std::vector<EstimatorConfig> estimators;
    std::vector<std::uint64_t> n_grid;
    int trials = 100;
    std::uint64_t seed = 0;
    std::string output;  // empty = caller handles the bytes
    int threads = 0;     // <= 0 means hardware concurrency
};

inline std::string format_sig(double v, int digits = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

namespace detail {

// Stream ids: distribution realizations, then one stream per (row, trial).
inline std::uint64_t realization_stream(std::size_t dist_index) {
    return 0xd157000000000000ULL + dist_index;
}
inline std::uint64_t trial_stream(std::uint64_t row, std::uint64_t trial) {
    return ((row + 1) << 32) + trial;
}

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Run jobs 0..count-1 on `threads` workers pulling from a shared counter.
template <typename F>
void parallel_for(std::uint64_t count, int threads, F&& body) {
    if (threads <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::uint64_t i = next.fetch_add(1);
                if (i >= count) return;
                body(i);
            }
        });
    for (auto& t : pool) t.join();
}

} // namespace detail

/// One row of the report: `trials` independent estimates of one
/// (distribution, estimator, n) cell.
inline std::string run_experiment(const ExperimentConfig& cfg) {
    if (cfg.distributions.empty() || cfg.estimators.empty() || cfg.n_grid.empty())
        throw ConfigError("experiment needs distributions, estimators and an n grid");
    if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
    for (const auto& est : cfg.estimators) est.check();

    // Realize every distribution once, single-threaded, so Dirichlet draws are
    // identical regardless of worker count.
    struct Realized {
        std::string name;
        Distribution p;
        AliasTable table;
        double true_entropy;
    };
    std::vector<Realized> dists;
    dists.reserve(cfg.distributions.size());
    for (std::size_t i = 0; i < cfg.distributions.size(); ++i) {
        DistributionSpec spec = cfg.distributions[i];
        spec.k = cfg.k;
        RngStream rng(cfg.seed, detail::realization_stream(i));
        Distribution p = make_distribution(spec, &rng);
        double h = exact_renyi_entropy(p, cfg.alpha);
        AliasTable table(p);
        dists.push_back({spec.name(), std::move(p), std::move(table), h});
    }

    struct Row {
        std::size_t dist;
        std::size_t est;
        std::uint64_t n;
    };
    std::vector<Row> rows;
    // Sorted by (distribution name, estimator name, n); ties keep spec order.
    std::vector<std::size_t> dorder(dists.size()), eorder(cfg.estimators.size());
    for (std::size_t i = 0; i < dorder.size(); ++i) dorder[i] = i;
    for (std::size_t i = 0; i < eorder.size(); ++i) eorder[i] = i;
    std::sort(dorder.begin(), dorder.end(),
              [&](std::size_t a, std::size_t b) { return dists[a].name < dists[b].name; });
    std::sort(eorder.begin(), eorder.end(), [&](std::size_t a, std::size_t b) {
        return std::string(estimator_name(cfg.estimators[a].kind)) <
               std::string(estimator_name(cfg.estimators[b].kind));
    });
    std::vector<std::uint64_t> ns = cfg.n_grid;
    std::sort(ns.begin(), ns.end());
    for (std::size_t d : dorder)
        for (std::size_t e : eorder)
            for (std::uint64_t n : ns) rows.push_back({d, e, n});

    const auto trials = static_cast<std::uint64_t>(cfg.trials);
    std::vector<std::vector<EntropyEstimate>> results(
        rows.size(), std::vector<EntropyEstimate>(trials));

    // Polynomial coefficients per (estimator, n) so workers share them.
    std::map<std::pair<std::size_t, std::uint64_t>, EstimatorPolynomial> polys;
    for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
        const auto& est = cfg.estimators[e];
        if (est.kind != EstimatorKind::polynomial) continue;
        for (std::uint64_t n : ns) {
            auto per_copy =
                std::max<std::uint64_t>(n / static_cast<std::uint64_t>(est.median_copies), 1);
            double tau = default_tau(est, per_copy);
            polys.emplace(std::make_pair(e, n),
                          best_shifted_approx(cfg.alpha, default_degree(est, tau)));
        }
    }

    detail::parallel_for(rows.size() * trials, detail::resolve_threads(cfg.threads),
                         [&](std::uint64_t job) {
                             const std::uint64_t r = job / trials;
                             const std::uint64_t t = job % trials;
                             const Row& row = rows[r];
                             EstimatorConfig est = cfg.estimators[row.est];
                             est.alpha = cfg.alpha;
                             const EstimatorPolynomial* poly = nullptr;
                             if (est.kind == EstimatorKind::polynomial)
                                 poly = &polys.at({row.est, row.n});
                             RngStream rng(cfg.seed, detail::trial_stream(r, t));
                             results[r][t] = estimate_entropy(dists[row.dist].p,
                                                              dists[row.dist].table, est, row.n,
                                                              rng, poly);
                         });

    std::string out =
        "distribution,k,alpha,estimator,n,trials,true_entropy,mean_estimate,std_estimate,"
        "mean_abs_error,clamp_fraction\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const Row& row = rows[r];
        const double truth = dists[row.dist].true_entropy;
        CompensatedAccumulator mean_acc, abs_acc;
        std::uint64_t clamped = 0;
        for (const auto& e : results[r]) {
            mean_acc.add(e.entropy);
            abs_acc.add(std::abs(e.entropy - truth));
            if (e.clamped) ++clamped;
        }
        const double mean = mean_acc.value() / static_cast<double>(trials);
        CompensatedAccumulator var_acc;
        for (const auto& e : results[r]) var_acc.add((e.entropy - mean) * (e.entropy - mean));
        const double stddev =
            trials > 1 ? std::sqrt(var_acc.value() / static_cast<double>(trials - 1)) : 0.0;

        out += dists[row.dist].name;
        out += ',' + std::to_string(cfg.k);
        out += ',' + format_sig(cfg.alpha);
        out += ',';
        out += estimator_name(cfg.estimators[row.est].kind);
        out += ',' + std::to_string(row.n);
        out += ',' + std::to_string(cfg.trials);
        out += ',' + format_sig(truth);
        out += ',' + format_sig(mean);
        out += ',' + format_sig(stddev);
        out += ',' + format_sig(abs_acc.value() / static_cast<double>(trials));
        out += ',' + format_sig(static_cast<double>(clamped) / static_cast<double>(trials));
        out += '\n';
    }
    if (!cfg.output.empty()) {
        std::ofstream f(cfg.output, std::ios::binary);
        if (!f) throw Error("cannot open " + cfg.output + " for writing");
        f << out;
    }
    return out;
}

struct SearchOptions {
    double delta = 0.1;    // accuracy in nats
    double epsilon = 0.1;  // tolerated failure probability
    int trials = 400;      // per candidate n, fixed (no adaptive reallocation)
    std::uint64_t n_min = 16;
    std::uint64_t n_max = 1u << 24;  // BudgetExceeded past this
    std::uint64_t seed = 0;
    int threads = 0;
};

struct SearchResult {
    std::uint64_t n_star = 0;
    double failure_rate = 0.0;
    double wilson_low = 0.0;
    double wilson_high = 0.0;
};

namespace detail {

inline std::pair<double, double> wilson_interval(std::uint64_t failures, std::uint64_t trials) {
    constexpr double z = 1.959963984540054;  // 95%
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, (center - half) / denom), std::min(1.0, (center + half) / denom)};
}

} // namespace detail

/// Smallest n (doubling then bisection) at which the empirical failure rate
/// Pr(|est - truth| > delta) over opts.trials runs drops below opts.epsilon.
/// Trials at a given n are keyed by (n, trial), so revisiting an n during the
/// bisection reproduces the same verdict.
inline SearchResult sample_complexity_search(const DistributionSpec& spec, double alpha,
                                             EstimatorConfig est, const SearchOptions& opts) {
    est.alpha = alpha;
    est.check();
    if (opts.trials < 1 || opts.n_min < 1 || opts.n_max < opts.n_min || !(opts.delta > 0.0) ||
        !(opts.epsilon > 0.0))
        throw InvalidParameters("bad search options");

    RngStream realize(opts.seed, detail::realization_stream(0));
    const Distribution p = make_distribution(spec, &realize);
    const AliasTable table(p);
    const double truth = exact_renyi_entropy(p, alpha);
    const auto trials = static_cast<std::uint64_t>(opts.trials);
    const int threads = detail::resolve_threads(opts.threads);

    const auto failures_at = [&](std::uint64_t n) {
        EstimatorPolynomial poly;
        const EstimatorPolynomial* ppoly = nullptr;
        if (est.kind == EstimatorKind::polynomial) {
            auto per_copy =
                std::max<std::uint64_t>(n / static_cast<std::uint64_t>(est.median_copies), 1);
            poly = best_shifted_approx(alpha, default_degree(est, default_tau(est, per_copy)));
            ppoly = &poly;
        }
        std::vector<std::uint8_t> fail(trials);
        detail::parallel_for(trials, threads, [&](std::uint64_t t) {
            RngStream rng(opts.seed, detail::trial_stream(n, t));
            auto e = estimate_entropy(p, table, est, n, rng, ppoly);
            fail[t] = std::abs(e.entropy - truth) > opts.delta ? 1 : 0;
        });
        std::uint64_t total = 0;
        for (auto f : fail) total += f;
        return total;
    };
    const auto passes = [&](std::uint64_t failures) {
        return static_cast<double>(failures) / static_cast<double>(trials) < opts.epsilon;
    };

    std::uint64_t lo = 0;  // known failing (0 = below the grid)
    std::uint64_t hi = opts.n_min;
    std::uint64_t hi_failures = failures_at(hi);
    while (!passes(hi_failures)) {
        lo = hi;
        if (hi >= opts.n_max) throw BudgetExceeded("no passing n up to the search cap");
        hi = std::min(hi * 2, opts.n_max);
        hi_failures = failures_at(hi);
    }
    while (hi - lo > 1 && hi > opts.n_min) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (mid < opts.n_min) mid = opts.n_min;
        std::uint64_t f = failures_at(mid);
        if (passes(f)) {
            hi = mid;
            hi_failures = f;
        } else {
            lo = mid;
        }
        if (hi == opts.n_min) break;
    }

    SearchResult res;
    res.n_star = hi;
    res.failure_rate = static_cast<double>(hi_failures) / static_cast<double>(trials);
    auto [wl, wh] = detail::wilson_interval(hi_failures, trials);
    res.wilson_low = wl;
    res.wilson_high = wh;
    return res;
}

/// Flat `key = value` config text; '#' starts a comment, blank lines ignored.
inline std::map<std::string, std::string> parse_config_text(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const char* ws = " \t\r";
        auto b = s.find_first_not_of(ws);
        if (b == std::string::npos) return std::string();
        auto e = s.find_last_not_of(ws);
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

inline std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config_text(in);
}

} // namespace renyi
