// Command-line front end: estimate | experiment | search | certificate | approx.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "renyi/core.hpp"
#include "renyi/errors.hpp"
#include "renyi/estimators.hpp"
#include "renyi/experiment.hpp"
#include "renyi/hardness.hpp"
#include "renyi/polyapprox.hpp"
#include "renyi/sampling.hpp"

namespace {

using namespace renyi;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitValidation = 3;
constexpr int kExitBudget = 4;

EstimatorKind parse_estimator(const std::string& s) {
    if (s == "empirical") return EstimatorKind::empirical;
    if (s == "bias_corrected") return EstimatorKind::bias_corrected;
    if (s == "polynomial") return EstimatorKind::polynomial;
    throw ConfigError("unknown estimator '" + s + "'");
}

SamplingMode parse_sampling(const std::string& s) {
    if (s == "fixed") return SamplingMode::fixed;
    if (s == "poisson") return SamplingMode::poissonized;
    throw ConfigError("unknown sampling mode '" + s + "' (expected fixed or poisson)");
}

TauRule parse_tau_rule(const std::string& s) {
    if (s == "experiment") return TauRule::experiment;
    if (s == "proof") return TauRule::proof;
    throw ConfigError("unknown tau rule '" + s + "' (expected experiment or proof)");
}

// "uniform", "step", "zipf_0.75", "dirichlet_1"; k is filled in by the caller.
DistributionSpec parse_distribution(const std::string& s) {
    DistributionSpec spec;
    auto us = s.find('_');
    std::string head = us == std::string::npos ? s : s.substr(0, us);
    std::optional<double> param;
    if (us != std::string::npos) {
        try {
            param = std::stod(s.substr(us + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad distribution parameter in '" + s + "'");
        }
    }
    if (head == "uniform") spec.kind = DistributionKind::uniform;
    else if (head == "step") spec.kind = DistributionKind::step;
    else if (head == "zipf") {
        spec.kind = DistributionKind::zipf;
        spec.beta = param.value_or(1.0);
    } else if (head == "dirichlet") {
        spec.kind = DistributionKind::dirichlet;
        spec.concentration = param.value_or(1.0);
    } else {
        throw ConfigError("unknown distribution '" + s + "'");
    }
    return spec;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double in_base(double nats, const std::string& base) {
    return base == "2" ? nats / std::log(2.0) : nats;
}

void write_or_print(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw Error("cannot open " + out_path + " for writing");
    f << text;
}

struct EstimateArgs {
    std::string input;  // "-" = stdin
    std::string estimator = "empirical";
    double alpha = 2.0;
    int median_copies = 1;
    double tau = 0.0;
    int degree = 0;
    std::string tau_rule = "experiment";
    std::string base = "e";
    std::string dist_file;
    std::string out;
};

int run_estimate(const EstimateArgs& a) {
    std::vector<std::string> tokens;
    {
        std::ifstream file;
        std::istream* in = &std::cin;
        if (a.input != "-") {
            file.open(a.input);
            if (!file) throw ConfigError("cannot open sample file " + a.input);
            in = &file;
        }
        std::string tok;
        while (*in >> tok) tokens.push_back(tok);
    }
    if (tokens.empty()) throw PreconditionViolated("no sample tokens supplied");

    std::map<std::string, std::int64_t> ids;
    auto id_of = [&](const std::string& t) {
        auto [it, inserted] = ids.emplace(t, static_cast<std::int64_t>(ids.size()));
        (void)inserted;
        return it->second;
    };

    EstimatorConfig cfg;
    cfg.alpha = a.alpha;
    cfg.kind = parse_estimator(a.estimator);
    cfg.tau = a.tau;
    cfg.degree = a.degree;
    cfg.median_copies = a.median_copies;
    cfg.tau_rule = parse_tau_rule(a.tau_rule);
    cfg.check();

    double power_sum = 0.0;
    std::uint64_t rate = 0;
    if (cfg.kind == EstimatorKind::polynomial) {
        // Two-sample design: the first half of the stream selects the branch,
        // the second half feeds the estimate.
        std::size_t half = tokens.size() / 2;
        std::vector<std::int64_t> sel, est;
        for (std::size_t i = 0; i < tokens.size(); ++i)
            (i < half ? sel : est).push_back(id_of(tokens[i]));
        if (sel.empty() || est.empty())
            throw PreconditionViolated("polynomial estimation needs at least 2 tokens");
        Histogram h_sel = histogram_from_samples(sel);
        Histogram h_est = histogram_from_samples(est);
        rate = est.size();
        double tau = default_tau(cfg, rate);
        EstimatorPolynomial poly = best_shifted_approx(cfg.alpha, default_degree(cfg, tau));
        power_sum = polynomial_power_sum(h_sel, h_est, static_cast<double>(rate), cfg.alpha,
                                         poly, tau);
    } else {
        std::vector<std::int64_t> all;
        all.reserve(tokens.size());
        for (const auto& t : tokens) all.push_back(id_of(t));
        Histogram h = histogram_from_samples(all);
        rate = all.size();
        power_sum = cfg.kind == EstimatorKind::empirical
                        ? empirical_power_sum(h, static_cast<double>(rate), cfg.alpha)
                        : bias_corrected_power_sum(h, static_cast<double>(rate), cfg.alpha);
    }
    const double floor = std::pow(1.0 / static_cast<double>(rate), cfg.alpha);
    EntropyEstimate e = entropy_from_power_sum(power_sum, cfg.alpha, floor);

    std::string report;
    report += "alpha " + format_sig(cfg.alpha) + "\n";
    report += "n " + std::to_string(rate) + "\n";
    report += "estimator " + std::string(estimator_name(cfg.kind)) + "\n";
    report += "power_sum " + format_sig(e.power_sum) + "\n";
    report += "entropy " + format_sig(in_base(e.entropy, a.base)) + "\n";
    report += std::string("clamped ") + (e.clamped ? "true" : "false") + "\n";

    if (!a.dist_file.empty()) {
        std::ifstream df(a.dist_file);
        if (!df) throw ConfigError("cannot open distribution file " + a.dist_file);
        std::vector<double> probs;
        double v;
        while (df >> v) probs.push_back(v);
        Distribution p = validate_distribution(std::move(probs));
        report += "true_entropy " +
                  format_sig(in_base(exact_renyi_entropy(p, cfg.alpha), a.base)) + "\n";
    }
    write_or_print(a.out, report);
    return kExitOk;
}

// Config-file keys mirror the flags; flags override the file.
struct ExperimentArgs {
    std::string config;
    std::string distributions;
    std::int64_t k = 0;
    double alpha = 0.0;
    std::string estimators;
    std::string n_grid;
    int trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string sampling;
    int median_copies = 0;
    std::string tau_rule;
    std::string out;
    int threads = 0;
};

std::vector<std::uint64_t> parse_n_grid(const std::string& s) {
    // "1000:10000:1000" (start:stop:step, inclusive) or "1000,2000,5000".
    std::vector<std::uint64_t> grid;
    if (s.find(':') != std::string::npos) {
        std::uint64_t start = 0, stop = 0, step = 0;
        char c1 = 0, c2 = 0;
        std::stringstream ss(s);
        if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' || step == 0)
            throw ConfigError("bad n grid '" + s + "' (expected start:stop:step)");
        for (std::uint64_t n = start; n <= stop; n += step) grid.push_back(n);
    } else {
        for (const auto& part : split_list(s)) grid.push_back(std::stoull(part));
    }
    if (grid.empty()) throw ConfigError("empty n grid");
    return grid;
}

int run_experiment_cmd(const ExperimentArgs& a) {
    std::map<std::string, std::string> kv;
    if (!a.config.empty()) kv = parse_config_file(a.config);
    auto str = [&](const char* key, const std::string& flag, const std::string& dflt) {
        if (!flag.empty()) return flag;
        auto it = kv.find(key);
        return it != kv.end() ? it->second : dflt;
    };

    ExperimentConfig cfg;
    cfg.k = a.k > 0 ? a.k : (kv.count("k") ? std::stoll(kv["k"]) : 10000);
    cfg.alpha = a.alpha > 0.0 ? a.alpha : (kv.count("alpha") ? std::stod(kv["alpha"]) : 2.0);
    cfg.trials = a.trials > 0 ? a.trials : (kv.count("trials") ? std::stoi(kv["trials"]) : 100);
    cfg.seed = a.seed_set ? a.seed : (kv.count("seed") ? std::stoull(kv["seed"]) : 0);
    cfg.threads = a.threads > 0 ? a.threads
                                : (kv.count("threads") ? std::stoi(kv["threads"]) : 0);
    cfg.output = str("out", a.out, "");
    cfg.n_grid = parse_n_grid(str("n_grid", a.n_grid, "1000:10000:1000"));

    const std::string dist_list =
        str("distributions", a.distributions,
            "uniform,step,zipf_1,zipf_0.75,dirichlet_1,dirichlet_0.5");
    for (const auto& name : split_list(dist_list))
        cfg.distributions.push_back(parse_distribution(name));

    const SamplingMode sampling = parse_sampling(str("sampling", a.sampling, "fixed"));
    const TauRule rule = parse_tau_rule(str("tau_rule", a.tau_rule, "experiment"));
    const int copies =
        a.median_copies > 0
            ? a.median_copies
            : (kv.count("median_copies") ? std::stoi(kv["median_copies"]) : 1);
    const std::string est_list = str("estimators", a.estimators, "empirical,bias_corrected");
    for (const auto& name : split_list(est_list)) {
        EstimatorConfig est;
        est.kind = parse_estimator(name);
        est.alpha = cfg.alpha;
        est.sampling = sampling;
        est.median_copies = copies;
        est.tau_rule = rule;
        cfg.estimators.push_back(est);
    }

    std::string csv = run_experiment(cfg);
    if (cfg.output.empty()) std::cout << csv;
    return kExitOk;
}

struct SearchArgs {
    std::string distribution = "uniform";
    std::int64_t k = 1000;
    double alpha = 2.0;
    std::string estimator = "bias_corrected";
    double delta = 0.1;
    double epsilon = 0.1;
    int trials = 400;
    std::uint64_t seed = 0;
    std::uint64_t n_min = 16;
    std::uint64_t n_max = 1u << 24;
    std::string sampling = "fixed";
    int median_copies = 1;
    std::string tau_rule = "experiment";
    int threads = 0;
    std::string out;
};

int run_search(const SearchArgs& a) {
    DistributionSpec spec = parse_distribution(a.distribution);
    spec.k = a.k;
    EstimatorConfig est;
    est.kind = parse_estimator(a.estimator);
    est.sampling = parse_sampling(a.sampling);
    est.median_copies = a.median_copies;
    est.tau_rule = parse_tau_rule(a.tau_rule);

    SearchOptions opts;
    opts.delta = a.delta;
    opts.epsilon = a.epsilon;
    opts.trials = a.trials;
    opts.seed = a.seed;
    opts.n_min = a.n_min;
    opts.n_max = a.n_max;
    opts.threads = a.threads;

    SearchResult res = sample_complexity_search(spec, a.alpha, est, opts);
    std::string report;
    report += "distribution " + spec.name() + "\n";
    report += "k " + std::to_string(a.k) + "\n";
    report += "alpha " + format_sig(a.alpha) + "\n";
    report += "estimator " + a.estimator + "\n";
    report += "delta " + format_sig(a.delta) + "\n";
    report += "epsilon " + format_sig(a.epsilon) + "\n";
    report += "trials_per_n " + std::to_string(a.trials) + "\n";
    report += "n_star " + std::to_string(res.n_star) + "\n";
    report += "failure_rate " + format_sig(res.failure_rate) + "\n";
    report += "wilson_low " + format_sig(res.wilson_low) + "\n";
    report += "wilson_high " + format_sig(res.wilson_high) + "\n";
    write_or_print(a.out, report);
    return kExitOk;
}

struct CertificateArgs {
    std::string construction = "two_point";
    std::int64_t k = 10000;
    double alpha = 2.0;
    double delta = 0.05;
    double beta = 0.5;
    int d = 4;
    std::uint64_t n = 100;
    std::string mode = "product";
    double epsilon = 0.1;
    std::string base = "e";
    std::string out;
};

int run_certificate(const CertificateArgs& a) {
    HardInstance inst = [&] {
        if (a.construction == "two_point")
            return two_point_integer_pair(a.k, static_cast<int>(a.alpha), a.delta);
        if (a.construction == "matched_moments")
            return matched_moment_distributions(newton_girard_vectors(a.d), a.k, a.alpha);
        if (a.construction == "scaled")
            return scaled_pair_alpha_lt1(newton_girard_vectors(a.d), a.k, a.alpha, a.beta);
        throw ConfigError("unknown construction '" + a.construction +
                          "' (expected two_point, matched_moments or scaled)");
    }();
    CertificateMode mode;
    if (a.mode == "product") mode = CertificateMode::product;
    else if (a.mode == "profile") mode = CertificateMode::profile;
    else throw ConfigError("unknown mode '" + a.mode + "' (expected product or profile)");

    LeCamCertificate cert;
    try {
        cert = lecam_certificate(inst, a.n, mode, a.epsilon);
    } catch (const PreconditionViolated& ex) {
        throw PreconditionViolated(
            std::string(ex.what()) +
            "; lower n, raise epsilon, or grow the support so all probabilities fit under "
            "epsilon/(40 n)");
    }

    std::string report;
    report += "construction " + std::string(construction_name(inst.construction)) + "\n";
    report += "alpha " + format_sig(inst.alpha) + "\n";
    report += "support " + std::to_string(inst.p.support_size()) + "\n";
    report += "n " + std::to_string(a.n) + "\n";
    report += "mode " + a.mode + "\n";
    report += "entropy_gap " + format_sig(in_base(cert.gap, a.base)) + "\n";
    report += "distance_bound " + format_sig(cert.distance_bound) + "\n";
    report += "risk_lower_bound " + format_sig(cert.risk_lower_bound) + "\n";
    report += "statement: any estimator within " + format_sig(in_base(cert.gap / 2, a.base)) +
              " of the truth on both distributions errs with probability >= " +
              format_sig(cert.risk_lower_bound) + " on one of them\n";
    if (cert.gap <= 0.0) report += "warning: zero gap, certificate is vacuous\n";
    write_or_print(a.out, report);
    return kExitOk;
}

struct ApproxArgs {
    double alpha = 2.0;
    int d = 8;
    bool shifted = false;
    std::string out;
};

int run_approx(const ApproxArgs& a) {
    std::string report;
    if (a.shifted) {
        EstimatorPolynomial q = best_shifted_approx(a.alpha, a.d);
        report += "alpha " + format_sig(q.alpha, 17) + "\n";
        report += "degree " + std::to_string(q.degree) + "\n";
        for (double c : q.coeffs) report += "coeff " + format_sig(c, 17) + "\n";
        report += "sup_error " + format_sig(q.sup_error, 17) + "\n";
    } else {
        RemezResult r = remez_best_approx(a.alpha, a.d);
        report += "alpha " + format_sig(a.alpha, 17) + "\n";
        report += "degree " + std::to_string(a.d) + "\n";
        for (double c : r.coeffs) report += "coeff " + format_sig(c, 17) + "\n";
        report += "minimax_error " + format_sig(r.minimax_error, 17) + "\n";
        for (double x : r.extrema) report += "extremum " + format_sig(x, 17) + "\n";
    }
    write_or_print(a.out, report);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Renyi entropy estimation toolkit"};
    app.require_subcommand(1);

    EstimateArgs ea;
    auto* est_cmd = app.add_subcommand("estimate", "one-shot estimate from sample tokens");
    est_cmd->add_option("input", ea.input, "sample file, or - for stdin")->required();
    est_cmd->add_option("--alpha", ea.alpha, "entropy order");
    est_cmd->add_option("--estimator", ea.estimator,
                        "empirical | bias_corrected | polynomial");
    est_cmd->add_option("--median-copies", ea.median_copies, "median amplification copies");
    est_cmd->add_option("--tau", ea.tau, "polynomial threshold override");
    est_cmd->add_option("--degree", ea.degree, "polynomial degree override");
    est_cmd->add_option("--tau-rule", ea.tau_rule, "experiment | proof");
    est_cmd->add_option("--base", ea.base, "entropy units: e (nats) or 2 (bits)");
    est_cmd->add_option("--dist-file", ea.dist_file,
                        "true distribution, one probability per line");
    est_cmd->add_option("--out", ea.out, "write the report here instead of stdout");

    ExperimentArgs xa;
    auto* exp_cmd = app.add_subcommand("experiment", "config-driven CSV experiment");
    exp_cmd->add_option("--config", xa.config, "flat key = value config file");
    exp_cmd->add_option("--distributions", xa.distributions, "comma list of specs");
    exp_cmd->add_option("--k", xa.k, "support size");
    exp_cmd->add_option("--alpha", xa.alpha, "entropy order");
    exp_cmd->add_option("--estimators", xa.estimators, "comma list of estimators");
    exp_cmd->add_option("--n-grid", xa.n_grid, "start:stop:step or comma list");
    exp_cmd->add_option("--trials", xa.trials, "trials per row");
    exp_cmd->add_option("--seed", xa.seed, "rng seed")->each([&](const std::string&) {
        xa.seed_set = true;
    });
    exp_cmd->add_option("--sampling", xa.sampling, "fixed | poisson");
    exp_cmd->add_option("--median-copies", xa.median_copies, "median amplification copies");
    exp_cmd->add_option("--tau-rule", xa.tau_rule, "experiment | proof");
    exp_cmd->add_option("--threads", xa.threads, "worker threads (0 = auto)");
    exp_cmd->add_option("--out", xa.out, "CSV output path (default stdout)");

    SearchArgs sa;
    auto* search_cmd = app.add_subcommand("search", "sample-complexity search");
    search_cmd->add_option("--distribution", sa.distribution, "distribution spec");
    search_cmd->add_option("--k", sa.k, "support size");
    search_cmd->add_option("--alpha", sa.alpha, "entropy order");
    search_cmd->add_option("--estimator", sa.estimator, "estimator kind");
    search_cmd->add_option("--delta", sa.delta, "accuracy in nats");
    search_cmd->add_option("--epsilon", sa.epsilon, "tolerated failure probability");
    search_cmd->add_option("--trials", sa.trials, "trials per candidate n");
    search_cmd->add_option("--seed", sa.seed, "rng seed");
    search_cmd->add_option("--n-min", sa.n_min, "grid minimum");
    search_cmd->add_option("--n-max", sa.n_max, "budget cap");
    search_cmd->add_option("--sampling", sa.sampling, "fixed | poisson");
    search_cmd->add_option("--median-copies", sa.median_copies, "median copies");
    search_cmd->add_option("--tau-rule", sa.tau_rule, "experiment | proof");
    search_cmd->add_option("--threads", sa.threads, "worker threads (0 = auto)");
    search_cmd->add_option("--out", sa.out, "write the report here instead of stdout");

    CertificateArgs ca;
    auto* cert_cmd = app.add_subcommand("certificate", "hardness certificate");
    cert_cmd->add_option("--construction", ca.construction,
                         "two_point | matched_moments | scaled");
    cert_cmd->add_option("--k", ca.k, "support scale");
    cert_cmd->add_option("--alpha", ca.alpha, "entropy order");
    cert_cmd->add_option("--delta", ca.delta, "two-point perturbation");
    cert_cmd->add_option("--beta", ca.beta, "scaled construction exponent");
    cert_cmd->add_option("--d", ca.d, "moment-matching order");
    cert_cmd->add_option("--n", ca.n, "sample size the certificate covers");
    cert_cmd->add_option("--mode", ca.mode, "product | profile");
    cert_cmd->add_option("--epsilon", ca.epsilon, "profile-mode accuracy parameter");
    cert_cmd->add_option("--base", ca.base, "entropy units: e or 2");
    cert_cmd->add_option("--out", ca.out, "write the report here instead of stdout");

    ApproxArgs aa;
    auto* approx_cmd = app.add_subcommand("approx", "dump the minimax polynomial");
    approx_cmd->add_option("--alpha", aa.alpha, "exponent of x^alpha")->required();
    approx_cmd->add_option("--d", aa.d, "polynomial degree")->required();
    approx_cmd->add_flag("--shifted", aa.shifted, "apply the q(0) = 0 shift");
    approx_cmd->add_option("--out", aa.out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (est_cmd->parsed()) return run_estimate(ea);
        if (exp_cmd->parsed()) return run_experiment_cmd(xa);
        if (search_cmd->parsed()) return run_search(sa);
        if (cert_cmd->parsed()) return run_certificate(ca);
        if (approx_cmd->parsed()) return run_approx(aa);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitConfig;
}
