#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "renyi/errors.hpp"

namespace renyi {

/// Shifted best uniform approximation of x^alpha on [0,1]: q(0) = 0,
/// monomial coefficients a_1..a_d, with a certified sup error.
struct EstimatorPolynomial {
    double alpha = 0.0;
    int degree = 0;
    std::vector<double> coeffs;  // a_1..a_d (a_0 is identically 0)
    double sup_error = 0.0;
    std::vector<double> equioscillation_points;

    double evaluate(double x) const {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (acc + *it) * x;
        return acc;
    }
};

struct RemezResult {
    std::vector<double> coeffs;  // a_0..a_d, monomial basis on [0,1]
    double minimax_error = 0.0;
    std::vector<double> extrema;
    std::vector<double> cheb_coeffs;  // same polynomial in T_j(2x - 1); may be empty
};

namespace detail {

// Solve A z = rhs in place, partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> a,
                                       std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(rhs[col], rhs[piv]);
        if (a[col][col] == 0.0) throw NoConvergence("singular alternation system");
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> z(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = rhs[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * z[c];
        z[i] = s / a[i][i];
    }
    return z;
}

// Chebyshev basis mapped to [0,1]: phi_j(x) = T_j(2x - 1).
inline double cheb01(int j, double x) {
    double y = 2.0 * x - 1.0;
    y = std::clamp(y, -1.0, 1.0);
    return std::cos(static_cast<double>(j) * std::acos(y));
}

inline double cheb_eval(const std::vector<double>& b, double x) {
    // Clenshaw in y = 2x - 1.
    const double y = 2.0 * x - 1.0;
    double u1 = 0.0, u2 = 0.0;
    for (std::size_t j = b.size(); j-- > 1;) {
        double u = 2.0 * y * u1 - u2 + b[j];
        u2 = u1;
        u1 = u;
    }
    return y * u1 - u2 + b[0];
}

// Monomial coefficients (in x on [0,1]) of sum_j b_j T_j(2x - 1).
inline std::vector<double> cheb_to_monomial(const std::vector<double>& b) {
    const std::size_t d = b.size() - 1;
    std::vector<double> prev{1.0};                 // T_0(2x-1)
    std::vector<double> curr{-1.0, 2.0};           // T_1(2x-1)
    std::vector<double> out(d + 1, 0.0);
    out[0] += b[0];
    if (d >= 1)
        for (std::size_t m = 0; m < curr.size(); ++m) out[m] += b[1] * curr[m];
    for (std::size_t j = 2; j <= d; ++j) {
        std::vector<double> next(j + 1, 0.0);
        for (std::size_t m = 0; m <= j; ++m) {
            double v = 0.0;
            if (m >= 1) v += 4.0 * curr[m - 1];
            if (m < curr.size()) v -= 2.0 * curr[m];
            if (m < prev.size()) v -= prev[m];
            next[m] = v;
        }
        for (std::size_t m = 0; m <= j; ++m) out[m] += b[j] * next[m];
        prev = std::move(curr);
        curr = std::move(next);
    }
    return out;
}

// Golden-section search for the maximum of f on [lo, hi].
template <typename F>
double golden_max(F&& f, double lo, double hi) {
    constexpr double invphi = 0.6180339887498948482;
    double a = lo, bnd = hi;
    double c = bnd - invphi * (bnd - a);
    double d = a + invphi * (bnd - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 80 && (bnd - a) > 1e-15; ++it) {
        if (fc > fd) {
            bnd = d;
            d = c;
            fd = fc;
            c = bnd - invphi * (bnd - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (bnd - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + bnd);
}

} // namespace detail

/// Remez exchange for the best uniform approximation of x^alpha on [0,1].
/// The linear system is solved in the Chebyshev basis of the interval;
/// coefficients are converted to monomials on output. For integer alpha <= d
/// the monomial x^alpha is returned with zero error.
inline RemezResult remez_best_approx(double alpha, int d) {
    if (!(alpha > 0.0)) throw InvalidParameters("alpha must be > 0");
    if (d < 1 || d > 60) throw InvalidParameters("degree must be in [1, 60]");

    const bool integral = alpha == std::floor(alpha);
    if (integral && alpha <= static_cast<double>(d)) {
        RemezResult exact;
        exact.coeffs.assign(static_cast<std::size_t>(d) + 1, 0.0);
        exact.coeffs[static_cast<std::size_t>(alpha)] = 1.0;
        return exact;
    }

    const auto f = [alpha](double x) { return std::pow(x, alpha); };
    const std::size_t npts = static_cast<std::size_t>(d) + 2;

    // Chebyshev extrema of the interval as the initial reference.
    std::vector<double> ref(npts);
    for (std::size_t i = 0; i < npts; ++i)
        ref[i] = 0.5 * (1.0 - std::cos(M_PI * static_cast<double>(i) /
                                       static_cast<double>(npts - 1)));

    constexpr int grid_size = 4096;
    constexpr int max_iter = 50;
    std::vector<double> b;
    double level = 0.0;

    for (int iter = 0; iter < max_iter; ++iter) {
        // Alternation system: sum_j b_j phi_j(x_i) + (-1)^i E = f(x_i).
        std::vector<std::vector<double>> mat(npts, std::vector<double>(npts));
        std::vector<double> rhs(npts);
        for (std::size_t i = 0; i < npts; ++i) {
            for (int j = 0; j <= d; ++j) mat[i][static_cast<std::size_t>(j)] = detail::cheb01(j, ref[i]);
            mat[i][npts - 1] = (i % 2 == 0) ? 1.0 : -1.0;
            rhs[i] = f(ref[i]);
        }
        std::vector<double> sol = detail::solve_dense(std::move(mat), std::move(rhs));
        b.assign(sol.begin(), sol.begin() + d + 1);
        level = std::abs(sol.back());

        const auto err = [&](double x) { return detail::cheb_eval(b, x) - f(x); };

        // Locate extrema of |err|: scan a cosine-spaced grid (the residual's
        // oscillations crowd toward 0 for fractional alpha, so a uniform grid
        // misses them at high degree), then refine by golden section.
        const auto grid_x = [&](int g) {
            return 0.5 * (1.0 - std::cos(M_PI * g / grid_size));
        };
        std::vector<std::pair<double, double>> cand;  // (x, err)
        double eprev = err(grid_x(0)), ecur = err(grid_x(1));
        cand.emplace_back(0.0, eprev);
        for (int g = 1; g < grid_size; ++g) {
            double enext = err(grid_x(g + 1));
            bool localmax = ecur >= eprev && ecur >= enext && ecur > 0.0;
            bool localmin = ecur <= eprev && ecur <= enext && ecur < 0.0;
            if (localmax || localmin) {
                double sign = localmax ? 1.0 : -1.0;
                double x = detail::golden_max([&](double t) { return sign * err(t); },
                                              grid_x(g - 1), grid_x(g + 1));
                cand.emplace_back(x, err(x));
            }
            eprev = ecur;
            ecur = enext;
        }
        cand.emplace_back(1.0, err(1.0));

        // Collapse same-sign neighbors, keep the largest magnitude per run.
        std::vector<std::pair<double, double>> alt;
        for (const auto& c : cand) {
            if (!alt.empty() && (alt.back().second >= 0.0) == (c.second >= 0.0)) {
                if (std::abs(c.second) > std::abs(alt.back().second)) alt.back() = c;
            } else {
                alt.push_back(c);
            }
        }
        // Trim to d+2 by dropping smallest-magnitude points, re-collapsing.
        while (alt.size() > npts) {
            std::size_t imin = 0;
            for (std::size_t i = 1; i < alt.size(); ++i)
                if (std::abs(alt[i].second) < std::abs(alt[imin].second)) imin = i;
            alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(imin));
            for (std::size_t i = 0; i + 1 < alt.size();) {
                if ((alt[i].second >= 0.0) == (alt[i + 1].second >= 0.0)) {
                    if (std::abs(alt[i].second) >= std::abs(alt[i + 1].second))
                        alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(i) + 1);
                    else
                        alt.erase(alt.begin() + static_cast<std::ptrdiff_t>(i));
                } else {
                    ++i;
                }
            }
        }
        if (alt.size() < npts) throw NoConvergence("lost equioscillation alternation");

        double emax = 0.0, emin = std::numeric_limits<double>::infinity();
        for (const auto& c : alt) {
            emax = std::max(emax, std::abs(c.second));
            emin = std::min(emin, std::abs(c.second));
        }
        for (std::size_t i = 0; i < npts; ++i) ref[i] = alt[i].first;
        // the absolute floor covers residual-evaluation rounding noise once
        // the minimax level itself sinks toward machine precision
        if (emax > 0.0 && (emax - emin) < 1e-10 * emax + 1e-13) {
            RemezResult out;
            out.coeffs = detail::cheb_to_monomial(b);
            out.minimax_error = emax;
            out.extrema = ref;
            out.cheb_coeffs = b;
            return out;
        }
    }
    throw NoConvergence("remez exchange did not converge within the iteration cap");
}

/// Drop the constant term so q(0) = 0; the certified error doubles.
/// Validates Markov's coefficient bound on the polynomial rescaled to [-1,1].
inline EstimatorPolynomial shift_to_zero(const RemezResult& raw) {
    EstimatorPolynomial q;
    q.degree = static_cast<int>(raw.coeffs.size()) - 1;
    q.coeffs.assign(raw.coeffs.begin() + 1, raw.coeffs.end());
    q.sup_error = 2.0 * raw.minimax_error;
    q.equioscillation_points = raw.extrema;

    // |q| <= 1 + sup_error on [0,1]; expanding q((t+1)/2) in t on [-1,1],
    // Markov's inequality bounds every coefficient by (1+sup)*(sqrt(2)+1)^d.
    const std::size_t d = q.coeffs.size();
    std::vector<double> shifted(d + 1, 0.0);
    if (!raw.cheb_coeffs.empty()) {
        // q((t+1)/2) = sum_j b_j T_j(t) - p(0): expand the standard Chebyshev
        // polynomials directly; going through the [0,1] monomials first loses
        // the bound to catastrophic cancellation at high degree.
        std::vector<double> prev{1.0}, curr{0.0, 1.0};
        shifted[0] += raw.cheb_coeffs[0];
        if (d >= 1) shifted[1] += raw.cheb_coeffs[1];
        for (std::size_t j = 2; j <= d; ++j) {
            std::vector<double> next(j + 1, 0.0);
            for (std::size_t m = 0; m <= j; ++m) {
                double v = 0.0;
                if (m >= 1) v += 2.0 * curr[m - 1];
                if (m < prev.size()) v -= prev[m];
                next[m] = v;
            }
            for (std::size_t m = 0; m <= j; ++m) shifted[m] += raw.cheb_coeffs[j] * next[m];
            prev = std::move(curr);
            curr = std::move(next);
        }
        shifted[0] -= raw.coeffs[0];  // the dropped constant term p(0)
    } else {
        // exact integer-alpha path: coefficients are small, the binomial
        // expansion of ((t+1)/2)^m is safe
        std::vector<double> power{1.0};
        for (std::size_t m = 1; m <= d; ++m) {
            std::vector<double> next(m + 1, 0.0);
            for (std::size_t j = 0; j < power.size(); ++j) {
                next[j] += 0.5 * power[j];
                next[j + 1] += 0.5 * power[j];
            }
            power = std::move(next);
            double am = q.coeffs[m - 1];
            for (std::size_t j = 0; j <= m; ++j) shifted[j] += am * power[j];
        }
    }
    const double bound =
        (1.0 + q.sup_error) * std::pow(std::sqrt(2.0) + 1.0, static_cast<double>(d));
    for (double c : shifted)
        if (std::abs(c) > bound * (1.0 + 1e-9))
            throw MarkovBoundViolated("coefficient bound exceeded; Remez output is suspect");
    return q;
}

inline EstimatorPolynomial best_shifted_approx(double alpha, int d) {
    EstimatorPolynomial q = shift_to_zero(remez_best_approx(alpha, d));
    q.alpha = alpha;
    return q;
}

/// Weights of the small-count branch: w_m = a_m (2 tau)^(alpha - m) / n^alpha.
inline std::vector<double> scale_weights(const EstimatorPolynomial& poly, double tau, double n) {
    if (!(tau > 0.0) || !(n > 0.0)) throw InvalidParameters("tau and n must be > 0");
    std::vector<double> w(poly.coeffs.size());
    const double na = std::pow(n, poly.alpha);
    for (std::size_t m = 1; m <= poly.coeffs.size(); ++m)
        w[m - 1] = poly.coeffs[m - 1] *
                   std::pow(2.0 * tau, poly.alpha - static_cast<double>(m)) / na;
    return w;
}

inline void save_polynomial(const std::string& path, const EstimatorPolynomial& poly) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    char buf[64];
    auto line = [&](const char* key, double v) {
        std::snprintf(buf, sizeof(buf), "%s %.17g\n", key, v);
        out << buf;
    };
    line("alpha", poly.alpha);
    out << "degree " << poly.degree << "\n";
    for (double a : poly.coeffs) line("coeff", a);
    line("sup_error", poly.sup_error);
}

inline EstimatorPolynomial load_polynomial(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    EstimatorPolynomial poly;
    std::string key;
    while (in >> key) {
        if (key == "alpha")
            in >> poly.alpha;
        else if (key == "degree")
            in >> poly.degree;
        else if (key == "coeff") {
            double v;
            in >> v;
            poly.coeffs.push_back(v);
        } else if (key == "sup_error")
            in >> poly.sup_error;
        else
            throw Error("unknown key in polynomial cache: " + key);
    }
    if (static_cast<int>(poly.coeffs.size()) != poly.degree)
        throw DegreeMismatch("cached coefficient count disagrees with degree");
    return poly;
}

} // namespace renyi
