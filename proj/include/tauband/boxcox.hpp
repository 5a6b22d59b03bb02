#pragma once

// Box-Cox power transform, maximum-likelihood transfer-factor fit, and the
// Gaussian error statistics of normalized measured-vs-predicted stress.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "tauband/errors.hpp"
#include "tauband/numerics.hpp"

namespace tauband {

struct NormalizationState {
    double lambda = 1.0;     // Box-Cox transfer factor
    double mu_eps = 0.0;     // mean of transformed-space errors
    double delta_eps = 0.0;  // standard deviation (n-1) of transformed-space errors
    std::size_t n_points = 0;
};

inline double boxcox_forward(double x, double lambda) {
    if (!(x > 0.0))
        throw DomainError("boxcox_forward: x must be strictly positive, got " + detail::fmt_g(x));
    if (lambda == 0.0) return std::log(x);
    return std::expm1(lambda * std::log(x)) / lambda;
}

inline double boxcox_inverse(double z, double lambda) {
    if (lambda == 0.0) return std::exp(z);
    const double arg = lambda * z;
    if (!(arg > -1.0))
        throw DomainError("boxcox_inverse: lambda*z + 1 must be positive, got " +
                          detail::fmt_g(arg + 1.0));
    return std::exp(std::log1p(arg) / lambda);
}

namespace boxcox_detail {

// profile log-likelihood of normality for the transformed sample
inline double profile_loglik(std::span<const double> log_x, double lambda) {
    const std::size_t n = log_x.size();
    double mean = 0.0;
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = lambda == 0.0 ? log_x[i] : std::expm1(lambda * log_x[i]) / lambda;
        mean += z[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : z) ss += (v - mean) * (v - mean);
    const double var = ss / static_cast<double>(n);
    if (!(var > 0.0)) return -std::numeric_limits<double>::infinity();
    double sum_log = 0.0;
    for (double lx : log_x) sum_log += lx;
    return -0.5 * static_cast<double>(n) * std::log(var) + (lambda - 1.0) * sum_log;
}

}  // namespace boxcox_detail

// Maximizes the Box-Cox profile log-likelihood over lambda in [-3, 3]:
// 0.01-step grid scan followed by golden-section refinement around the best
// grid point.
inline double fit_lambda(std::span<const double> values, const WarnFn& warn = {}) {
    if (values.size() < 8)
        throw DomainError("fit_lambda: needs at least 8 values, got " +
                          std::to_string(values.size()));
    std::vector<double> log_x;
    log_x.reserve(values.size());
    for (double v : values) {
        if (!(v > 0.0)) throw DomainError("fit_lambda: values must be strictly positive");
        log_x.push_back(std::log(v));
    }
    const auto [mn, mx] = std::minmax_element(log_x.begin(), log_x.end());
    if (*mx - *mn < 1e-14)
        throw DomainError("fit_lambda: degenerate (constant) input");

    constexpr double lo = -3.0, hi = 3.0, step = 0.01;
    double best_lambda = lo;
    double best_ll = -std::numeric_limits<double>::infinity();
    const int n_grid = static_cast<int>(std::lround((hi - lo) / step));
    for (int i = 0; i <= n_grid; ++i) {
        const double lam = lo + i * step;
        const double ll = boxcox_detail::profile_loglik(log_x, lam);
        if (ll > best_ll) {
            best_ll = ll;
            best_lambda = lam;
        }
    }

    // golden-section maximization on [best - step, best + step]
    double a = std::max(lo, best_lambda - step);
    double b = std::min(hi, best_lambda + step);
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = boxcox_detail::profile_loglik(log_x, c);
    double fd = boxcox_detail::profile_loglik(log_x, d);
    while (b - a > 1e-8) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = boxcox_detail::profile_loglik(log_x, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = boxcox_detail::profile_loglik(log_x, d);
        }
    }
    const double refined = 0.5 * (a + b);
    if (refined <= lo + 1e-9 || refined >= hi - 1e-9)
        emit_warning(warn, "fit_lambda: maximizer at the edge of [-3, 3]");
    return refined;
}

// eps_i = Z_m,i - Z_p,i in Box-Cox space; mu_eps is their mean and delta_eps
// the sample standard deviation (n-1 denominator).
inline NormalizationState error_stats(std::span<const double> measured,
                                      std::span<const double> predicted, double lambda) {
    if (measured.size() != predicted.size())
        throw DataError("error_stats: measured/predicted length mismatch");
    if (measured.size() < 2)
        throw DataError("error_stats: needs at least 2 paired points");
    const std::size_t n = measured.size();
    std::vector<double> eps(n);
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        eps[i] = boxcox_forward(measured[i], lambda) - boxcox_forward(predicted[i], lambda);
        mu += eps[i];
    }
    mu /= static_cast<double>(n);
    double ss = 0.0;
    for (double e : eps) ss += (e - mu) * (e - mu);
    NormalizationState st;
    st.lambda = lambda;
    st.mu_eps = mu;
    st.delta_eps = std::sqrt(ss / static_cast<double>(n - 1));
    st.n_points = n;
    return st;
}

}  // namespace tauband
