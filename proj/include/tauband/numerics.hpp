#pragma once

// Shared numerical kernels: bracketed 1-D root finding, a grid-seeded damped
// Newton solver for 2x2 nonlinear systems, composite quadrature on [0,1],
// and the standard normal CDF / quantile pair.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "tauband/errors.hpp"

namespace tauband {

struct SolverConfig {
    double tol_residual = 1e-10;
    double tol_root = 1e-12;
    int max_iter = 200;
    int grid_points = 64;
};

namespace detail {

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace detail

// Bracketing bisection refined by secant steps. Result does not depend on
// bracket orientation; throws if f(a) and f(b) have the same sign.
template <class F>
double find_root(F&& f, double a, double b, const SolverConfig& cfg = {}) {
    if (a > b) std::swap(a, b);
    double fa = f(a);
    double fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (std::signbit(fa) == std::signbit(fb)) {
        throw SolverError("find_root: no sign change on bracket [" + detail::fmt_g(a) +
                          ", " + detail::fmt_g(b) + "], f = (" + detail::fmt_g(fa) + ", " +
                          detail::fmt_g(fb) + ")");
    }
    const int iters = std::max(cfg.max_iter, 120);
    double x = a, fx = fa;
    bool last_was_bisect = true;
    for (int it = 0; it < iters; ++it) {
        // secant candidate through the bracket ends, safeguarded by bisection
        double xs = b - fb * (b - a) / (fb - fa);
        const double mid = 0.5 * (a + b);
        const double span = b - a;
        const bool secant_ok = std::isfinite(xs) && xs > a + 0.01 * span && xs < b - 0.01 * span;
        if (!secant_ok || last_was_bisect == false) {
            x = mid;
            last_was_bisect = true;
        } else {
            x = xs;
            last_was_bisect = false;
        }
        fx = f(x);
        if (fx == 0.0) return x;
        if (std::abs(fx) <= cfg.tol_residual && span <= 1e-6 * std::max(1.0, std::abs(x)))
            return x;
        if (std::signbit(fx) == std::signbit(fa)) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        if (b - a <= cfg.tol_root * std::max(1.0, std::abs(a) + std::abs(b)))
            return std::abs(fa) < std::abs(fb) ? a : b;
    }
    return std::abs(fa) < std::abs(fb) ? a : b;
}

struct SeedBox {
    double x_lo, x_hi, y_lo, y_hi;
};

struct Solve2dResult {
    double x = 0.0;
    double y = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
};

// F maps (x, y) -> two residuals. Residuals are expected to be scaled by the
// caller; convergence is on the max-norm. Out-of-domain points may signal
// themselves with non-finite or huge residuals.
template <class F2>
Solve2dResult solve_2d(F2&& F, const SeedBox& box, const SolverConfig& cfg = {}) {
    auto norm = [](const std::array<double, 2>& r) {
        if (!std::isfinite(r[0]) || !std::isfinite(r[1]))
            return std::numeric_limits<double>::infinity();
        return std::max(std::abs(r[0]), std::abs(r[1]));
    };

    // coarse scan for seeds
    const int n = std::max(cfg.grid_points, 8);
    struct Seed {
        double x, y, r;
    };
    std::array<Seed, 6> seeds;
    seeds.fill({0.0, 0.0, std::numeric_limits<double>::infinity()});
    for (int i = 0; i <= n; ++i) {
        const double x = box.x_lo + (box.x_hi - box.x_lo) * i / n;
        for (int j = 0; j <= n; ++j) {
            const double y = box.y_lo + (box.y_hi - box.y_lo) * j / n;
            const double r = norm(F(x, y));
            if (r < seeds.back().r) {
                seeds.back() = {x, y, r};
                std::sort(seeds.begin(), seeds.end(),
                          [](const Seed& a, const Seed& b) { return a.r < b.r; });
            }
        }
    }

    Solve2dResult best;
    int iter_budget = std::max(cfg.max_iter, 40);
    for (const Seed& seed : seeds) {
        if (!std::isfinite(seed.r)) continue;
        double x = seed.x, y = seed.y;
        std::array<double, 2> r = F(x, y);
        double rn = norm(r);
        for (int it = 0; it < iter_budget && rn > cfg.tol_residual; ++it) {
            ++best.iterations;
            const double hx = 1e-7 * std::max(1.0, std::abs(x));
            const double hy = 1e-7 * std::max(1.0, std::abs(y));
            const auto fxp = F(x + hx, y), fxm = F(x - hx, y);
            const auto fyp = F(x, y + hy), fym = F(x, y - hy);
            const double j00 = (fxp[0] - fxm[0]) / (2 * hx), j01 = (fyp[0] - fym[0]) / (2 * hy);
            const double j10 = (fxp[1] - fxm[1]) / (2 * hx), j11 = (fyp[1] - fym[1]) / (2 * hy);
            const double det = j00 * j11 - j01 * j10;
            if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
            const double dx = -(r[0] * j11 - r[1] * j01) / det;
            const double dy = -(j00 * r[1] - j10 * r[0]) / det;
            // step halving until the residual norm decreases
            double step = 1.0;
            bool accepted = false;
            for (int h = 0; h < 30; ++h, step *= 0.5) {
                const double xn = x + step * dx, yn = y + step * dy;
                const auto rneu = F(xn, yn);
                const double rnn = norm(rneu);
                if (rnn < rn) {
                    x = xn;
                    y = yn;
                    r = rneu;
                    rn = rnn;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
        }
        if (rn < best.residual) {
            best.x = x;
            best.y = y;
            best.residual = rn;
        }
        if (best.residual <= cfg.tol_residual) return best;
    }
    throw SolverError("solve_2d: no convergence, best scaled residual " +
                      detail::fmt_g(best.residual) + " at (" + detail::fmt_g(best.x) + ", " +
                      detail::fmt_g(best.y) + ")");
}

// Mean value of f over [0,1] by composite Simpson quadrature.
template <class F>
double quadrature_mean(F&& f, int n_panels = 1024) {
    int m = std::max(2, n_panels);
    if (m % 2 != 0) ++m;
    const double h = 1.0 / m;
    double acc = f(0.0) + f(1.0);
    for (int i = 1; i < m; ++i) acc += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline double std_normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Acklam's rational approximation polished by two Halley iterations of the
// closed-form CDF; accurate to well under 1e-12 on (1e-300, 1 - 1e-16).
inline double std_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("std_normal_quantile: p must lie in (0,1), got " + detail::fmt_g(p));

    static constexpr double A[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double B[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double C[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double D[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q /
            (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5]) /
            ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0);
    }

    for (int it = 0; it < 2; ++it) {
        const double e = std_normal_cdf(x) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

}  // namespace tauband
