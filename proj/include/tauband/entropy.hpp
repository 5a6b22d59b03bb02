#pragma once

// The four entropy shear-stress profiles (Shannon, Shannon power-law,
// Tsallis, Renyi) with their Lagrange-multiplier constraint solvers, and the
// section-wise profile predictor.
//
// Every profile is evaluated in a segment-local coordinate u in [0,1] with
// tau(0) = 0 and tau(1) = tau_max; the constraint systems pin tau(1) and the
// profile mean. Formulas are rearranged around expm1/log1p so that the
// removable singularities (Shannon lambda0 -> 0, Tsallis lambda1 -> 0, Renyi
// lambda' -> 0 and k'+1 -> 0) evaluate stably.

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tauband/errors.hpp"
#include "tauband/geometry.hpp"
#include "tauband/knight.hpp"
#include "tauband/numerics.hpp"
#include "tauband/profile.hpp"

namespace tauband {

enum class ModelId { shannon, shannon_pl, tsallis, renyi, rho_g_r_s };

inline const char* to_string(ModelId m) {
    switch (m) {
        case ModelId::shannon: return "shannon";
        case ModelId::shannon_pl: return "shannon_pl";
        case ModelId::tsallis: return "tsallis";
        case ModelId::renyi: return "renyi";
        case ModelId::rho_g_r_s: return "rho_g_r_s";
    }
    return "?";
}

inline ModelId parse_model_id(const std::string& s) {
    if (s == "shannon") return ModelId::shannon;
    if (s == "shannon_pl") return ModelId::shannon_pl;
    if (s == "tsallis") return ModelId::tsallis;
    if (s == "renyi") return ModelId::renyi;
    if (s == "rho_g_r_s") return ModelId::rho_g_r_s;
    throw ConfigError("unknown model id '" + s +
                      "' (expected shannon, shannon_pl, tsallis, renyi or rho_g_r_s)");
}

struct StressTargets {
    double tau_mean = 0.0;  // [Pa]
    double tau_max = 0.0;   // [Pa]

    double tau_hat() const { return tau_mean / tau_max; }
    void validate(const char* who) const {
        if (!(tau_mean > 0.0 && tau_mean < tau_max))
            throw DomainError(std::string(who) + ": targets must satisfy 0 < tau_mean (" +
                              detail::fmt_g(tau_mean) + ") < tau_max (" +
                              detail::fmt_g(tau_max) + ")");
    }
};

struct ModelConfig {
    double q = 2.0;           // Tsallis entropy order
    double alpha_prime = 0.5; // Renyi entropy order, in (0,1)
    double rho = 1000.0;      // fluid density [kg/m^3]
    double g = 9.81;          // gravity [m/s^2]
    SolverConfig solver{};
};

// ---------------------------------------------------------------------------
// Shannon
// ---------------------------------------------------------------------------

namespace entropy_detail {

// mean(tau)/tau_max of the Shannon profile as a function of G = lambda0*tau_max:
// h(G) = 1/(1 - e^-G) - 1/G, h(0) = 1/2, strictly increasing from 0 to 1.
inline double shannon_mean_fraction(double G) {
    if (std::abs(G) < 1e-5) return 0.5 + G / 12.0 - G * G * G / 720.0;
    if (G > 0.0) return 1.0 / (-std::expm1(-G)) - 1.0 / G;
    return 1.0 - shannon_mean_fraction(-G);
}

}  // namespace entropy_detail

// Solves the mean constraint tau_mean = tau_max*e^G/(e^G - 1) - 1/lambda0 for
// lambda0 (G = lambda0*tau_max). The symmetric case tau_mean = tau_max/2 gives
// lambda0 = 0 exactly (linear profile).
inline double solve_shannon(const StressTargets& targets, const SolverConfig& cfg = {}) {
    targets.validate("solve_shannon");
    const double that = targets.tau_hat();
    if (that == 0.5) return 0.0;

    auto f = [&](double G) { return entropy_detail::shannon_mean_fraction(G) - that; };
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 64 && f(lo) > 0.0; ++i) lo *= 2.0;
    for (int i = 0; i < 64 && f(hi) < 0.0; ++i) hi *= 2.0;
    SolverConfig c = cfg;
    c.tol_residual = 0.0;  // converge on bracket width
    c.tol_root = 4e-16;
    const double G = find_root(f, lo, hi, c);
    return G / targets.tau_max;
}

inline double shannon_profile(double lambda0, double tau_max, double u) {
    if (!(u >= -1e-12 && u <= 1.0 + 1e-12))
        throw DomainError("shannon_profile: u outside [0,1]");
    u = std::clamp(u, 0.0, 1.0);
    const double G = lambda0 * tau_max;
    if (std::abs(G) < 1e-12) return tau_max * u;
    return tau_max * std::log1p(std::expm1(G) * u) / G;
}

// ---------------------------------------------------------------------------
// Shannon power-law
// ---------------------------------------------------------------------------

inline double powerlaw_n(const StressTargets& targets) {
    targets.validate("powerlaw_n");
    return targets.tau_mean / (targets.tau_max - targets.tau_mean);
}

inline double powerlaw_profile(double n, double tau_max, double u) {
    if (!(n > 0.0)) throw DomainError("powerlaw_profile: n must be positive");
    if (!(u >= -1e-12 && u <= 1.0 + 1e-12))
        throw DomainError("powerlaw_profile: u outside [0,1]");
    u = std::clamp(u, 0.0, 1.0);
    return tau_max * std::pow(u, 1.0 / n);
}

// ---------------------------------------------------------------------------
// Tsallis
// ---------------------------------------------------------------------------

struct TsallisParams {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double k = 0.5;
    double q = 2.0;
};

inline double tsallis_k_from_q(double q) {
    if (q == 0.0) throw DomainError("tsallis: q must be nonzero");
    const double k = (q - 1.0) / q;
    if (!(k > 0.0 && k < 1.0))
        throw DomainError("tsallis: q = " + detail::fmt_g(q) +
                          " yields k = (q-1)/q outside (0,1)");
    return k;
}

// Attainable dimensionless means: tau_hat in (k/(k+1), 1/(k+1)).
inline std::array<double, 2> tsallis_tau_hat_range(double k) {
    return {k / (k + 1.0), 1.0 / (k + 1.0)};
}

inline double tsallis_profile(double lambda1, double lambda2, double k, double u) {
    if (!(k > 0.0 && k < 1.0)) throw DomainError("tsallis_profile: k outside (0,1)");
    if (!(u >= -1e-12 && u <= 1.0 + 1e-12))
        throw DomainError("tsallis_profile: u outside [0,1]");
    u = std::clamp(u, 0.0, 1.0);
    if (lambda2 < 0.0) throw DomainError("tsallis_profile: lambda2 < 0 (root argument)");
    const double A = lambda2 > 0.0 ? std::pow(lambda2 / k, k) : 0.0;
    if (A == 0.0) {
        if (u == 0.0) return 0.0;
        const double base = lambda1 * u;
        if (base < 0.0)
            throw DomainError("tsallis_profile: negative root argument at u = " +
                              detail::fmt_g(u));
        return (k / lambda1) * std::pow(base, 1.0 / k);
    }
    if (lambda1 == 0.0) return std::pow(lambda2 / k, 1.0 - k) * u;
    const double x = lambda1 * u / A;
    if (1.0 + x <= 0.0)
        throw DomainError("tsallis_profile: negative root argument at u = " + detail::fmt_g(u));
    return (lambda2 / lambda1) * std::expm1(std::log1p(x) / k);
}

inline double tsallis_profile(const TsallisParams& p, double u) {
    return tsallis_profile(p.lambda1, p.lambda2, p.k, u);
}

// Scaled residuals of the two constraint equations. The first is the total
// probability constraint (equivalently tau(1) = tau_max); the second is the
// mean constraint
//   tau_max*(k+1)*l1*B^k - B^(k+1) + l2^(k+1) = (k+1)*l1^2*k^k*tau_mean,
// with B = l2 + l1*tau_max.
inline std::array<double, 2> tsallis_residuals(double l1, double l2, double k,
                                               double tau_max, double tau_mean) {
    const double B = l2 + l1 * tau_max;
    if (l2 < 0.0 || B < 0.0)
        throw DomainError("tsallis_residuals: outside real domain (l2 or B negative)");
    const double kk = std::pow(k, k);
    const double t1a = std::pow(B, k), t1b = std::pow(l2, k), t1c = l1 * kk;
    double s1 = std::max({std::abs(t1a), std::abs(t1b), std::abs(t1c)});
    const double r1 = s1 > 0.0 ? (t1a - t1b - t1c) / s1 : 0.0;

    const double t2a = (k + 1.0) * l1 * tau_max * t1a;
    const double t2b = std::pow(B, k + 1.0);
    const double t2c = std::pow(l2, k + 1.0);
    const double t2d = (k + 1.0) * l1 * l1 * kk * tau_mean;
    double s2 = std::max({std::abs(t2a), std::abs(t2b), std::abs(t2c), std::abs(t2d)});
    const double r2 = s2 > 0.0 ? (t2a - t2b + t2c - t2d) / s2 : 0.0;
    return {r1, r2};
}

namespace entropy_detail {

// Root of the total-probability constraint in l2 for a given l1 (both
// nondimensional, tau_max = 1). Monotone in l2, so plain bracketing.
inline double tsallis_l2_of_l1(double l1, double k, const SolverConfig& cfg) {
    const double kk = std::pow(k, k);
    auto h = [&](double l2) { return std::pow(l2 + l1, k) - std::pow(l2, k) - l1 * kk; };
    SolverConfig c = cfg;
    c.tol_residual = 0.0;
    c.tol_root = 4e-16;
    if (l1 > 0.0) {
        if (h(0.0) < 0.0)
            throw SolverError("solve_tsallis: lambda1 beyond attainable range");
        double hi = std::max(l1, k);
        for (int i = 0; i < 200 && h(hi) > 0.0; ++i) hi *= 2.0;
        return find_root(h, 0.0, hi, c);
    }
    const double lo = -l1;
    if (h(lo) > 0.0) throw SolverError("solve_tsallis: lambda1 beyond attainable range");
    double hi = std::max(2.0 * lo, k);
    for (int i = 0; i < 200 && h(hi) < 0.0; ++i) hi *= 2.0;
    return find_root(h, lo, hi, c);
}

// Exact mean of the nondimensional profile; falls back to quadrature of the
// stable evaluator near l1 = 0 where the closed form cancels.
inline double tsallis_mean(double l1, double l2, double k) {
    if (std::abs(l1) < 1e-2) {
        return quadrature_mean([&](double u) { return tsallis_profile(l1, l2, k, u); }, 4096);
    }
    const double B = l2 + l1;
    const double num = (std::pow(B, k + 1.0) - std::pow(l2, k + 1.0)) / (k + 1.0) -
                       l2 * (std::pow(B, k) - std::pow(l2, k)) / k;
    return num / (l1 * l1 * std::pow(k, k - 1.0));
}

}  // namespace entropy_detail

inline TsallisParams solve_tsallis(const StressTargets& targets, double q = 2.0,
                                   const SolverConfig& cfg = {}) {
    targets.validate("solve_tsallis");
    const double k = tsallis_k_from_q(q);
    const double that = targets.tau_hat();
    const double tau_max = targets.tau_max;
    const auto range = tsallis_tau_hat_range(k);
    if (!(that > range[0] && that < range[1]))
        throw SolverError("solve_tsallis: tau_mean/tau_max = " + detail::fmt_g(that) +
                          " outside the attainable range (" + detail::fmt_g(range[0]) + ", " +
                          detail::fmt_g(range[1]) + ") for k = " + detail::fmt_g(k));

    const double dim1 = std::pow(tau_max, k / (1.0 - k));      // lambda1 scale
    const double dim2 = std::pow(tau_max, 1.0 / (1.0 - k));    // lambda2 scale

    // tau_hat = 1/2 makes lambda1 = 0 and both equations degenerate; the
    // limit solution is linear with lambda2 = k (nondimensional).
    if (std::abs(that - 0.5) < 1e-12)
        return {0.0, k * dim2, k, q};

    const double l1_cap = std::pow(k, -k / (1.0 - k));
    auto mean_gap = [&](double l1) {
        const double l2 = entropy_detail::tsallis_l2_of_l1(l1, k, cfg);
        return entropy_detail::tsallis_mean(l1, l2, k) - that;
    };
    SolverConfig rc = cfg;
    rc.tol_residual = 0.0;
    rc.tol_root = 4e-16;
    double l1;
    if (that < 0.5)
        l1 = find_root(mean_gap, 1e-9 * l1_cap, (1.0 - 1e-9) * l1_cap, rc);
    else
        l1 = find_root(mean_gap, -(1.0 - 1e-9) * l1_cap, -1e-9 * l1_cap, rc);
    double l2 = entropy_detail::tsallis_l2_of_l1(l1, k, cfg);

    // Newton polish through the generic 2-D solver where the Jacobian is
    // well conditioned (it loses rank as lambda1 -> 0).
    if (std::abs(that - 0.5) > 0.02) {
        auto F = [&](double a, double b) -> std::array<double, 2> {
            if (b < 0.0 || b + a < 0.0) return {1e30, 1e30};
            return tsallis_residuals(a, b, k, 1.0, that);
        };
        const double wa = std::max(0.02 * l1_cap, 0.05 * std::abs(l1));
        const double wb = std::max(0.02 * l1_cap, 0.05 * std::abs(l2));
        try {
            const auto r = solve_2d(F, {l1 - wa, l1 + wa, std::max(0.0, l2 - wb), l2 + wb}, cfg);
            l1 = r.x;
            l2 = r.y;
        } catch (const SolverError&) {
            // keep the bracketing solution; verified below
        }
    }

    const auto res = tsallis_residuals(l1, l2, k, 1.0, that);
    if (std::max(std::abs(res[0]), std::abs(res[1])) > cfg.tol_residual)
        throw SolverError("solve_tsallis: residuals (" + detail::fmt_g(res[0]) + ", " +
                          detail::fmt_g(res[1]) + ") above tolerance");
    return {l1 * dim1, l2 * dim2, k, q};
}

// ---------------------------------------------------------------------------
// Renyi
// ---------------------------------------------------------------------------

struct RenyiParams {
    double lambda_p = 0.0;   // lambda'
    double lambda_pp = 0.0;  // lambda''  (c = -lambda'' > 0)
    double k_p = -1.0;       // k' = alpha'/(alpha' - 1), negative on (0,1)
    double alpha_p = 0.5;
};

inline double renyi_k_from_alpha(double alpha_prime) {
    if (!(alpha_prime > 0.0 && alpha_prime < 1.0))
        throw DomainError("renyi: alpha' must lie in (0,1)");
    return alpha_prime / (alpha_prime - 1.0);
}

namespace entropy_detail {

inline double expm1_over(double z) { return z == 0.0 ? 1.0 : std::expm1(z) / z; }

// [(c-lp)^kp - c^kp] / lp, continuous through lp = 0.
inline double renyi_eq16_lhs(double lp, double c, double kp) {
    if (lp == 0.0) return -kp * std::pow(c, kp - 1.0);
    return std::pow(c, kp) * std::expm1(kp * std::log1p(-lp / c)) / lp;
}

// LHS of the mean constraint,
//   -(c-lp)^kp/lp - [(c-lp)^(kp+1) - c^(kp+1)] / (lp^2 (kp+1)),
// evaluated through both removable singularities (lp -> 0 and kp -> -1).
inline double renyi_eq17_lhs(double lp, double c, double kp) {
    const double x = lp / c;
    if (x == 0.0) return 0.5 * kp * std::pow(c, kp - 1.0);
    if (std::abs(kp * x) < 1e-4) {
        return std::pow(c, kp - 1.0) *
               (0.5 * kp - kp * (kp - 1.0) * x / 3.0 + kp * (kp - 1.0) * (kp - 2.0) * x * x / 8.0);
    }
    const double e = kp + 1.0;
    const double L = std::log1p(-x);
    const double V = L * expm1_over(e * L) + std::pow(1.0 - x, e) * x / (1.0 - x);
    return -std::pow(c, kp - 1.0) * V / (x * x);
}

}  // namespace entropy_detail

// Scaled residuals of the two Renyi constraint equations at (lambda', lambda'').
inline std::array<double, 2> renyi_residuals(double lambda_p, double lambda_pp,
                                             double alpha_prime, double tau_hat) {
    const double kp = renyi_k_from_alpha(alpha_prime);
    const double c = -lambda_pp;
    if (!(c > 0.0 && c - lambda_p > 0.0))
        throw DomainError("renyi_residuals: requires -lambda'' > 0 and -lambda'' - lambda' > 0");
    const double ak = std::pow(alpha_prime, kp);
    const double lhs1 = entropy_detail::renyi_eq16_lhs(lambda_p, c, kp);
    const double rhs1 = ak / (1.0 - alpha_prime);
    const double s1 = std::max({std::abs(lhs1), std::abs(rhs1), 1e-300});
    const double lhs2 = entropy_detail::renyi_eq17_lhs(lambda_p, c, kp);
    const double rhs2 = ak * tau_hat / (alpha_prime - 1.0);
    const double s2 = std::max({std::abs(lhs2), std::abs(rhs2), 1e-300});
    return {(lhs1 - rhs1) / s1, (lhs2 - rhs2) / s2};
}

inline double renyi_profile(double lambda_p, double lambda_pp, double k_p, double tau_max,
                            double u) {
    if (!(u >= -1e-12 && u <= 1.0 + 1e-12))
        throw DomainError("renyi_profile: u outside [0,1]");
    u = std::clamp(u, 0.0, 1.0);
    const double alpha = k_p / (k_p - 1.0);
    const double c = -lambda_pp;
    if (!(c > 0.0)) throw DomainError("renyi_profile: requires -lambda'' > 0");
    const double s = std::pow(alpha, k_p) / (alpha - 1.0);
    if (lambda_p == 0.0) return tau_max * u * (s / k_p) * std::pow(c, 1.0 - k_p);
    const double x = lambda_p * s * u * std::pow(c, -k_p);
    if (!(1.0 - x > 0.0))
        throw DomainError("renyi_profile: root argument nonpositive at u = " + detail::fmt_g(u));
    return -(tau_max * c / lambda_p) * std::expm1(std::log1p(-x) / k_p);
}

inline double renyi_profile(const RenyiParams& p, double tau_max, double u) {
    return renyi_profile(p.lambda_p, p.lambda_pp, p.k_p, tau_max, u);
}

namespace entropy_detail {

// Nested fallback: the total-probability constraint is monotone decreasing in
// c for fixed lambda', so c(lambda') brackets cleanly.
inline double renyi_c_of_lp(double lp, double kp, double rhs1, const SolverConfig& cfg) {
    auto f = [&](double c) { return renyi_eq16_lhs(lp, c, kp) - rhs1; };
    double lo = std::max(lp, 0.0) + 1e-12;
    double width = std::max(std::abs(lp), 0.25);
    lo = std::max(lp, 0.0) + 1e-6 * width;
    for (int i = 0; i < 300 && f(lo) < 0.0; ++i) lo = std::max(lp, 0.0) + (lo - std::max(lp, 0.0)) * 0.5;
    double hi = std::max(lp, 0.0) + width;
    for (int i = 0; i < 300 && f(hi) > 0.0; ++i) hi = std::max(lp, 0.0) + (hi - std::max(lp, 0.0)) * 2.0;
    SolverConfig c2 = cfg;
    c2.tol_residual = 0.0;
    c2.tol_root = 4e-16;
    return find_root(f, lo, hi, c2);
}

}  // namespace entropy_detail

inline RenyiParams solve_renyi(double tau_hat, double alpha_prime = 0.5,
                               const SolverConfig& cfg = {}) {
    if (!(tau_hat > 0.0 && tau_hat < 1.0))
        throw DomainError("solve_renyi: tau_hat must lie in (0,1)");
    const double kp = renyi_k_from_alpha(alpha_prime);
    // symmetric case: linear profile, lambda' = 0, -lambda'' = alpha'
    if (std::abs(tau_hat - 0.5) < 1e-12) return {0.0, -alpha_prime, kp, alpha_prime};

    auto F = [&](double lp, double c) -> std::array<double, 2> {
        if (!(c > 0.0 && c - lp > 0.0)) return {1e30, 1e30};
        return renyi_residuals(lp, -c, alpha_prime, tau_hat);
    };
    double lp = 0.0, c = alpha_prime;
    bool solved = false;
    try {
        const auto r = solve_2d(F, {-10.0, 10.0, 1e-3, 10.0}, cfg);
        lp = r.x;
        c = r.y;
        solved = true;
    } catch (const SolverError&) {
        solved = false;
    }
    if (!solved) {
        // nested bracketing fallback
        const double rhs1 = std::pow(alpha_prime, kp) / (1.0 - alpha_prime);
        auto gap = [&](double l) {
            const double cc = entropy_detail::renyi_c_of_lp(l, kp, rhs1, cfg);
            return renyi_residuals(l, -cc, alpha_prime, tau_hat)[1];
        };
        double lo = tau_hat < 0.5 ? -1e-8 : 1e-8;
        double hi = tau_hat < 0.5 ? -1.0 : 1.0;
        for (int i = 0; i < 80 && gap(lo) * gap(hi) > 0.0; ++i) hi *= 2.0;
        SolverConfig rc = cfg;
        rc.tol_residual = 0.0;
        rc.tol_root = 4e-16;
        lp = find_root(gap, std::min(lo, hi), std::max(lo, hi), rc);
        c = entropy_detail::renyi_c_of_lp(lp, kp, rhs1, cfg);
    }
    const auto res = renyi_residuals(lp, -c, alpha_prime, tau_hat);
    if (std::max(std::abs(res[0]), std::abs(res[1])) > cfg.tol_residual)
        throw SolverError("solve_renyi: residuals (" + detail::fmt_g(res[0]) + ", " +
                          detail::fmt_g(res[1]) + ") above tolerance");
    return {lp, -c, kp, alpha_prime};
}

// ---------------------------------------------------------------------------
// Section-wise prediction
// ---------------------------------------------------------------------------

// Resolved stress targets for one section: wall-segment and bed-segment
// targets (equal for plain circular sections) plus the uniform-flow value.
struct SectionStress {
    StressTargets wall;
    StressTargets bed;
    double global = 0.0;  // rho*g*R*s [Pa]
};

namespace entropy_detail {

class SegmentEvaluator {
public:
    SegmentEvaluator(ModelId model, const StressTargets& targets, const ModelConfig& cfg,
                     double global)
        : model_(model), targets_(targets), global_(global) {
        switch (model) {
            case ModelId::shannon: lambda0_ = solve_shannon(targets, cfg.solver); break;
            case ModelId::shannon_pl: n_ = powerlaw_n(targets); break;
            case ModelId::tsallis: tsallis_ = solve_tsallis(targets, cfg.q, cfg.solver); break;
            case ModelId::renyi:
                targets.validate("solve_renyi");
                renyi_ = solve_renyi(targets.tau_hat(), cfg.alpha_prime, cfg.solver);
                break;
            case ModelId::rho_g_r_s: break;
        }
    }

    double operator()(double u) const {
        switch (model_) {
            case ModelId::shannon: return shannon_profile(lambda0_, targets_.tau_max, u);
            case ModelId::shannon_pl: return powerlaw_profile(n_, targets_.tau_max, u);
            case ModelId::tsallis: return tsallis_profile(tsallis_, u);
            case ModelId::renyi: return renyi_profile(renyi_, targets_.tau_max, u);
            case ModelId::rho_g_r_s: return global_;
        }
        return 0.0;
    }

private:
    ModelId model_;
    StressTargets targets_;
    double global_ = 0.0;
    double lambda0_ = 0.0;
    double n_ = 1.0;
    TsallisParams tsallis_{};
    RenyiParams renyi_{};
};

}  // namespace entropy_detail

inline ShearProfile predict_profile(ModelId model, const ChannelSection& section,
                                    const SectionStress& stress,
                                    std::span<const double> positions,
                                    const ModelConfig& cfg = {}) {
    const entropy_detail::SegmentEvaluator wall(model, stress.wall, cfg, stress.global);
    std::optional<entropy_detail::SegmentEvaluator> bed;
    if (section.has_flatbed())
        bed.emplace(model, stress.bed, cfg, stress.global);

    ShearProfile out;
    out.kind = ProfileKind::predicted;
    out.points.reserve(positions.size());
    for (double y : positions) {
        const SegmentPosition sp = position_to_segment(y, section);
        const double tau = (sp.segment == Segment::bed && bed) ? (*bed)(sp.u) : wall(sp.u);
        out.points.push_back({y, tau});
    }
    return out;
}

// Plain circular sections: one target set for the whole perimeter.
inline ShearProfile predict_profile(ModelId model, const ChannelSection& section,
                                    const StressTargets& targets,
                                    std::span<const double> positions,
                                    const ModelConfig& cfg = {}) {
    SectionStress s;
    s.wall = targets;
    s.bed = targets;
    s.global = global_shear(cfg.rho, cfg.g, section.hydraulic_radius, section.bed_slope);
    return predict_profile(model, section, s, positions, cfg);
}

// Flatbed sections: wall and bed targets from the Knight correlations.
inline ShearProfile predict_profile(ModelId model, const ChannelSection& section,
                                    const BoundaryStress& knight,
                                    std::span<const double> positions,
                                    const ModelConfig& cfg = {}) {
    if (model != ModelId::rho_g_r_s && !section.has_flatbed())
        throw ConfigError("predict_profile: BoundaryStress targets require a flatbed section");
    SectionStress s;
    s.wall = {knight.tau_mean_wall, knight.tau_max_wall};
    s.bed = {knight.tau_mean_bed, knight.tau_max_bed};
    s.global = global_shear(cfg.rho, cfg.g, section.hydraulic_radius, section.bed_slope);
    return predict_profile(model, section, s, positions, cfg);
}

}  // namespace tauband
