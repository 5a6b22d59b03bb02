#pragma once

// Confidence-bound construction and the band statistics (N_in, F_P, F_N,
// FREE), plus the optimized-confidence-bound search (minimal level at which
// every measured point falls inside) and the FOCB index.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tauband/boxcox.hpp"
#include "tauband/errors.hpp"
#include "tauband/numerics.hpp"
#include "tauband/profile.hpp"

namespace tauband {

struct ConfidenceBound {
    double level = 0.0;  // percent
    double z = 0.0;      // standard-normal coefficient for this level
    std::vector<double> position;
    std::vector<double> predicted;
    std::vector<double> lower;
    std::vector<double> upper;
    std::size_t clipped_points = 0;  // inverse-transform clips (bound forced to 0 / +inf)
};

struct BandStatistics {
    double n_in = 0.0;  // percent of points inside
    double f_p = 0.0;   // sum of inside distances [Pa]
    double f_n = 0.0;   // sum of |outside| distances [Pa]
    double free = 0.0;  // F_P + F_N
};

struct OcbResult {
    double ocb = 0.0;       // percent
    double z_n = 0.0;       // normal coefficient at the OCB
    double free_opt = 0.0;  // F_P at the OCB
    double focb = 0.0;      // OCB * FREE_opt / 100
    bool covered = true;    // false when even the widest searchable bound leaves points outside
    std::size_t outside_at_cap = 0;
};

inline double bound_z(double level) {
    if (!(level > 0.0 && level < 100.0))
        throw DomainError("bound level must lie in (0, 100), got " + detail::fmt_g(level));
    return std_normal_quantile(0.5 + level / 200.0);
}

namespace uncertainty_detail {

struct BoundEdges {
    double lower, upper;
    int clips;
};

// Stress-space edges for one predicted value. Lower bounds that leave the
// Box-Cox range are clipped to 0 and counted; upper bounds that leave it
// (possible for lambda < 0) are opened to +infinity and counted.
inline BoundEdges edges_for(double tau_p, const NormalizationState& st, double z) {
    BoundEdges e{0.0, 0.0, 0};
    // unbiased collapsed band: the bound is the prediction itself, without
    // the one-ulp wobble of a forward/inverse round trip
    if (st.delta_eps == 0.0 && st.mu_eps == 0.0 && tau_p > 0.0) {
        e.lower = e.upper = tau_p;
        return e;
    }
    double z_p;
    if (tau_p <= 0.0) {
        if (st.lambda > 0.0) {
            z_p = -1.0 / st.lambda;  // Box-Cox limit of x -> 0+
        } else {
            e.lower = 0.0;
            e.upper = 0.0;
            e.clips = 1;
            return e;
        }
    } else {
        z_p = boxcox_forward(tau_p, st.lambda);
    }
    const double centre = z_p + st.mu_eps;
    const double z_lo = centre - z * st.delta_eps;
    const double z_hi = centre + z * st.delta_eps;

    if (st.lambda != 0.0 && st.lambda * z_lo <= -1.0) {
        e.lower = 0.0;
        ++e.clips;
    } else {
        e.lower = boxcox_inverse(z_lo, st.lambda);
    }
    if (st.lambda != 0.0 && st.lambda * z_hi <= -1.0) {
        e.upper = std::numeric_limits<double>::infinity();
        ++e.clips;
    } else {
        e.upper = boxcox_inverse(z_hi, st.lambda);
    }
    return e;
}

}  // namespace uncertainty_detail

inline ConfidenceBound build_bound(const ShearProfile& predicted, const NormalizationState& st,
                                   double level) {
    const double z = bound_z(level);
    ConfidenceBound cb;
    cb.level = level;
    cb.z = z;
    cb.position.reserve(predicted.points.size());
    for (const ProfilePoint& pt : predicted.points) {
        const auto e = uncertainty_detail::edges_for(pt.tau, st, z);
        cb.position.push_back(pt.y_over_P);
        cb.predicted.push_back(pt.tau);
        cb.lower.push_back(e.lower);
        cb.upper.push_back(e.upper);
        cb.clipped_points += static_cast<std::size_t>(e.clips);
    }
    return cb;
}

// Signed distance of a measured point to the relevant bound edge; positive
// means inside. Points at or above the prediction are measured against the
// upper edge, points below against the lower edge.
inline double dist_x(double tau_m, double tau_p, double tau_plus, double tau_minus) {
    if (!(tau_minus <= tau_plus))
        throw DomainError("dist_x: lower bound exceeds upper bound");
    return tau_m >= tau_p ? tau_plus - tau_m : tau_m - tau_minus;
}

inline BandStatistics band_statistics(const ShearProfile& measured, const ConfidenceBound& bound) {
    const std::size_t n = measured.points.size();
    if (n == 0) throw DataError("band_statistics: empty profile");
    if (n != bound.position.size())
        throw DataError("band_statistics: profile/bound size mismatch");
    BandStatistics s;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(measured.points[i].y_over_P - bound.position[i]) > 1e-12)
            throw DataError("band_statistics: misaligned positions at index " + std::to_string(i));
        const double d =
            dist_x(measured.points[i].tau, bound.predicted[i], bound.upper[i], bound.lower[i]);
        if (d >= 0.0) {
            ++inside;
            s.f_p += d;
        } else {
            s.f_n += -d;
        }
    }
    s.n_in = 100.0 * static_cast<double>(inside) / static_cast<double>(n);
    s.free = s.f_p + s.f_n;
    return s;
}

inline double focb(double ocb, double free_opt) {
    if (!(ocb >= 0.0 && ocb <= 100.0))
        throw DomainError("focb: OCB must lie in [0, 100]");
    if (!(free_opt >= 0.0)) throw DomainError("focb: FREE_opt must be nonnegative");
    return ocb * free_opt / 100.0;
}

// Minimal bound level, on a grid of step `zeta` percent, at which every
// measured point lies inside. N_in is nondecreasing in the level (the bound
// widens monotonically), so a binary search over the grid is exact. When even
// the widest searchable level (100 - zeta) leaves points outside, the result
// reports OCB = 100 with statistics taken at that widest level.
inline OcbResult find_ocb(const ShearProfile& measured, const ShearProfile& predicted,
                          const NormalizationState& st, double zeta = 0.01,
                          const WarnFn& warn = {}) {
    if (!(zeta > 0.0 && zeta < 100.0)) throw DomainError("find_ocb: zeta outside (0, 100)");
    if (measured.points.size() != predicted.points.size() || measured.points.empty())
        throw DataError("find_ocb: measured/predicted must be aligned and nonempty");

    const long k_max = std::lround(100.0 / zeta) - 1;
    auto stats_at = [&](long k) {
        const double level = static_cast<double>(k) * zeta;
        const ConfidenceBound cb = build_bound(predicted, st, level);
        return std::pair<BandStatistics, double>(band_statistics(measured, cb), cb.z);
    };
    auto covered_at = [&](long k) { return stats_at(k).first.n_in == 100.0; };

    OcbResult r;
    if (!covered_at(k_max)) {
        const auto [s, z] = stats_at(k_max);
        r.ocb = 100.0;
        r.z_n = z;
        r.free_opt = s.f_p;
        r.focb = focb(r.ocb, r.free_opt);
        r.covered = false;
        const std::size_t n = measured.points.size();
        r.outside_at_cap =
            n - static_cast<std::size_t>(std::lround(s.n_in / 100.0 * static_cast<double>(n)));
        emit_warning(warn, "find_ocb: " + std::to_string(r.outside_at_cap) +
                               " point(s) remain outside at the widest searchable bound; "
                               "reporting OCB = 100");
        return r;
    }
    long lo = 1, hi = k_max;
    while (lo < hi) {
        const long mid = lo + (hi - lo) / 2;
        if (covered_at(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    const auto [s, z] = stats_at(lo);
    r.ocb = static_cast<double>(lo) * zeta;
    r.z_n = z;
    r.free_opt = s.f_p;
    r.focb = focb(r.ocb, r.free_opt);
    r.covered = true;
    return r;
}

}  // namespace tauband
