#pragma once

// Knight-family correlations for mean and maximum wall/bed shear stress in
// circular channels with a flat sediment bed, plus the uniform-flow global
// shear stress rho*g*R*s used as the baseline model.

#include <cmath>

#include "tauband/errors.hpp"
#include "tauband/geometry.hpp"

namespace tauband {

struct BoundaryStress {
    double tau_mean_wall = 0.0;   // [Pa]
    double tau_mean_bed = 0.0;    // [Pa]
    double tau_max_wall = 0.0;    // [Pa]
    double tau_max_bed = 0.0;     // [Pa]
    double sf_wall_percent = 0.0; // %SF_w
};

// Wall shear force percentage as a function of P_b/P_w. The correlation is
// fitted with common (base-10) logarithms; `common_log` switches to natural
// log for sensitivity checks only.
inline double wall_shear_force_percent(double pb_over_pw, bool common_log = true) {
    if (!(pb_over_pw >= 0.0))
        throw DomainError("wall_shear_force_percent: P_b/P_w must be nonnegative");
    constexpr double c2 = 1.38;
    const double csf =
        pb_over_pw < 4.374 ? 1.0 : 0.6603 * std::pow(pb_over_pw, 0.28125);
    const double lg = common_log ? std::log10(pb_over_pw / c2 + 1.0)
                                 : std::log(pb_over_pw / c2 + 1.0);
    return csf * std::exp(-3.23 * lg + 4.6052);
}

inline double global_shear(double rho, double g, double hydraulic_radius, double slope) {
    if (!(rho >= 0.0 && g >= 0.0 && hydraulic_radius >= 0.0 && slope >= 0.0))
        throw DomainError("global_shear: all inputs must be nonnegative");
    return rho * g * hydraulic_radius * slope;
}

inline BoundaryStress knight_stresses(const ChannelSection& section, double rho = 1000.0,
                                      double g = 9.81, const WarnFn& warn = {}) {
    if (!(section.bed_perimeter > 0.0))
        throw DomainError(
            "knight_stresses: degenerate correlation for P_b = 0 (plain circular "
            "section); supply stress targets directly");
    if (!(rho > 0.0 && g > 0.0))
        throw DomainError("knight_stresses: rho and g must be positive");

    const double ratio = section.bed_perimeter / section.wall_perimeter;
    const double sf = wall_shear_force_percent(ratio);
    const double grs = global_shear(rho, g, section.hydraulic_radius, section.bed_slope);
    const double w = 0.01 * sf;

    BoundaryStress bs;
    bs.sf_wall_percent = sf;
    bs.tau_mean_wall = w * (1.0 + ratio) * grs;
    bs.tau_mean_bed = (1.0 - w) * (1.0 + 1.0 / ratio) * grs;
    bs.tau_max_wall = w * 2.0372 * std::pow(ratio, 0.7108) * grs;
    bs.tau_max_bed = (1.0 - w) * 2.1697 * std::pow(ratio, -0.3287) * grs;

    if (bs.tau_max_wall < bs.tau_mean_wall)
        emit_warning(warn, "knight_stresses: tau_max(w) < mean wall stress at P_b/P_w = " +
                               detail::fmt_g(ratio) + "; correlation outside its valid range");
    if (bs.tau_max_bed < bs.tau_mean_bed)
        emit_warning(warn, "knight_stresses: tau_max(b) < mean bed stress at P_b/P_w = " +
                               detail::fmt_g(ratio) + "; correlation outside its valid range");
    return bs;
}

// Diagnostic: (tau_w*P_w + tau_b*P_b) / (rho*g*R*s*P); equals 1 when the mean
// stress correlations close the streamwise force balance.
inline double force_balance_ratio(const BoundaryStress& bs, const ChannelSection& section,
                                  double rho = 1000.0, double g = 9.81) {
    const double grs = global_shear(rho, g, section.hydraulic_radius, section.bed_slope);
    return (bs.tau_mean_wall * section.wall_perimeter + bs.tau_mean_bed * section.bed_perimeter) /
           (grs * section.wetted_perimeter);
}

}  // namespace tauband
