#pragma once

// Circular and circular-with-flatbed section geometry. A flatbed section is a
// circular pipe with a sediment layer of thickness t; the wetted perimeter
// splits into two wall arcs (P_w) and the flat bed chord (P_b).

#include <algorithm>
#include <cmath>
#include <string>

#include "tauband/errors.hpp"
#include "tauband/numerics.hpp"

namespace tauband {

struct ChannelSection {
    double diameter = 0.0;            // D [m]
    double sediment_thickness = 0.0;  // t [m], measured from the invert
    double water_depth = 0.0;         // h [m], above the sediment surface
    double bed_slope = 0.0;           // s [-]
    double junction_offset = 0.005;   // y_w [m], wall/bed junction offset
    double wall_perimeter = 0.0;      // P_w [m]
    double bed_perimeter = 0.0;       // P_b [m]
    double wetted_perimeter = 0.0;    // P = P_w + P_b [m]
    double flow_area = 0.0;           // A [m^2]
    double hydraulic_radius = 0.0;    // R = A / P [m]

    bool has_flatbed() const { return sediment_thickness > 0.0; }
    double total_depth() const { return sediment_thickness + water_depth; }
};

namespace geom_detail {

// half-angle at the pipe centre subtended from the invert up to height z
inline double half_angle(double D, double z) {
    return std::acos(std::clamp(1.0 - 2.0 * z / D, -1.0, 1.0));
}

// area of the circular segment between the invert and height z
inline double segment_area(double D, double z) {
    const double r = 0.5 * D;
    const double th = half_angle(D, z);
    return r * r * (th - std::sin(th) * std::cos(th));
}

}  // namespace geom_detail

inline ChannelSection build_section(double diameter, double sediment_thickness,
                                    double water_depth, double bed_slope,
                                    double junction_offset = 0.005) {
    if (!(diameter > 0.0))
        throw DomainError("build_section: diameter must be positive");
    if (!(sediment_thickness >= 0.0 && sediment_thickness < diameter))
        throw DomainError("build_section: sediment_thickness must satisfy 0 <= t < D");
    if (!(water_depth > 0.0 && sediment_thickness + water_depth <= diameter))
        throw DomainError("build_section: water_depth must satisfy 0 < h <= D - t");
    if (!(bed_slope > 0.0))
        throw DomainError("build_section: bed_slope must be positive");
    if (!(junction_offset >= 0.0))
        throw DomainError("build_section: junction_offset must be nonnegative");

    ChannelSection s;
    s.diameter = diameter;
    s.sediment_thickness = sediment_thickness;
    s.water_depth = water_depth;
    s.bed_slope = bed_slope;
    s.junction_offset = junction_offset;

    const double H = sediment_thickness + water_depth;
    const double th_surface = geom_detail::half_angle(diameter, H);
    const double th_bed = geom_detail::half_angle(diameter, sediment_thickness);
    s.wall_perimeter = diameter * (th_surface - th_bed);
    s.bed_perimeter = sediment_thickness > 0.0
                          ? 2.0 * std::sqrt(sediment_thickness * (diameter - sediment_thickness))
                          : 0.0;
    s.wetted_perimeter = s.wall_perimeter + s.bed_perimeter;
    s.flow_area = geom_detail::segment_area(diameter, H) -
                  geom_detail::segment_area(diameter, sediment_thickness);
    s.hydraulic_radius = s.flow_area / s.wetted_perimeter;
    return s;
}

enum class Segment { wall, bed };

struct SegmentPosition {
    Segment segment;
    double u;  // segment-local coordinate, 0 at the tau = 0 end, 1 at tau_max
};

// Maps a full-perimeter coordinate y/P in [0,1] (0 and 1 at the waterlines)
// onto a segment and its local coordinate. The full coordinate folds onto the
// half perimeter by symmetry; the wall runs waterline -> junction and the bed
// junction -> bed centreline. The junction sits at P_w/2 shifted into the bed
// by the y_w offset.
inline SegmentPosition position_to_segment(double y_over_P, const ChannelSection& section) {
    if (!(y_over_P >= -1e-12 && y_over_P <= 1.0 + 1e-12))
        throw DomainError("position_to_segment: y_over_P outside [0,1]");
    const double y = std::clamp(y_over_P, 0.0, 1.0);
    const double y_hat = std::min(y, 1.0 - y) * section.wetted_perimeter;
    const double half = 0.5 * section.wetted_perimeter;

    const double junction =
        section.bed_perimeter > 0.0
            ? std::min(0.5 * section.wall_perimeter + section.junction_offset, half)
            : half;
    if (y_hat < junction)
        return {Segment::wall, junction > 0.0 ? y_hat / junction : 0.0};
    const double bed_len = half - junction;
    const double u = bed_len > 0.0 ? (y_hat - junction) / bed_len : 1.0;
    return {Segment::bed, std::min(u, 1.0)};
}

}  // namespace tauband
