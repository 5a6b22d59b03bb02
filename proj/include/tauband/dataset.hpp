#pragma once

// Hydraulic-condition and shear-profile file IO, condition -> section/target
// resolution, and the seeded synthetic-profile generator used for desk-scale
// validation.
//
// File formats (CSV, '.' decimal separator, LF or CRLF):
//   conditions: sample_id,section_class,t_over_D,h_plus_t_over_D,S0,Fr,Q_lps[,tau_max_Pa]
//               optional directive line "#D_m=<diameter>" before the header
//   profiles:   sample_id,y_over_P,tau_Pa

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tauband/entropy.hpp"
#include "tauband/errors.hpp"
#include "tauband/geometry.hpp"
#include "tauband/knight.hpp"
#include "tauband/profile.hpp"
#include "tauband/rng.hpp"

namespace tauband {

enum class SectionClass { circular, flatbed };

inline const char* to_string(SectionClass c) {
    return c == SectionClass::circular ? "circular" : "flatbed";
}

struct HydraulicCondition {
    std::string sample_id;
    SectionClass section_class = SectionClass::circular;
    double t_over_D = 0.0;
    double h_plus_t_over_D = 0.0;
    double S0 = 0.0;
    double Fr = 0.0;     // metadata, unused in computation
    double Q_lps = 0.0;  // metadata, unused in computation
    std::optional<double> tau_max_override;  // [Pa]
};

struct ConditionsFile {
    double diameter = 0.244;  // [m]
    std::vector<HydraulicCondition> records;
};

namespace io_detail {

inline std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline double parse_number(const std::string& field, const std::string& path, std::size_t row,
                           std::size_t col) {
    const char* b = field.data();
    const char* e = b + field.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
    double v = 0.0;
    const auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        throw DataError(path + ":" + std::to_string(row) + ": column " + std::to_string(col + 1) +
                        ": cannot parse number from '" + field + "'");
    return v;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

}  // namespace io_detail

inline ConditionsFile load_conditions(const std::string& path, const WarnFn& warn = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("load_conditions: cannot open '" + path + "'");
    ConditionsFile file;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    const std::string header7 = "sample_id,section_class,t_over_D,h_plus_t_over_D,S0,Fr,Q_lps";
    const std::string header8 = header7 + ",tau_max_Pa";
    bool has_tau_max_col = false;

    while (std::getline(in, line)) {
        ++row;
        line = io_detail::strip_cr(line);
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("#D_m=", 0) == 0)
                file.diameter = io_detail::parse_number(line.substr(5), path, row, 0);
            continue;
        }
        if (!header_seen) {
            if (line == header7) {
                has_tau_max_col = false;
            } else if (line == header8) {
                has_tau_max_col = true;
            } else {
                throw DataError(path + ":" + std::to_string(row) + ": unexpected header '" + line +
                                "'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = io_detail::split_csv(line);
        const std::size_t expect = has_tau_max_col ? 8 : 7;
        if (fields.size() != expect && !(has_tau_max_col && fields.size() == 7))
            throw DataError(path + ":" + std::to_string(row) + ": expected " +
                            std::to_string(expect) + " columns, got " +
                            std::to_string(fields.size()));
        HydraulicCondition c;
        c.sample_id = io_detail::trim(fields[0]);
        if (c.sample_id.empty())
            throw DataError(path + ":" + std::to_string(row) + ": empty sample_id");
        const std::string cls = io_detail::trim(fields[1]);
        if (cls == "circular")
            c.section_class = SectionClass::circular;
        else if (cls == "flatbed")
            c.section_class = SectionClass::flatbed;
        else
            throw DataError(path + ":" + std::to_string(row) + ": unknown section_class '" + cls +
                            "'");
        c.t_over_D = io_detail::parse_number(fields[2], path, row, 2);
        c.h_plus_t_over_D = io_detail::parse_number(fields[3], path, row, 3);
        c.S0 = io_detail::parse_number(fields[4], path, row, 4);
        c.Fr = io_detail::parse_number(fields[5], path, row, 5);
        c.Q_lps = io_detail::parse_number(fields[6], path, row, 6);
        if (has_tau_max_col && fields.size() == 8 && !io_detail::trim(fields[7]).empty())
            c.tau_max_override = io_detail::parse_number(fields[7], path, row, 7);

        if (!(c.t_over_D >= 0.0 && c.t_over_D < 1.0))
            throw DataError(path + ": record '" + c.sample_id + "': t_over_D outside [0,1)");
        if (!(c.h_plus_t_over_D > c.t_over_D && c.h_plus_t_over_D <= 1.0))
            throw DataError(path + ": record '" + c.sample_id +
                            "': requires t_over_D < h_plus_t_over_D <= 1");
        if (!(c.S0 > 0.0))
            throw DataError(path + ": record '" + c.sample_id + "': S0 must be positive");
        const bool flat = c.t_over_D > 0.0;
        if (flat != (c.section_class == SectionClass::flatbed))
            throw DataError(path + ": record '" + c.sample_id +
                            "': section_class inconsistent with t_over_D");
        file.records.push_back(std::move(c));
    }
    if (!header_seen) throw DataError("load_conditions: '" + path + "' has no header");
    if (file.records.empty())
        emit_warning(warn, "load_conditions: '" + path + "' contains no records");
    return file;
}

inline std::vector<ShearProfile> load_profiles(const std::string& path, const WarnFn& warn = {}) {
    std::ifstream in(path);
    if (!in) throw DataError("load_profiles: cannot open '" + path + "'");
    std::vector<ShearProfile> profiles;
    std::map<std::string, std::size_t> index;
    std::string line;
    std::size_t row = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++row;
        line = io_detail::strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "sample_id,y_over_P,tau_Pa")
                throw DataError(path + ":" + std::to_string(row) + ": unexpected header '" + line +
                                "'");
            header_seen = true;
            continue;
        }
        const auto fields = io_detail::split_csv(line);
        if (fields.size() != 3)
            throw DataError(path + ":" + std::to_string(row) + ": expected 3 columns, got " +
                            std::to_string(fields.size()));
        const std::string id = io_detail::trim(fields[0]);
        const double y = io_detail::parse_number(fields[1], path, row, 1);
        const double tau = io_detail::parse_number(fields[2], path, row, 2);
        if (!(y >= 0.0 && y <= 1.0))
            throw DataError(path + ":" + std::to_string(row) + ": y_over_P outside [0,1]");
        if (!std::isfinite(tau) || tau < 0.0)
            throw DataError(path + ":" + std::to_string(row) + ": tau must be finite and >= 0");
        auto [it, inserted] = index.try_emplace(id, profiles.size());
        if (inserted) {
            profiles.push_back(ShearProfile{id, {}, ProfileKind::measured});
        }
        auto& pts = profiles[it->second].points;
        if (!pts.empty() && y <= pts.back().y_over_P)
            throw DataError(path + ":" + std::to_string(row) + ": positions of sample '" + id +
                            "' must be strictly increasing (duplicate or unsorted)");
        pts.push_back({y, tau});
    }
    if (!header_seen) throw DataError("load_profiles: '" + path + "' has no header");
    if (profiles.empty()) emit_warning(warn, "load_profiles: '" + path + "' contains no points");
    return profiles;
}

inline std::string format_profiles_csv(const std::vector<ShearProfile>& profiles) {
    std::string out = "sample_id,y_over_P,tau_Pa\n";
    char buf[96];
    for (const ShearProfile& p : profiles) {
        for (const ProfilePoint& pt : p.points) {
            std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g\n", p.sample_id.c_str(), pt.y_over_P,
                          pt.tau);
            out += buf;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// condition -> section / stress targets
// ---------------------------------------------------------------------------

inline ChannelSection section_from_condition(const HydraulicCondition& c, double diameter,
                                             double junction_offset = 0.005) {
    const double t = c.t_over_D * diameter;
    const double H = c.h_plus_t_over_D * diameter;
    return build_section(diameter, t, H - t, c.S0, junction_offset);
}

// For flatbed sections the wall/bed targets come from the Knight
// correlations. Plain circular sections take tau_mean = rho*g*R*s and
// tau_max from the per-sample override, defaulting (with a warning) to
// `default_tau_max_factor` times the global stress.
inline SectionStress resolve_targets(const ChannelSection& section,
                                     const HydraulicCondition& cond, const ModelConfig& cfg = {},
                                     double default_tau_max_factor = 1.5,
                                     const WarnFn& warn = {}) {
    SectionStress s;
    s.global = global_shear(cfg.rho, cfg.g, section.hydraulic_radius, section.bed_slope);
    if (section.has_flatbed()) {
        const BoundaryStress bs = knight_stresses(section, cfg.rho, cfg.g, warn);
        s.wall = {bs.tau_mean_wall, bs.tau_max_wall};
        s.bed = {bs.tau_mean_bed, bs.tau_max_bed};
        return s;
    }
    double tau_max;
    if (cond.tau_max_override) {
        tau_max = *cond.tau_max_override;
    } else {
        tau_max = default_tau_max_factor * s.global;
        emit_warning(warn, "sample '" + cond.sample_id +
                               "': no tau_max_Pa given for circular section; defaulting to " +
                               detail::fmt_g(default_tau_max_factor) + " * rho*g*R*S = " +
                               detail::fmt_g(tau_max) + " Pa");
    }
    s.wall = {s.global, tau_max};
    s.bed = s.wall;
    return s;
}

inline ShearProfile predict_for_condition(const HydraulicCondition& cond, double diameter,
                                          ModelId model, std::span<const double> positions,
                                          const ModelConfig& cfg = {},
                                          double junction_offset = 0.005,
                                          double default_tau_max_factor = 1.5,
                                          const WarnFn& warn = {}) {
    const ChannelSection section = section_from_condition(cond, diameter, junction_offset);
    const SectionStress stress =
        resolve_targets(section, cond, cfg, default_tau_max_factor, warn);
    ShearProfile p = predict_profile(model, section, stress, positions, cfg);
    p.sample_id = cond.sample_id;
    return p;
}

// ---------------------------------------------------------------------------
// synthetic measured-like profiles
// ---------------------------------------------------------------------------

struct SynthConfig {
    int points_per_profile = 40;
    double junction_offset = 0.005;
    double default_tau_max_factor = 1.5;
    double floor = 1e-9;  // clip for nonpositive stresses before Box-Cox [Pa]
};

// Evaluates the chosen model on an interior position grid, perturbs in
// Box-Cox(lambda_true) space with seeded Gaussian noise of spread sigma_true,
// and maps back to stress space. Deterministic given (seed, inputs); each
// sample draws from a stream derived from its id, so file order is
// irrelevant.
inline std::vector<ShearProfile> synth_generate(const ConditionsFile& conditions, ModelId model,
                                                double lambda_true, double sigma_true,
                                                std::uint64_t seed, const SynthConfig& synth = {},
                                                const ModelConfig& cfg = {},
                                                const WarnFn& warn = {}) {
    if (!(sigma_true >= 0.0)) throw DomainError("synth_generate: sigma_true must be >= 0");
    const int m = std::max(synth.points_per_profile, 2);
    std::vector<double> positions(m);
    for (int j = 0; j < m; ++j) positions[j] = (j + 0.5) / m;

    Rng master(seed);
    std::vector<ShearProfile> out;
    out.reserve(conditions.records.size());
    std::size_t clipped = 0;
    for (const HydraulicCondition& cond : conditions.records) {
        Rng rng = master.fork(fnv1a64(cond.sample_id));
        ShearProfile pred =
            predict_for_condition(cond, conditions.diameter, model, positions, cfg,
                                  synth.junction_offset, synth.default_tau_max_factor, warn);
        ShearProfile meas;
        meas.sample_id = cond.sample_id;
        meas.kind = ProfileKind::measured;
        meas.points.reserve(pred.points.size());
        for (const ProfilePoint& pt : pred.points) {
            double tau = pt.tau;
            if (tau < synth.floor) {
                tau = synth.floor;
                ++clipped;
            }
            double tau_m;
            if (sigma_true == 0.0) {
                tau_m = tau;  // exact model profile, no transform wobble
            } else {
                const double z =
                    boxcox_forward(tau, lambda_true) + sigma_true * rng.gaussian();
                if (lambda_true != 0.0 && lambda_true * z <= -1.0) {
                    tau_m = synth.floor;
                    ++clipped;
                } else {
                    tau_m = boxcox_inverse(z, lambda_true);
                }
            }
            meas.points.push_back({pt.y_over_P, tau_m});
        }
        out.push_back(std::move(meas));
    }
    if (clipped > 0)
        emit_warning(warn, "synth_generate: clipped " + std::to_string(clipped) +
                               " value(s) to the positive floor");
    return out;
}

}  // namespace tauband
