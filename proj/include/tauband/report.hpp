#pragma once

// Report serialization: ordered JSON (stable key order, human-diffable) plus
// plot-ready CSV tables. All files are written atomically (temp + rename).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tauband/analysis.hpp"
#include "tauband/errors.hpp"

namespace tauband {

using ojson = nlohmann::ordered_json;

inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw DataError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

namespace report_detail {

inline std::string csv_num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace report_detail

inline ojson to_json(const NormalizationState& st) {
    return ojson{{"lambda", st.lambda},
                 {"mu_eps", st.mu_eps},
                 {"delta_eps", st.delta_eps},
                 {"n_points", st.n_points}};
}

inline ojson to_json(const BandStatistics& s) {
    return ojson{{"n_in", s.n_in}, {"f_p", s.f_p}, {"f_n", s.f_n}, {"free", s.free}};
}

inline ojson to_json(const OcbResult& r) {
    return ojson{{"ocb", r.ocb},
                 {"z_n", r.z_n},
                 {"free_opt", r.free_opt},
                 {"focb", r.focb},
                 {"covered", r.covered},
                 {"outside_at_cap", r.outside_at_cap}};
}

inline ojson to_json(const Hbmes1Result& r) {
    return ojson{{"model", to_string(r.model)},
                 {"normalization", to_json(r.state)},
                 {"statistics", to_json(r.stats)},
                 {"certainty", r.certainty},
                 {"bound_level", r.bound.level},
                 {"bound_z", r.bound.z},
                 {"clipped_points", r.bound.clipped_points},
                 {"excluded_nonpositive", r.excluded}};
}

inline ojson to_json(const Hbmes2Result& r) {
    ojson samples = ojson::array();
    for (const SampleOcb& s : r.samples) {
        ojson row = to_json(s.ocb);
        row["sample_id"] = s.sample_id;
        row["section_class"] = to_string(s.section_class);
        row["n_points"] = s.n_points;
        samples.push_back(std::move(row));
    }
    return ojson{{"model", to_string(r.model)},
                 {"normalization", to_json(r.state)},
                 {"samples", std::move(samples)},
                 {"aggregates",
                  ojson{{"focb_circular", r.focb_circular},
                        {"focb_flatbed", r.focb_flatbed},
                        {"focb_average", r.focb_average},
                        {"n_circular", r.n_circular},
                        {"n_flatbed", r.n_flatbed}}}};
}

inline ojson to_json(const CalibrationResult& r) {
    ojson rows = ojson::array();
    for (const SsRecord& rec : r.records) {
        rows.push_back(ojson{{"ss", rec.ss},
                             {"mean_n_in", rec.mean_n_in},
                             {"n_in_spread", rec.n_in_spread},
                             {"mean_lambda", rec.mean_lambda},
                             {"mean_delta_eps", rec.mean_delta_eps},
                             {"mean_mu_eps", rec.mean_mu_eps}});
    }
    return ojson{{"model", to_string(r.model)},
                 {"per_ss", std::move(rows)},
                 {"best_ss", r.best_ss},
                 {"best_lambda", r.best_lambda},
                 {"trials_per_ss", r.trials_per_ss},
                 {"seed", r.seed}};
}

// position, measured, predicted, lower, upper — enough to redraw the bands
inline std::string band_table_csv(const ShearProfile& measured, const ConfidenceBound& bound,
                                  const std::string& sample_id) {
    std::string out = "sample_id,y_over_P,tau_measured_Pa,tau_predicted_Pa,lower_Pa,upper_Pa\n";
    for (std::size_t i = 0; i < bound.position.size(); ++i) {
        out += sample_id;
        out += ',';
        out += report_detail::csv_num(measured.points[i].y_over_P);
        out += ',';
        out += report_detail::csv_num(measured.points[i].tau);
        out += ',';
        out += report_detail::csv_num(bound.predicted[i]);
        out += ',';
        out += report_detail::csv_num(bound.lower[i]);
        out += ',';
        out += report_detail::csv_num(bound.upper[i]);
        out += '\n';
    }
    return out;
}

inline std::string calibration_csv(const CalibrationResult& r) {
    std::string out = "ss,mean_n_in,n_in_spread,mean_lambda,mean_delta_eps,mean_mu_eps\n";
    for (const SsRecord& rec : r.records) {
        out += std::to_string(rec.ss);
        out += ',';
        out += report_detail::csv_num(rec.mean_n_in);
        out += ',';
        out += report_detail::csv_num(rec.n_in_spread);
        out += ',';
        out += report_detail::csv_num(rec.mean_lambda);
        out += ',';
        out += report_detail::csv_num(rec.mean_delta_eps);
        out += ',';
        out += report_detail::csv_num(rec.mean_mu_eps);
        out += '\n';
    }
    return out;
}

}  // namespace tauband
