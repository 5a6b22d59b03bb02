#pragma once

// The two uncertainty procedures over a dataset of hydraulic conditions with
// measured profiles: HBMES-1 (fixed confidence bound, band statistics) and
// HBMES-2 (optimized confidence bound per sample, FOCB), plus the sample-size
// calibration sweep that selects the Box-Cox transfer factor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tauband/boxcox.hpp"
#include "tauband/dataset.hpp"
#include "tauband/errors.hpp"
#include "tauband/rng.hpp"
#include "tauband/uncertainty.hpp"

namespace tauband {

struct Dataset {
    ConditionsFile conditions;
    std::vector<ShearProfile> measured;

    const ShearProfile* find_profile(const std::string& sample_id) const {
        for (const ShearProfile& p : measured)
            if (p.sample_id == sample_id) return &p;
        return nullptr;
    }
};

struct AnalysisConfig {
    ModelConfig model{};
    double junction_offset = 0.005;       // y_w [m]
    double default_tau_max_factor = 1.5;  // circular-section tau_max fallback
    double level = 95.0;                  // fixed CB level for HBMES-1 / calibration
    double zeta = 0.01;                   // OCB search granularity [percent]
};

namespace analysis_detail {

struct SamplePairs {
    std::string sample_id;
    SectionClass section_class = SectionClass::circular;
    ShearProfile measured;   // positive-filtered, aligned with predicted
    ShearProfile predicted;
    std::size_t excluded = 0;  // nonpositive pairs dropped before normalization
};

// Predicts at each sample's measured positions and drops pairs where either
// value is nonpositive (Box-Cox requires strictly positive data).
inline std::vector<SamplePairs> pair_samples(const Dataset& ds, ModelId model,
                                             const AnalysisConfig& cfg, const WarnFn& warn) {
    std::vector<SamplePairs> out;
    std::size_t excluded_total = 0;
    for (const HydraulicCondition& cond : ds.conditions.records) {
        const ShearProfile* meas = ds.find_profile(cond.sample_id);
        if (!meas || meas->points.empty()) continue;
        std::vector<double> positions;
        positions.reserve(meas->points.size());
        for (const ProfilePoint& pt : meas->points) positions.push_back(pt.y_over_P);
        ShearProfile pred;
        try {
            pred = predict_for_condition(cond, ds.conditions.diameter, model, positions,
                                         cfg.model, cfg.junction_offset,
                                         cfg.default_tau_max_factor, warn);
        } catch (const SolverError& e) {
            emit_warning(warn, "sample '" + cond.sample_id + "' skipped for model " +
                                   to_string(model) + ": " + e.what());
            continue;
        } catch (const DomainError& e) {
            emit_warning(warn, "sample '" + cond.sample_id + "' skipped for model " +
                                   to_string(model) + ": " + e.what());
            continue;
        }
        SamplePairs sp;
        sp.sample_id = cond.sample_id;
        sp.section_class = cond.section_class;
        sp.measured.sample_id = sp.predicted.sample_id = cond.sample_id;
        sp.measured.kind = ProfileKind::measured;
        sp.predicted.kind = ProfileKind::predicted;
        for (std::size_t i = 0; i < meas->points.size(); ++i) {
            if (meas->points[i].tau > 0.0 && pred.points[i].tau > 0.0) {
                sp.measured.points.push_back(meas->points[i]);
                sp.predicted.points.push_back(pred.points[i]);
            } else {
                ++sp.excluded;
            }
        }
        excluded_total += sp.excluded;
        if (!sp.measured.points.empty()) out.push_back(std::move(sp));
    }
    if (excluded_total > 0)
        emit_warning(warn, "excluded " + std::to_string(excluded_total) +
                               " nonpositive point(s) from normalization");
    return out;
}

inline void append_values(const SamplePairs& sp, std::vector<double>& m, std::vector<double>& p) {
    for (const ProfilePoint& pt : sp.measured.points) m.push_back(pt.tau);
    for (const ProfilePoint& pt : sp.predicted.points) p.push_back(pt.tau);
}

}  // namespace analysis_detail

// ---------------------------------------------------------------------------
// HBMES-1
// ---------------------------------------------------------------------------

// reliability reading of N_in at the fixed bound: 80-100% counts as high
// certainty, below 50% the model is considered unable to predict
inline std::string certainty_class(double n_in) {
    if (n_in >= 80.0) return "high";
    if (n_in < 50.0) return "unable";
    return "moderate";
}

struct Hbmes1Result {
    ModelId model;
    NormalizationState state;
    BandStatistics stats;
    ConfidenceBound bound;       // over the pooled points
    ShearProfile pooled_measured;
    std::string certainty;       // "high" / "moderate" / "unable"
    std::size_t excluded = 0;
};

inline Hbmes1Result hbmes1_analyze(const Dataset& ds, ModelId model, double lambda,
                                   const AnalysisConfig& cfg = {}, const WarnFn& warn = {}) {
    const auto pairs = analysis_detail::pair_samples(ds, model, cfg, warn);
    if (pairs.empty()) throw DataError("hbmes1_analyze: dataset has no usable points");

    Hbmes1Result r;
    r.model = model;
    ShearProfile pooled_m, pooled_p;
    pooled_m.kind = ProfileKind::measured;
    pooled_p.kind = ProfileKind::predicted;
    std::vector<double> mv, pv;
    for (const auto& sp : pairs) {
        r.excluded += sp.excluded;
        analysis_detail::append_values(sp, mv, pv);
        for (const ProfilePoint& pt : sp.measured.points) pooled_m.points.push_back(pt);
        for (const ProfilePoint& pt : sp.predicted.points) pooled_p.points.push_back(pt);
    }
    // pooled points come from several samples; rewrite positions with a pooled
    // running index so bound/statistics alignment checks stay meaningful
    for (std::size_t i = 0; i < pooled_m.points.size(); ++i) {
        const double key = static_cast<double>(i);
        pooled_m.points[i].y_over_P = key;
        pooled_p.points[i].y_over_P = key;
    }
    r.state = error_stats(mv, pv, lambda);
    r.bound = build_bound(pooled_p, r.state, cfg.level);
    r.stats = band_statistics(pooled_m, r.bound);
    r.pooled_measured = pooled_m;
    r.certainty = certainty_class(r.stats.n_in);
    return r;
}

// ---------------------------------------------------------------------------
// HBMES-2
// ---------------------------------------------------------------------------

struct SampleOcb {
    std::string sample_id;
    SectionClass section_class;
    OcbResult ocb;
    std::size_t n_points = 0;
};

struct Hbmes2Result {
    ModelId model;
    NormalizationState state;  // pooled over all samples
    std::vector<SampleOcb> samples;
    double focb_circular = 0.0;  // mean FOCB over circular samples
    double focb_flatbed = 0.0;   // mean FOCB over flatbed samples
    double focb_average = 0.0;   // mean FOCB over all samples
    std::size_t n_circular = 0;
    std::size_t n_flatbed = 0;
};

inline Hbmes2Result hbmes2_analyze(const Dataset& ds, ModelId model, double lambda,
                                   const AnalysisConfig& cfg = {}, const WarnFn& warn = {}) {
    const auto pairs = analysis_detail::pair_samples(ds, model, cfg, warn);
    if (pairs.empty()) throw DataError("hbmes2_analyze: dataset has no usable points");

    std::vector<double> mv, pv;
    for (const auto& sp : pairs) analysis_detail::append_values(sp, mv, pv);

    Hbmes2Result r;
    r.model = model;
    r.state = error_stats(mv, pv, lambda);

    double sum_c = 0.0, sum_f = 0.0, sum_all = 0.0;
    for (const auto& sp : pairs) {
        SampleOcb s;
        s.sample_id = sp.sample_id;
        s.section_class = sp.section_class;
        s.n_points = sp.measured.points.size();
        s.ocb = find_ocb(sp.measured, sp.predicted, r.state, cfg.zeta, warn);
        sum_all += s.ocb.focb;
        if (sp.section_class == SectionClass::circular) {
            sum_c += s.ocb.focb;
            ++r.n_circular;
        } else {
            sum_f += s.ocb.focb;
            ++r.n_flatbed;
        }
        r.samples.push_back(std::move(s));
    }
    r.focb_circular = r.n_circular ? sum_c / static_cast<double>(r.n_circular) : 0.0;
    r.focb_flatbed = r.n_flatbed ? sum_f / static_cast<double>(r.n_flatbed) : 0.0;
    r.focb_average =
        sum_all / static_cast<double>(r.samples.size());
    return r;
}

// ---------------------------------------------------------------------------
// sample-size calibration
// ---------------------------------------------------------------------------

struct SsRecord {
    int ss = 0;
    double mean_n_in = 0.0;
    double n_in_spread = 0.0;  // sample stddev across trials
    double mean_lambda = 0.0;
    double mean_delta_eps = 0.0;
    double mean_mu_eps = 0.0;
};

struct CalibrationResult {
    ModelId model;
    std::vector<SsRecord> records;
    int best_ss = 0;
    double best_lambda = 0.0;
    int trials_per_ss = 0;
    std::uint64_t seed = 0;
};

// For each sample size SS in [ss_lo, ss_hi], draws `trials` random subsets of
// SS conditions, pools their points, fits the Box-Cox factor on the measured
// values, and records N_in at the fixed bound level together with the error
// moments. The best SS minimizes |mean N_in - level|, ties toward smaller SS.
inline CalibrationResult calibrate(const Dataset& ds, ModelId model, int ss_lo = 9,
                                   int ss_hi = 23, int trials = 20, std::uint64_t seed = 1,
                                   const AnalysisConfig& cfg = {}, const WarnFn& warn = {}) {
    if (!(ss_lo >= 2 && ss_lo <= ss_hi)) throw ConfigError("calibrate: bad sample-size range");
    if (trials < 1) throw ConfigError("calibrate: trials must be >= 1");
    const auto pairs = analysis_detail::pair_samples(ds, model, cfg, warn);
    if (static_cast<int>(pairs.size()) < ss_hi)
        throw DataError("calibrate: dataset has " + std::to_string(pairs.size()) +
                        " usable samples, needs at least " + std::to_string(ss_hi));

    Rng master(seed);
    CalibrationResult result;
    result.model = model;
    result.trials_per_ss = trials;
    result.seed = seed;

    for (int ss = ss_lo; ss <= ss_hi; ++ss) {
        double acc_nin = 0.0, acc_nin2 = 0.0, acc_lam = 0.0, acc_de = 0.0, acc_mu = 0.0;
        for (int trial = 0; trial < trials; ++trial) {
            Rng rng = master.fork(static_cast<std::uint64_t>(ss) * 1000003ULL +
                                  static_cast<std::uint64_t>(trial));
            const auto idx = rng.sample_without_replacement(pairs.size(), ss);
            std::vector<double> mv, pv;
            for (std::size_t i : idx) analysis_detail::append_values(pairs[i], mv, pv);
            const double lam = fit_lambda(mv, warn);
            const NormalizationState st = error_stats(mv, pv, lam);

            // N_in of the pooled subset at the fixed level
            const double z = bound_z(cfg.level);
            std::size_t inside = 0;
            for (std::size_t i = 0; i < mv.size(); ++i) {
                const auto e = uncertainty_detail::edges_for(pv[i], st, z);
                if (dist_x(mv[i], pv[i], e.upper, e.lower) >= 0.0) ++inside;
            }
            const double n_in = 100.0 * static_cast<double>(inside) /
                                static_cast<double>(mv.size());
            acc_nin += n_in;
            acc_nin2 += n_in * n_in;
            acc_lam += lam;
            acc_de += st.delta_eps;
            acc_mu += st.mu_eps;
        }
        SsRecord rec;
        rec.ss = ss;
        const double nt = trials;
        rec.mean_n_in = acc_nin / nt;
        rec.n_in_spread =
            trials > 1 ? std::sqrt(std::max(0.0, (acc_nin2 - acc_nin * acc_nin / nt) / (nt - 1.0)))
                       : 0.0;
        rec.mean_lambda = acc_lam / nt;
        rec.mean_delta_eps = acc_de / nt;
        rec.mean_mu_eps = acc_mu / nt;
        result.records.push_back(rec);
    }

    double best_gap = std::numeric_limits<double>::infinity();
    for (const SsRecord& rec : result.records) {
        const double gap = std::abs(rec.mean_n_in - cfg.level);
        if (gap < best_gap - 1e-12) {
            best_gap = gap;
            result.best_ss = rec.ss;
            result.best_lambda = rec.mean_lambda;
        }
    }
    return result;
}

}  // namespace tauband
