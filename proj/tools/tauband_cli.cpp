// Command-line front end: predict, synth, hbmes1, hbmes2 and calibrate flows
// over conditions/profiles CSV files. All outputs are deterministic under a
// fixed seed and are written atomically into the --out directory.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tauband/analysis.hpp"
#include "tauband/report.hpp"

namespace fs = std::filesystem;
using namespace tauband;

namespace {

struct CliOptions {
    std::string command;
    std::string conditions_path;
    std::string profiles_path;
    std::string out_dir;
    std::vector<std::string> models{"all"};
    std::uint64_t seed = 1;
    double q = 2.0;
    double alpha_prime = 0.5;
    double yw_m = 0.005;
    double rho = 1000.0;
    double g = 9.81;
    double zeta = 0.01;
    double level = 95.0;
    int ss_min = 9;
    int ss_max = 23;
    int trials = 20;
    int grid_points = 41;
    int synth_points = 40;
    double lambda_true = 0.3;
    double sigma_true = 0.1;
    double tau_max_factor = 1.5;
    std::optional<double> lambda;
};

std::vector<ModelId> resolve_models(const std::vector<std::string>& names) {
    std::vector<ModelId> out;
    for (const std::string& n : names) {
        if (n == "all") {
            return {ModelId::shannon, ModelId::shannon_pl, ModelId::tsallis, ModelId::renyi,
                    ModelId::rho_g_r_s};
        }
        out.push_back(parse_model_id(n));
    }
    if (out.empty()) throw ConfigError("at least one model must be selected");
    return out;
}

AnalysisConfig make_analysis_config(const CliOptions& o) {
    AnalysisConfig cfg;
    cfg.model.q = o.q;
    cfg.model.alpha_prime = o.alpha_prime;
    cfg.model.rho = o.rho;
    cfg.model.g = o.g;
    cfg.junction_offset = o.yw_m;
    cfg.default_tau_max_factor = o.tau_max_factor;
    cfg.level = o.level;
    cfg.zeta = o.zeta;
    return cfg;
}

ojson config_json(const CliOptions& o, const std::vector<ModelId>& models) {
    ojson m = ojson::array();
    for (ModelId id : models) m.push_back(to_string(id));
    ojson j{{"command", o.command},
            {"conditions", o.conditions_path},
            {"profiles", o.profiles_path},
            {"out", o.out_dir},
            {"models", std::move(m)},
            {"seed", o.seed},
            {"q", o.q},
            {"alpha_prime", o.alpha_prime},
            {"yw_m", o.yw_m},
            {"rho", o.rho},
            {"g", o.g},
            {"zeta", o.zeta},
            {"level", o.level},
            {"ss_min", o.ss_min},
            {"ss_max", o.ss_max},
            {"trials", o.trials},
            {"tau_max_factor", o.tau_max_factor}};
    if (o.lambda) j["lambda"] = *o.lambda;
    if (o.command == "synth") {
        j["lambda_true"] = o.lambda_true;
        j["sigma_true"] = o.sigma_true;
        j["points_per_profile"] = o.synth_points;
    }
    if (o.command == "predict") j["grid_points"] = o.grid_points;
    return j;
}

WarnFn stderr_warn(std::vector<std::string>& sink) {
    return [&sink](const std::string& msg) {
        sink.push_back(msg);
        std::fprintf(stderr, "warning: %s\n", msg.c_str());
    };
}

Dataset load_dataset(const CliOptions& o, bool need_profiles, const WarnFn& warn) {
    Dataset ds;
    ds.conditions = load_conditions(o.conditions_path, warn);
    if (!o.profiles_path.empty())
        ds.measured = load_profiles(o.profiles_path, warn);
    else if (need_profiles)
        throw ConfigError("command '" + o.command + "' requires --profiles");
    return ds;
}

// hbmes flows take the calibrated transfer factor via --lambda; without it
// the factor is fitted on the pooled measured values of the whole dataset.
double resolve_lambda(const CliOptions& o, const Dataset& ds, const WarnFn& warn) {
    if (o.lambda) return *o.lambda;
    std::vector<double> pooled;
    for (const ShearProfile& p : ds.measured)
        for (const ProfilePoint& pt : p.points)
            if (pt.tau > 0.0) pooled.push_back(pt.tau);
    const double lam = fit_lambda(pooled, warn);
    emit_warning(warn, "no --lambda given; fitted lambda = " + detail::fmt_g(lam) +
                           " on the pooled measured values");
    return lam;
}

int run_predict(const CliOptions& o, std::vector<std::string>& warnings) {
    const WarnFn warn = stderr_warn(warnings);
    const auto models = resolve_models(o.models);
    const AnalysisConfig cfg = make_analysis_config(o);
    Dataset ds = load_dataset(o, false, warn);

    ojson report{{"config", config_json(o, models)}};
    ojson sample_info = ojson::array();
    for (const HydraulicCondition& cond : ds.conditions.records) {
        const ChannelSection sec =
            section_from_condition(cond, ds.conditions.diameter, cfg.junction_offset);
        ojson row{{"sample_id", cond.sample_id},
                  {"section_class", to_string(cond.section_class)},
                  {"P_w", sec.wall_perimeter},
                  {"P_b", sec.bed_perimeter},
                  {"P", sec.wetted_perimeter},
                  {"A", sec.flow_area},
                  {"R", sec.hydraulic_radius}};
        if (sec.has_flatbed()) {
            const BoundaryStress bs = knight_stresses(sec, cfg.model.rho, cfg.model.g, warn);
            row["knight"] = ojson{{"tau_mean_wall", bs.tau_mean_wall},
                                  {"tau_mean_bed", bs.tau_mean_bed},
                                  {"tau_max_wall", bs.tau_max_wall},
                                  {"tau_max_bed", bs.tau_max_bed},
                                  {"sf_wall_percent", bs.sf_wall_percent},
                                  {"force_balance", force_balance_ratio(bs, sec, cfg.model.rho,
                                                                        cfg.model.g)}};
        }
        sample_info.push_back(std::move(row));
    }
    report["samples"] = std::move(sample_info);

    bool any_failure = false;
    ojson results = ojson::array();
    for (ModelId model : models) {
        std::string csv = "sample_id,y_over_P,tau_Pa\n";
        ojson model_row{{"model", to_string(model)}, {"failed_samples", ojson::array()}};
        for (const HydraulicCondition& cond : ds.conditions.records) {
            std::vector<double> positions;
            if (const ShearProfile* meas = ds.find_profile(cond.sample_id);
                meas && !meas->points.empty()) {
                for (const ProfilePoint& pt : meas->points) positions.push_back(pt.y_over_P);
            } else {
                const int n = std::max(o.grid_points, 2);
                for (int i = 0; i < n; ++i) positions.push_back(double(i) / (n - 1));
            }
            try {
                const ShearProfile pred =
                    predict_for_condition(cond, ds.conditions.diameter, model, positions, cfg.model,
                                          cfg.junction_offset, cfg.default_tau_max_factor, warn);
                for (const ProfilePoint& pt : pred.points) {
                    csv += cond.sample_id + ',' + report_detail::csv_num(pt.y_over_P) + ',' +
                           report_detail::csv_num(pt.tau) + '\n';
                }
            } catch (const std::exception& e) {
                any_failure = true;
                model_row["failed_samples"].push_back(
                    ojson{{"sample_id", cond.sample_id}, {"error", e.what()}});
            }
        }
        write_file_atomic(fs::path(o.out_dir) / ("predict_" + std::string(to_string(model)) +
                                                 ".csv"),
                          csv);
        results.push_back(std::move(model_row));
    }
    report["results"] = std::move(results);
    report["warnings"] = warnings;
    write_file_atomic(fs::path(o.out_dir) / "report.json", report.dump(2) + "\n");
    return any_failure ? 4 : 0;
}

int run_synth(const CliOptions& o, std::vector<std::string>& warnings) {
    const WarnFn warn = stderr_warn(warnings);
    const auto models = resolve_models(o.models);
    if (models.size() != 1)
        throw ConfigError("synth requires exactly one model (got " +
                          std::to_string(models.size()) + ")");
    const AnalysisConfig cfg = make_analysis_config(o);
    Dataset ds = load_dataset(o, false, warn);

    SynthConfig sc;
    sc.points_per_profile = o.synth_points;
    sc.junction_offset = cfg.junction_offset;
    sc.default_tau_max_factor = cfg.default_tau_max_factor;
    const auto profiles =
        synth_generate(ds.conditions, models[0], o.lambda_true, o.sigma_true, o.seed, sc,
                       cfg.model, warn);
    write_file_atomic(fs::path(o.out_dir) / "synth_profiles.csv", format_profiles_csv(profiles));

    ojson report{{"config", config_json(o, models)},
                 {"n_samples", profiles.size()},
                 {"warnings", warnings}};
    write_file_atomic(fs::path(o.out_dir) / "report.json", report.dump(2) + "\n");
    return 0;
}

int run_hbmes1(const CliOptions& o, std::vector<std::string>& warnings) {
    const WarnFn warn = stderr_warn(warnings);
    const auto models = resolve_models(o.models);
    const AnalysisConfig cfg = make_analysis_config(o);
    Dataset ds = load_dataset(o, true, warn);
    const double lambda = resolve_lambda(o, ds, warn);

    ojson report{{"config", config_json(o, models)}, {"lambda", lambda}};
    ojson rows = ojson::array();
    for (ModelId model : models) {
        const Hbmes1Result r = hbmes1_analyze(ds, model, lambda, cfg, warn);
        rows.push_back(to_json(r));
        // per-sample band tables at the fixed level, using the pooled state
        std::string csv;
        const auto pairs = analysis_detail::pair_samples(ds, model, cfg, {});
        bool first = true;
        for (const auto& sp : pairs) {
            const ConfidenceBound cb = build_bound(sp.predicted, r.state, cfg.level);
            std::string table = band_table_csv(sp.measured, cb, sp.sample_id);
            if (!first) table.erase(0, table.find('\n') + 1);
            csv += table;
            first = false;
        }
        write_file_atomic(
            fs::path(o.out_dir) / ("hbmes1_" + std::string(to_string(model)) + "_bands.csv"), csv);
    }
    report["models"] = std::move(rows);
    report["warnings"] = warnings;
    write_file_atomic(fs::path(o.out_dir) / "report.json", report.dump(2) + "\n");
    return 0;
}

int run_hbmes2(const CliOptions& o, std::vector<std::string>& warnings) {
    const WarnFn warn = stderr_warn(warnings);
    const auto models = resolve_models(o.models);
    const AnalysisConfig cfg = make_analysis_config(o);
    Dataset ds = load_dataset(o, true, warn);
    const double lambda = resolve_lambda(o, ds, warn);

    ojson report{{"config", config_json(o, models)}, {"lambda", lambda}};
    ojson rows = ojson::array();
    for (ModelId model : models) {
        const Hbmes2Result r = hbmes2_analyze(ds, model, lambda, cfg, warn);
        rows.push_back(to_json(r));
        std::string csv;
        const auto pairs = analysis_detail::pair_samples(ds, model, cfg, {});
        bool first = true;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const ConfidenceBound cb =
                build_bound(pairs[i].predicted, r.state,
                            std::min(r.samples[i].ocb.ocb, 100.0 - cfg.zeta));
            std::string table = band_table_csv(pairs[i].measured, cb, pairs[i].sample_id);
            if (!first) table.erase(0, table.find('\n') + 1);
            csv += table;
            first = false;
        }
        write_file_atomic(
            fs::path(o.out_dir) / ("hbmes2_" + std::string(to_string(model)) + "_bands.csv"), csv);
    }
    report["models"] = std::move(rows);
    report["warnings"] = warnings;
    write_file_atomic(fs::path(o.out_dir) / "report.json", report.dump(2) + "\n");
    return 0;
}

int run_calibrate(const CliOptions& o, std::vector<std::string>& warnings) {
    const WarnFn warn = stderr_warn(warnings);
    const auto models = resolve_models(o.models);
    const AnalysisConfig cfg = make_analysis_config(o);
    Dataset ds = load_dataset(o, true, warn);

    ojson report{{"config", config_json(o, models)}};
    ojson rows = ojson::array();
    for (ModelId model : models) {
        const CalibrationResult r =
            calibrate(ds, model, o.ss_min, o.ss_max, o.trials, o.seed, cfg, warn);
        rows.push_back(to_json(r));
        write_file_atomic(
            fs::path(o.out_dir) / ("calibrate_" + std::string(to_string(model)) + ".csv"),
            calibration_csv(r));
    }
    report["models"] = std::move(rows);
    report["warnings"] = warnings;
    write_file_atomic(fs::path(o.out_dir) / "report.json", report.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropy shear-stress models with HBMES uncertainty bounds"};
    app.require_subcommand(1);

    CliOptions o;
    auto add_common = [&](CLI::App* sub, bool needs_profiles) {
        sub->add_option("--conditions", o.conditions_path, "hydraulic conditions CSV")
            ->required();
        auto* prof = sub->add_option("--profiles", o.profiles_path, "measured profiles CSV");
        if (needs_profiles) prof->required();
        sub->add_option("--out", o.out_dir, "output directory")->required();
        sub->add_option("--models", o.models,
                        "comma-separated models (shannon, shannon_pl, tsallis, renyi, "
                        "rho_g_r_s) or 'all'")
            ->delimiter(',');
        sub->add_option("--seed", o.seed, "master random seed");
        sub->add_option("--q", o.q, "Tsallis entropy order");
        sub->add_option("--alpha-prime", o.alpha_prime, "Renyi entropy order in (0,1)");
        sub->add_option("--yw-m", o.yw_m, "wall/bed junction offset y_w [m]");
        sub->add_option("--rho", o.rho, "fluid density [kg/m^3]");
        sub->add_option("--g", o.g, "gravity [m/s^2]");
        sub->add_option("--zeta", o.zeta, "OCB search granularity [percent]");
        sub->add_option("--level", o.level, "fixed confidence-bound level [percent]");
        sub->add_option("--tau-max-factor", o.tau_max_factor,
                        "circular-section tau_max fallback, times rho*g*R*S");
    };

    auto* predict = app.add_subcommand("predict", "predicted profiles per sample and model");
    add_common(predict, false);
    predict->add_option("--grid-points", o.grid_points,
                        "positions per profile when no --profiles given");

    auto* synth = app.add_subcommand("synth", "generate a seeded synthetic measured dataset");
    add_common(synth, false);
    synth->add_option("--lambda-true", o.lambda_true, "Box-Cox factor used for generation");
    synth->add_option("--sigma-true", o.sigma_true, "transformed-space noise spread");
    synth->add_option("--points", o.synth_points, "points per profile");

    auto* hbmes1 = app.add_subcommand("hbmes1", "fixed-bound uncertainty statistics");
    add_common(hbmes1, true);
    double lambda_flag = 0.0;
    auto* l1 = hbmes1->add_option("--lambda", lambda_flag, "calibrated Box-Cox factor");

    auto* hbmes2 = app.add_subcommand("hbmes2", "optimized-bound uncertainty statistics");
    add_common(hbmes2, true);
    auto* l2 = hbmes2->add_option("--lambda", lambda_flag, "calibrated Box-Cox factor");

    auto* calib = app.add_subcommand("calibrate", "sample-size calibration sweep");
    add_common(calib, true);
    calib->add_option("--ss-min", o.ss_min, "smallest sample size");
    calib->add_option("--ss-max", o.ss_max, "largest sample size");
    calib->add_option("--trials", o.trials, "trials per sample size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::vector<std::string> warnings;
    try {
        if (l1->count() > 0 || l2->count() > 0) o.lambda = lambda_flag;
        std::error_code ec;
        CLI::App* sub = app.get_subcommands().front();
        o.command = sub->get_name();
        if (!o.out_dir.empty()) fs::create_directories(o.out_dir, ec);
        if (sub == predict) return run_predict(o, warnings);
        if (sub == synth) return run_synth(o, warnings);
        if (sub == hbmes1) return run_hbmes1(o, warnings);
        if (sub == hbmes2) return run_hbmes2(o, warnings);
        if (sub == calib) return run_calibrate(o, warnings);
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const SolverError& e) {
        std::fprintf(stderr, "solver error: %s\n", e.what());
        return 4;
    } catch (const DataError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "data error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
