// Acceptance suite: one check per criterion, one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "tauband/analysis.hpp"
#include "tauband/boxcox.hpp"
#include "tauband/dataset.hpp"
#include "tauband/entropy.hpp"
#include "tauband/geometry.hpp"
#include "tauband/knight.hpp"
#include "tauband/numerics.hpp"
#include "tauband/rng.hpp"
#include "tauband/uncertainty.hpp"

namespace fs = std::filesystem;
using namespace tauband;

namespace {

struct CheckFailure {
    std::string message;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw CheckFailure{msg};
}

struct Harness {
    int failures = 0;
    int index = 0;
    void run(const std::string& name, const std::function<void()>& fn) {
        ++index;
        try {
            fn();
            std::printf("C%02d %-34s PASS\n", index, name.c_str());
        } catch (const CheckFailure& f) {
            ++failures;
            std::printf("C%02d %-34s FAIL  (%s)\n", index, name.c_str(), f.message.c_str());
        } catch (const std::exception& e) {
            ++failures;
            std::printf("C%02d %-34s FAIL  (exception: %s)\n", index, name.c_str(), e.what());
        }
        std::fflush(stdout);
    }
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

constexpr double kGrid[] = {0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65};

struct SolvedModels {
    double lambda0, n;
    TsallisParams tsallis;
    RenyiParams renyi;
};

SolvedModels solve_all(double that) {
    const StressTargets t{that, 1.0};
    return {solve_shannon(t), powerlaw_n(t), solve_tsallis(t), solve_renyi(that)};
}

double eval_model(int m, const SolvedModels& s, double u) {
    switch (m) {
        case 0: return shannon_profile(s.lambda0, 1.0, u);
        case 1: return powerlaw_profile(s.n, 1.0, u);
        case 2: return tsallis_profile(s.tsallis, u);
        default: return renyi_profile(s.renyi, 1.0, u);
    }
}

// --- criterion 9 and 12 helpers ------------------------------------------

Dataset recovery_dataset(double lambda_true, double sigma_true, std::uint64_t seed) {
    Dataset ds;
    ds.conditions.diameter = 0.244;
    for (int i = 0; i < 8; ++i) {
        HydraulicCondition c;
        c.sample_id = "r" + std::to_string(i + 1);
        c.section_class = SectionClass::circular;
        c.t_over_D = 0.0;
        c.h_plus_t_over_D = 0.333;
        c.S0 = 0.001;
        c.tau_max_override = 1.2;
        ds.conditions.records.push_back(c);
    }
    SynthConfig sc;
    sc.points_per_profile = 3000;
    ds.measured = synth_generate(ds.conditions, ModelId::rho_g_r_s, lambda_true, sigma_true, seed,
                                 sc);
    return ds;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    require(in.good(), "cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const fs::path& work) {
    const std::string cmd = std::string(TAUBAND_CLI_PATH) + " " + args + " >" +
                            (work / "stdout.txt").string() + " 2>" +
                            (work / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

}  // namespace

int main() {
    Harness h;

    h.run("boundary-conditions", [] {
        for (double that : kGrid) {
            const SolvedModels s = solve_all(that);
            for (int m = 0; m < 4; ++m) {
                const double t0 = eval_model(m, s, 0.0);
                const double t1 = eval_model(m, s, 1.0);
                require(std::abs(t0) <= 1e-9,
                        "tau(0) = " + fmt(t0) + " for model " + std::to_string(m) +
                            " at tau_hat = " + fmt(that));
                require(std::abs(t1 - 1.0) <= 1e-6,
                        "tau(1) = " + fmt(t1) + " for model " + std::to_string(m) +
                            " at tau_hat = " + fmt(that));
            }
        }
    });

    h.run("mean-preservation", [] {
        for (double that : kGrid) {
            const SolvedModels s = solve_all(that);
            for (int m = 0; m < 4; ++m) {
                const double mean =
                    quadrature_mean([&](double u) { return eval_model(m, s, u); }, 4096);
                const double tol = m < 2 ? 1e-4 : 1e-3;
                require(std::abs(mean - that) <= tol * that,
                        "mean " + fmt(mean) + " vs " + fmt(that) + " for model " +
                            std::to_string(m));
            }
            // closed form for the power law
            const double closed = 1.0 * s.n / (s.n + 1.0);
            require(std::abs(closed - that) <= 1e-12, "power-law closed-form mean");
        }
    });

    h.run("shannon-linear-limit", [] {
        const double l0 = solve_shannon({0.5, 1.0});
        require(std::abs(l0 * 1.0) < 1e-6, "lambda0*tau_max = " + fmt(l0));
        for (int i = 0; i <= 100; ++i) {
            const double u = i / 100.0;
            require(std::abs(shannon_profile(l0, 1.0, u) - u) <= 1e-6, "profile not linear");
        }
    });

    h.run("constraint-residuals", [] {
        for (double that : kGrid) {
            const TsallisParams tp = solve_tsallis({that, 1.0});
            const auto tr = tsallis_residuals(tp.lambda1, tp.lambda2, tp.k, 1.0, that);
            require(std::abs(tr[0]) < 1e-10 && std::abs(tr[1]) < 1e-10,
                    "tsallis residuals (" + fmt(tr[0]) + ", " + fmt(tr[1]) + ") at tau_hat = " +
                        fmt(that));
            const RenyiParams rp = solve_renyi(that);
            const auto rr = renyi_residuals(rp.lambda_p, rp.lambda_pp, 0.5, that);
            require(std::abs(rr[0]) < 1e-10 && std::abs(rr[1]) < 1e-10,
                    "renyi residuals (" + fmt(rr[0]) + ", " + fmt(rr[1]) + ") at tau_hat = " +
                        fmt(that));
        }
    });

    h.run("normal-quantile-anchor", [] {
        const double z = std_normal_quantile(0.5 + 0.4750);
        require(std::abs(z - 1.95996) <= 5e-4, "z = " + fmt(z));
    });

    h.run("box-cox", [] {
        for (double lam : {-1.0, -0.5, 0.0, 0.5, 1.0, 2.0})
            for (double x : {0.01, 0.7, 1.0, 5.0, 50.0}) {
                const double back = boxcox_inverse(boxcox_forward(x, lam), lam);
                require(std::abs(back - x) <= 1e-10 * x,
                        "roundtrip " + fmt(x) + " -> " + fmt(back) + " at lambda " + fmt(lam));
            }
        Rng rng(42);
        std::vector<double> sample(500);
        for (double& v : sample) v = std::exp(0.4 + 0.8 * rng.gaussian());
        const double lam = fit_lambda(sample);
        require(lam >= -0.15 && lam <= 0.15, "lognormal fit lambda = " + fmt(lam));

        // brute-force 1e-3 grid oracle
        double best = -3.0, best_ll = -1e300;
        std::vector<double> lx(sample.size());
        for (std::size_t i = 0; i < sample.size(); ++i) lx[i] = std::log(sample[i]);
        for (int i = 0; i <= 6000; ++i) {
            const double l = -3.0 + 1e-3 * i;
            double mean = 0.0;
            std::vector<double> z(sample.size());
            for (std::size_t k = 0; k < sample.size(); ++k) {
                z[k] = l == 0.0 ? lx[k] : (std::pow(sample[k], l) - 1.0) / l;
                mean += z[k];
            }
            mean /= double(z.size());
            double ss = 0.0;
            for (double v : z) ss += (v - mean) * (v - mean);
            double sl = 0.0;
            for (double v : lx) sl += v;
            const double ll = -0.5 * double(z.size()) * std::log(ss / double(z.size())) +
                              (l - 1.0) * sl;
            if (ll > best_ll) {
                best_ll = ll;
                best = l;
            }
        }
        require(std::abs(lam - best) <= 2e-3,
                "refined " + fmt(lam) + " vs grid oracle " + fmt(best));
    });

    h.run("statistic-identities", [] {
        struct Row {
            double f_p, f_n, free;
        } rows[] = {{6.521, 0.096, 6.617}, {8.525, 0.239, 8.764}, {26.041, 0.658, 26.699}};
        for (const Row& r : rows) {
            ConfidenceBound cb;
            cb.position = {0.0, 1.0};
            cb.predicted = {1.0, 1.0};
            cb.lower = {0.0, 0.5};
            cb.upper = {2.0 + r.f_p, 2.0};
            ShearProfile measured;
            measured.points = {{0.0, 2.0}, {1.0, 0.5 - r.f_n}};
            const BandStatistics s = band_statistics(measured, cb);
            require(std::abs(s.free - r.free) <= 1e-3,
                    "FREE " + fmt(s.free) + " vs " + fmt(r.free));
            require(std::abs(s.free - (s.f_p + s.f_n)) <= 1e-12, "FREE != F_P + F_N");
        }
        struct FRow {
            double ocb, free_opt, focb;
        } frows[] = {{89.26, 0.525, 0.469}, {98.96, 1.995, 1.974}, {100.0, 24.312, 24.312}};
        for (const FRow& r : frows)
            require(std::abs(focb(r.ocb, r.free_opt) - r.focb) <= 1e-3,
                    "FOCB(" + fmt(r.ocb) + ", " + fmt(r.free_opt) + ")");
    });

    h.run("ocb-search", [] {
        const double zeta = 0.01;
        for (std::uint64_t seed : {101u, 202u, 303u, 404u, 505u}) {
            Rng rng(seed);
            ShearProfile measured, predicted;
            std::vector<double> mv, pv;
            for (int i = 0; i < 200; ++i) {
                const double pred = 0.3 + 2.7 * rng.uniform();
                const double z = boxcox_forward(pred, 0.3) + 0.12 * rng.gaussian();
                const double meas = boxcox_inverse(z, 0.3);
                measured.points.push_back({double(i), meas});
                predicted.points.push_back({double(i), pred});
                mv.push_back(meas);
                pv.push_back(pred);
            }
            const NormalizationState st = error_stats(mv, pv, 0.3);
            const OcbResult r = find_ocb(measured, predicted, st, zeta);

            // exhaustive grid scan
            double scan = 100.0;
            for (long k = 1; k <= std::lround(100.0 / zeta) - 1; ++k) {
                const double level = k * zeta;
                const auto s =
                    band_statistics(measured, build_bound(predicted, st, level));
                if (s.n_in == 100.0) {
                    scan = level;
                    break;
                }
            }
            require(r.ocb == scan, "binary " + fmt(r.ocb) + " != scan " + fmt(scan));
            const auto at = [&](double level) {
                return band_statistics(measured, build_bound(predicted, st, level));
            };
            require(at(r.ocb).n_in == 100.0, "N_in at OCB below 100");
            require(r.ocb <= zeta || at(r.ocb - zeta).n_in < 100.0, "OCB not minimal");
            require(at(r.ocb).f_n == 0.0, "F_N nonzero at OCB");
            require(std::abs(r.free_opt - at(r.ocb).f_p) <= 1e-12, "FREE_opt != F_P");
        }
    });

    h.run("synthetic-recovery", [] {
        const double lambda_true = 0.3;
        const Dataset ds = recovery_dataset(lambda_true, 0.1, 20240810);
        std::vector<double> pooled;
        for (const ShearProfile& p : ds.measured)
            for (const ProfilePoint& pt : p.points)
                if (pt.tau > 0.0) pooled.push_back(pt.tau);
        require(pooled.size() >= 300, "needs at least 300 points");
        const double lam = fit_lambda(pooled);
        require(std::abs(lam - lambda_true) <= 0.15, "fitted lambda = " + fmt(lam));

        const auto h1 = hbmes1_analyze(ds, ModelId::rho_g_r_s, lam);
        require(std::abs(h1.stats.n_in - 95.0) <= 3.0, "N_in = " + fmt(h1.stats.n_in));

        double prev = -1.0;
        for (double sigma : {0.05, 0.1, 0.2}) {
            const Dataset d2 = recovery_dataset(lambda_true, sigma, 20240810);
            std::vector<double> pool2;
            for (const ShearProfile& p : d2.measured)
                for (const ProfilePoint& pt : p.points)
                    if (pt.tau > 0.0) pool2.push_back(pt.tau);
            const double lam2 = fit_lambda(pool2);
            const auto h2 = hbmes2_analyze(d2, ModelId::rho_g_r_s, lam2);
            require(h2.focb_average > prev,
                    "FOCB not increasing at sigma = " + fmt(sigma) + " (" +
                        fmt(h2.focb_average) + " <= " + fmt(prev) + ")");
            prev = h2.focb_average;
        }
    });

    h.run("sf-branch-continuity", [] {
        const double below = wall_shear_force_percent(4.374 - 1e-12);
        const double above = wall_shear_force_percent(4.374 + 1e-12);
        require(std::abs(above - below) / below < 1e-3,
                "branch mismatch " + fmt(std::abs(above - below) / below));
        const double sf0 = wall_shear_force_percent(0.0);
        require(std::abs(sf0 - 100.0) <= 0.01, "%SF(0) = " + fmt(sf0));
    });

    h.run("geometry-oracle", [] {
        // polygon/shoelace oracle, Richardson-extrapolated
        auto measure = [](double D, double t, double H, int n) {
            const double r = 0.5 * D;
            const double th_lo = std::acos(std::clamp(1.0 - 2.0 * t / D, -1.0, 1.0));
            const double th_hi = std::acos(std::clamp(1.0 - 2.0 * H / D, -1.0, 1.0));
            std::vector<double> xs, zs;
            for (int i = 0; i <= n; ++i) {
                const double th = th_hi - (th_hi - th_lo) * i / n;
                xs.push_back(-r * std::sin(th));
                zs.push_back(r - r * std::cos(th));
            }
            for (int i = 0; i <= n; ++i) {
                const double th = th_lo + (th_hi - th_lo) * i / n;
                xs.push_back(r * std::sin(th));
                zs.push_back(r - r * std::cos(th));
            }
            double wall = 0.0, area2 = 0.0;
            const std::size_t m = xs.size();
            for (std::size_t i = 0; i < m; ++i) {
                const std::size_t j = (i + 1) % m;
                area2 += xs[i] * zs[j] - xs[j] * zs[i];
                if (i + 1 < m && i != static_cast<std::size_t>(n))
                    wall += std::hypot(xs[j] - xs[i], zs[j] - zs[i]);
            }
            return std::pair<double, double>(wall, 0.5 * std::abs(area2));
        };
        Rng rng(99);
        for (int c = 0; c < 50; ++c) {
            const double D = 0.244;
            const double tD = 0.9 * rng.uniform();
            const double HD = tD + (0.98 - tD) * (0.02 + 0.96 * rng.uniform());
            const auto s = build_section(D, tD * D, (HD - tD) * D, 0.002);
            const auto c1 = measure(D, tD * D, HD * D, 4000);
            const auto c2 = measure(D, tD * D, HD * D, 8000);
            const double wall = (4.0 * c2.first - c1.first) / 3.0;
            const double area = (4.0 * c2.second - c1.second) / 3.0;
            require(std::abs(s.wall_perimeter - wall) <= 1e-8 * wall,
                    "P_w mismatch at t/D = " + fmt(tD) + ", H/D = " + fmt(HD));
            require(std::abs(s.flow_area - area) <= 1e-8 * area,
                    "A mismatch at t/D = " + fmt(tD) + ", H/D = " + fmt(HD));
        }
    });

    h.run("cli-determinism", [] {
        const fs::path work = fs::temp_directory_path() / "tauband_acceptance";
        fs::create_directories(work);
        const fs::path cond = work / "conditions.csv";
        {
            std::ofstream out(cond, std::ios::trunc);
            out << "sample_id,section_class,t_over_D,h_plus_t_over_D,S0,Fr,Q_lps,tau_max_Pa\n";
            out << "c1,circular,0,0.333,0.001,0.5,5.4,1.2\n";
            out << "c2,circular,0,0.506,0.001,0.5,11.7,1.4\n";
            out << "f1,flatbed,0.25,0.45,0.002,0.7,3.0,\n";
        }
        // identical command (including --out) run twice; snapshot in between
        auto run_pair = [&](const std::string& args, const fs::path& out,
                            const std::vector<std::string>& files) {
            require(run_cli(args + " --out " + out.string(), work) == 0, "cli failed: " + args);
            std::vector<std::string> snap;
            for (const std::string& f : files) snap.push_back(slurp(out / f));
            require(run_cli(args + " --out " + out.string(), work) == 0, "cli failed: " + args);
            for (std::size_t i = 0; i < files.size(); ++i)
                require(slurp(out / files[i]) == snap[i], "outputs differ for " + files[i]);
        };
        const std::string base = "--conditions " + cond.string() + " --seed 9";
        run_pair("synth " + base + " --models shannon --lambda-true 0.3 --sigma-true 0.1",
                 work / "s1", {"synth_profiles.csv", "report.json"});
        const std::string prof = (work / "s1" / "synth_profiles.csv").string();
        run_pair("hbmes2 " + base + " --profiles " + prof +
                     " --models shannon,shannon_pl,rho_g_r_s",
                 work / "u1",
                 {"report.json", "hbmes2_shannon_bands.csv", "hbmes2_rho_g_r_s_bands.csv"});
        run_pair("predict " + base + " --models shannon,rho_g_r_s", work / "p1",
                 {"report.json", "predict_shannon.csv", "predict_rho_g_r_s.csv"});
    });

    if (h.failures == 0)
        std::printf("all %d acceptance criteria passed\n", h.index);
    else
        std::printf("%d of %d acceptance criteria FAILED\n", h.failures, h.index);
    return h.failures == 0 ? 0 : 1;
}
