#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "mmcache/analytics.hpp"
#include "mmcache/config.hpp"
#include "mmcache/csv.hpp"
#include "mmcache/montecarlo.hpp"
#include "mmcache/popularity.hpp"
#include "mmcache/validation.hpp"

namespace mmcache::experiments {

using analytics::Policy;
using analytics::PsiMode;

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {
        "fig2_hratio",        "fig3_gain_vs_xi", "fig4_min_delta",
        "fig5_gain_vs_K",     "fig6_hd_rate_delay", "fig7_fd_rate_delay",
        "fig8_fd_high_xi",    "fig9_delay_percentiles", "validate"};
    return names;
}

struct ExperimentSpec {
    std::string name;
    SystemParams params;  // resolved base parameters (defaults or --config)
    long n_drops = 20000;
    std::uint64_t seed = 1;
    int jobs = 0;  // 0 -> hardware concurrency
    std::string out_dir = "out";
    std::vector<long> k_list;
    std::vector<double> delta_list;
    std::vector<double> xi_list;
    PsiMode psi_mode = PsiMode::random;
    int k_order = 2;
    long dump_records = 0;

    int effective_jobs() const {
        if (jobs > 0) return jobs;
        unsigned hc = std::thread::hardware_concurrency();
        return hc == 0 ? 1 : int(hc);
    }
};

namespace detail {

inline std::vector<double> linspace_step(double lo, double hi, double step) {
    std::vector<double> g;
    for (double x = lo; x <= hi + 1e-9; x += step) g.push_back(x);
    return g;
}

inline std::vector<long> log_k_grid(long hi) {
    std::set<long> ks;
    for (double e = 0.0; e <= std::log10(double(hi)) + 1e-9; e += 0.125)
        ks.insert(std::lround(std::pow(10.0, e)));
    ks.insert(hi);
    return {ks.begin(), ks.end()};
}

inline std::string trim_float(double v) {
    std::ostringstream os;
    os << v;
    std::string s = os.str();
    for (auto& c : s)
        if (c == '.') c = 'p';
    return s;
}

inline const char* psi_mode_name(PsiMode m) {
    switch (m) {
        case PsiMode::half: return "half";
        case PsiMode::one: return "one";
        default: return "random";
    }
}

}  // namespace detail

// Writes the manifest capturing everything needed to reproduce the outputs.
inline void write_manifest(const ExperimentSpec& spec,
                           const std::filesystem::path& dir) {
    nlohmann::json m;
    m["experiment"] = spec.name;
    m["seed"] = spec.seed;
    m["n_drops"] = spec.n_drops;
    m["psi_mode"] = detail::psi_mode_name(spec.psi_mode);
    m["k_order"] = spec.k_order;
    m["k_list"] = spec.k_list;
    m["delta_list"] = spec.delta_list;
    m["xi_list"] = spec.xi_list;
    std::string params_text = save_params(spec.params);
    m["params"] = params_text;
    std::ostringstream key;
    key << spec.name << '\n' << params_text << spec.seed << '\n' << spec.n_drops << '\n'
        << detail::psi_mode_name(spec.psi_mode) << '\n' << spec.k_order;
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx",
                  static_cast<unsigned long long>(content_hash(key.str())));
    m["input_hash"] = hex;
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

namespace detail {

inline void run_fig2(const ExperimentSpec& spec, const std::filesystem::path& dir) {
    std::vector<double> xis =
        spec.xi_list.empty() ? std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.5, 2.0}
                             : spec.xi_list;
    auto ks = log_k_grid(10000);
    for (double xi : xis) {
        Csv csv({"K", "h_ratio", "h_ratio_limit"});
        double limit = caching::h_ratio_limit(xi);
        for (long k : ks) csv.add_row({double(k), caching::h_ratio(k, xi), limit});
        write_text_file(dir / ("hratio_xi" + trim_float(xi) + ".csv"), csv.str());
    }
}

inline void run_fig3(const ExperimentSpec& spec, const std::filesystem::path& dir) {
    long K = spec.k_list.empty() ? 100 : spec.k_list[0];
    std::vector<double> deltas =
        spec.delta_list.empty() ? std::vector<double>{0.5, 0.75, 1.0} : spec.delta_list;
    auto xi_fine = linspace_step(0.0, 2.0, 0.02);
    for (double d : deltas) {
        Csv csv({"xi", "f_gain"});
        for (double xi : xi_fine) csv.add_row({xi, (1.0 + d) * caching::h_ratio(K, xi)});
        write_text_file(dir / ("fgain_ana_delta" + trim_float(d) + ".csv"), csv.str());
    }
    // Simulated spot checks on a coarse grid.
    for (double d : deltas) {
        Csv csv({"xi", "f_gain_sim", "f_gain_ci"});
        for (double xi : linspace_step(0.0, 2.0, 0.25)) {
            SystemParams p = spec.params;
            p.cache_size = K;
            p.delta = d;
            p.xi = xi;
            validate(p);
            montecarlo::CampaignOptions opt;
            opt.n_drops = spec.n_drops;
            opt.master_seed = spec.seed + std::uint64_t(std::lround(xi * 100));
            opt.jobs = spec.effective_jobs();
            opt.psi_mode = spec.psi_mode;
            auto dac = montecarlo::run_campaign(p, Policy::hd_dac, opt);
            auto mpc = montecarlo::run_campaign(p, Policy::mpc, opt);
            double gain = dac.offloading_fraction / mpc.offloading_fraction;
            double rel = std::sqrt(std::pow(dac.offloading_ci / dac.offloading_fraction, 2) +
                                   std::pow(mpc.offloading_ci / mpc.offloading_fraction, 2));
            csv.add_row({xi, gain, std::min(1.0, gain * rel)});
        }
        write_text_file(dir / ("fgain_sim_delta" + trim_float(d) + ".csv"), csv.str());
    }
}

inline void run_fig4(const ExperimentSpec& spec, const std::filesystem::path& dir) {
    std::vector<long> ks = spec.k_list.empty() ? std::vector<long>{50, 100, 200} : spec.k_list;
    auto xis = linspace_step(0.0, 2.0, 0.02);
    for (long k : ks) {
        Csv csv({"xi", "min_delta"});
        for (double xi : xis)
            if (auto d = caching::min_delta_for_gain(k, xi)) csv.add_row({xi, *d});
        write_text_file(dir / ("min_delta_K" + std::to_string(k) + ".csv"), csv.str());
    }
    Csv csv({"xi", "min_delta"});
    for (double xi : xis) {
        double needed = 1.0 / caching::h_ratio_limit(xi) - 1.0;
        if (needed <= 1.0) csv.add_row({xi, std::max(0.0, needed)});
    }
    write_text_file(dir / "min_delta_Kinf.csv", csv.str());
}

inline void run_fig5(const ExperimentSpec& spec, const std::filesystem::path& dir) {
    double d = spec.delta_list.empty() ? 0.75 : spec.delta_list[0];
    std::vector<double> xis =
        spec.xi_list.empty() ? std::vector<double>{0.3, 0.6, 0.9} : spec.xi_list;
    auto ks = log_k_grid(10000);
    for (double xi : xis) {
        Csv csv({"K", "f_gain", "f_gain_limit"});
        double limit = (1.0 + d) * caching::h_ratio_limit(xi);
        for (long k : ks) csv.add_row({double(k), (1.0 + d) * caching::h_ratio(k, xi), limit});
        write_text_file(dir / ("fgain_vs_K_xi" + trim_float(xi) + ".csv"), csv.str());
    }
}

struct RateDelayBundle {
    std::vector<montecarlo::DropRecord> records;
    montecarlo::SimulationSummary summary;
};

inline RateDelayBundle run_rate_delay_campaign(const ExperimentSpec& spec,
                                               const SystemParams& p, Policy policy) {
    montecarlo::CampaignOptions opt;
    opt.n_drops = spec.n_drops;
    opt.master_seed = spec.seed;
    opt.jobs = spec.effective_jobs();
    opt.psi_mode = spec.psi_mode;
    RateDelayBundle b;
    b.records = montecarlo::run_drops(p, policy, opt);
    b.summary = montecarlo::summarize(policy, b.records);
    return b;
}

inline void write_conditional_delay_cdfs(const RateDelayBundle& b,
                                         const std::filesystem::path& dir) {
    std::vector<double> cell, d2d, total;
    for (const auto& r : b.records) {
        total.push_back(r.delay);
        if (r.outcome == montecarlo::Outcome::cellular) cell.push_back(r.delay);
        if (r.outcome == montecarlo::Outcome::d2d) d2d.push_back(r.delay);
    }
    std::sort(cell.begin(), cell.end());
    std::sort(d2d.begin(), d2d.end());
    std::sort(total.begin(), total.end());
    auto grid = montecarlo::delay_grid();
    auto emit = [&](const char* name, const std::vector<double>& sorted) {
        if (sorted.empty()) return;
        Csv csv({"delay_s", "cdf"});
        for (double d : grid) csv.add_row({d, 1.0 - validation::ccdf_at(sorted, d)});
        write_text_file(dir / name, csv.str());
    };
    emit("delay_cell_sim.csv", cell);
    emit("delay_d2d_sim.csv", d2d);
    emit("delay_total_sim.csv", total);
}

inline void run_rate_delay_figure(const ExperimentSpec& spec,
                                  const std::filesystem::path& dir, Policy policy,
                                  double xi_override) {
    SystemParams p = spec.params;
    p.delta = 1.0;
    p.cache_size = 200;
    p.xi = xi_override;
    validate(p);
    const int k = spec.k_order;
    auto rate_points = montecarlo::rate_grid();
    auto delay_points = montecarlo::delay_grid();

    {
        Csv csv({"rate_bps", "ccdf"});
        for (double rho : rate_points)
            csv.add_row({rho, analytics::cellular_rate_ccdf(rho, p, policy)});
        write_text_file(dir / "rate_cell_ana.csv", csv.str());
    }
    if (policy == Policy::hd_dac) {
        Csv csv({"rate_bps", "ccdf"});
        for (double rho : rate_points)
            csv.add_row({rho, analytics::hd_d2d_rate_ccdf(rho, p, k, spec.psi_mode)});
        write_text_file(dir / "rate_d2d_ana.csv", csv.str());
    } else {
        Csv csv({"rate_bps", "ccdf_lower", "ccdf_upper"});
        for (double rho : rate_points) {
            auto [lo, up] = analytics::fd_d2d_rate_ccdf_bounds(rho, p, k);
            csv.add_row({rho, lo, up});
        }
        write_text_file(dir / "rate_d2d_ana.csv", csv.str());
    }
    {
        Csv csv({"delay_s", "cdf_cell", "cdf_d2d", "cdf_total"});
        for (double d : delay_points) {
            double need = p.sigma_file / d;
            double cdf_cell = analytics::cellular_rate_ccdf(need, p, policy);
            double cdf_d2d = policy == Policy::hd_dac
                                 ? analytics::hd_d2d_rate_ccdf(need, p, k, spec.psi_mode)
                                 : analytics::fd_d2d_rate_ccdf_bounds(need, p, k).second;
            double cdf_total = analytics::delay_cdf(d, p, policy, k, spec.psi_mode);
            csv.add_row({d, cdf_cell, cdf_d2d, cdf_total});
        }
        write_text_file(dir / "delay_ana.csv", csv.str());
    }

    auto bundle = run_rate_delay_campaign(spec, p, policy);
    {
        Csv csv({"rate_bps", "ccdf", "ci"});
        for (std::size_t i = 0; i < rate_points.size(); ++i)
            csv.add_row({rate_points[i], bundle.summary.cell_rate_ccdf[i],
                         bundle.summary.cell_rate_ci[i]});
        write_text_file(dir / "rate_cell_sim.csv", csv.str());
    }
    {
        Csv csv({"rate_bps", "ccdf", "ci"});
        for (std::size_t i = 0; i < rate_points.size(); ++i)
            csv.add_row({rate_points[i], bundle.summary.d2d_rate_ccdf[i],
                         bundle.summary.d2d_rate_ci[i]});
        write_text_file(dir / "rate_d2d_sim.csv", csv.str());
    }
    write_conditional_delay_cdfs(bundle, dir);
    if (spec.dump_records > 0) {
        std::ostringstream os;
        std::vector<montecarlo::DropRecord> head(
            bundle.records.begin(),
            bundle.records.begin() +
                std::min<std::size_t>(bundle.records.size(), spec.dump_records));
        montecarlo::dump_records_csv(head, os);
        write_text_file(dir / "records.csv", os.str());
    }
}

inline void run_fig9(const ExperimentSpec& spec, const std::filesystem::path& dir) {
    std::vector<long> ks = spec.k_list.empty() ? std::vector<long>{50, 100, 200} : spec.k_list;
    std::vector<double> deltas =
        spec.delta_list.empty() ? std::vector<double>{0.5, 0.75, 1.0} : spec.delta_list;
    auto xis = spec.xi_list.empty() ? linspace_step(0.0, 2.0, 0.1) : spec.xi_list;

    for (long K : ks) {
        auto run_curve = [&](Policy policy, double delta, const std::string& file) {
            Csv csv({"xi", "p90_ana_s", "p90_sim_s"});
            for (double xi : xis) {
                SystemParams p = spec.params;
                p.cache_size = K;
                p.delta = delta;
                p.xi = xi;
                validate(p);
                double ana =
                    analytics::delay_percentile(0.9, p, policy, spec.k_order, spec.psi_mode);
                montecarlo::CampaignOptions opt;
                opt.n_drops = spec.n_drops;
                opt.master_seed = spec.seed + std::uint64_t(std::lround(xi * 1000));
                opt.jobs = spec.effective_jobs();
                opt.psi_mode = spec.psi_mode;
                auto summary = montecarlo::run_campaign(p, policy, opt);
                csv.add_row({xi, ana, summary.delay_quantile(0.9)});
            }
            write_text_file(dir / file, csv.str());
        };
        run_curve(Policy::mpc, deltas.front(), "p90_mpc_K" + std::to_string(K) + ".csv");
        for (double d : deltas)
            run_curve(Policy::hd_dac, d,
                      "p90_hddac_K" + std::to_string(K) + "_delta" + trim_float(d) + ".csv");
    }
}

inline int run_validate(const ExperimentSpec& spec, const std::filesystem::path& dir,
                        std::ostream& log) {
    SystemParams base = spec.params;
    auto rep = validation::cross_validate(base, spec.n_drops, spec.seed,
                                          spec.effective_jobs(), spec.k_order);
    auto pm1000 = caching::zipf_pmf(1.0, 1000);
    auto pm1000_04 = caching::zipf_pmf(0.4, 1000);

    struct Check {
        std::string name;
        double value;
        double threshold;
        bool below;  // pass when value <= threshold (or >= when false)
    };
    std::vector<Check> checks;
    double fgain = 2.0 * caching::h_ratio(100, 0.0);
    checks.push_back({"offloading_fgain_delta1_xi0_err", std::fabs(fgain - 2.0), 1e-9, true});
    checks.push_back({"hdac_xi1_K200_err",
                      std::fabs(caching::h_dac(200, pm1000) - 0.439), 0.002, true});
    checks.push_back({"hdac_xi04_K200_err",
                      std::fabs(caching::h_dac(200, pm1000_04) - 0.286), 0.002, true});
    checks.push_back({"load_tv_mpc", rep.load_tv_mpc, 0.02, true});
    checks.push_back({"cell_snr_supgap", rep.snr_gap, 0.02, true});
    checks.push_back({"cell_sinr_supgap", rep.sinr_gap, 0.05, true});
    checks.push_back({"hd_d2d_sinr_supgap", rep.hd_d2d_gap, 0.03, true});
    checks.push_back({"fd_laplace_violation", rep.fd_laplace_violation, 0.0, true});
    checks.push_back(
        {"fd_both_active_err",
         std::fabs(rep.both_active_fraction - rep.h_dac * rep.h_dac), 0.005, true});

    Csv csv({"check", "value", "threshold", "pass"});
    int failures = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        bool pass = checks[i].below ? checks[i].value <= checks[i].threshold
                                    : checks[i].value >= checks[i].threshold;
        if (!pass) ++failures;
        log << (pass ? "PASS " : "FAIL ") << checks[i].name << " = " << checks[i].value
            << " (threshold " << checks[i].threshold << ")\n";
        csv.add_row({double(i), checks[i].value, checks[i].threshold, pass ? 1.0 : 0.0});
    }
    log << "medians [Gbps]: cell sim " << rep.sim_median_cell / 1e9 << " ana "
        << rep.ana_median_cell / 1e9 << ", d2d hd sim " << rep.sim_median_d2d_hd / 1e9
        << " ana " << rep.ana_median_d2d_hd / 1e9 << ", d2d fd sim "
        << rep.sim_median_d2d_fd / 1e9 << " ana " << rep.ana_median_d2d_fd / 1e9 << "\n";
    write_text_file(dir / "report.csv", csv.str());
    return failures;
}

}  // namespace detail

// Runs one experiment; returns a process exit code (nonzero = failed checks).
inline int run_experiment(const ExperimentSpec& spec, std::ostream& log) {
    bool known = false;
    for (const auto& n : experiment_names()) known = known || n == spec.name;
    if (!known) throw std::invalid_argument("unknown experiment: " + spec.name);

    std::filesystem::path dir = std::filesystem::path(spec.out_dir) / spec.name;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output dir: " + dir.string());

    int code = 0;
    if (spec.name == "fig2_hratio") detail::run_fig2(spec, dir);
    else if (spec.name == "fig3_gain_vs_xi") detail::run_fig3(spec, dir);
    else if (spec.name == "fig4_min_delta") detail::run_fig4(spec, dir);
    else if (spec.name == "fig5_gain_vs_K") detail::run_fig5(spec, dir);
    else if (spec.name == "fig6_hd_rate_delay")
        detail::run_rate_delay_figure(spec, dir, Policy::hd_dac, 0.4);
    else if (spec.name == "fig7_fd_rate_delay")
        detail::run_rate_delay_figure(spec, dir, Policy::fd_dac, 0.4);
    else if (spec.name == "fig8_fd_high_xi")
        detail::run_rate_delay_figure(spec, dir, Policy::fd_dac, 1.0);
    else if (spec.name == "fig9_delay_percentiles") detail::run_fig9(spec, dir);
    else if (spec.name == "validate") code = detail::run_validate(spec, dir, log);

    write_manifest(spec, dir);
    log << "wrote " << dir.string() << "\n";
    return code;
}

}  // namespace mmcache::experiments
