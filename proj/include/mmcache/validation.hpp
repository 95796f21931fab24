#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "mmcache/analytics.hpp"
#include "mmcache/montecarlo.hpp"

namespace mmcache::validation {

using analytics::Policy;
using analytics::PsiMode;

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1));
    return g;
}

// Empirical CCDF of sorted samples at a point.
inline double ccdf_at(const std::vector<double>& sorted, double x) {
    if (sorted.empty()) return 0.0;
    auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    return double(sorted.end() - it) / double(sorted.size());
}

// Root of ccdf(x) = level on a bracket, assuming a non-increasing ccdf.
inline double invert_ccdf(const std::function<double(double)>& ccdf, double level, double lo,
                          double hi) {
    for (int i = 0; i < 200 && ccdf(hi) > level; ++i) hi *= 2.0;
    for (int i = 0; i < 100; ++i) {
        double mid = 0.5 * (lo + hi);
        if (ccdf(mid) > level)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-6 * hi) break;
    }
    return 0.5 * (lo + hi);
}

// Half-width of a 95% interval for an empirical quantile, from the order
// statistics of the sorted sample.
inline double quantile_ci(const std::vector<double>& sorted, double q) {
    if (sorted.size() < 10) return 0.0;
    double n = double(sorted.size());
    double slack = 1.96 * std::sqrt(q * (1.0 - q) * n);
    auto at = [&](double pos) {
        long i = std::clamp(long(pos), 0L, long(n) - 1);
        return sorted[i];
    };
    return 0.5 * (at(q * n + slack) - at(q * n - slack));
}

struct CrossValidationReport {
    long n_drops = 0;
    // cell-load pmf vs the gamma-Poisson mixture (MPC, xi=0.4, K=200)
    double load_tv_mpc = 1.0;
    // cellular SINR chain (DAC delta=1, K=200, xi=0.4)
    double snr_gap = 1.0;            // analytic vs simulated SNR-only CCDF
    double sinr_gap = 1.0;           // analytic vs simulated full-interference CCDF
    double noise_limited_gap = 1.0;  // simulated SNR vs SINR CCDF
    // HD D2D SINR CCDF
    double hd_d2d_gap = 1.0;
    // FD Laplace transform vs Prop-5 bracket (max exceedance; <= 0 inside)
    double fd_laplace_violation = 1.0;
    // FD pair activity
    double both_active_fraction = 0.0;
    double h_dac = 0.0;
    // medians [bit/s]
    double sim_median_cell = 0.0;
    double sim_median_d2d_hd = 0.0;
    double sim_median_d2d_fd = 0.0;
    double ana_median_cell = 0.0;
    double ana_median_d2d_hd = 0.0;
    double ana_median_d2d_fd = 0.0;
};

// Runs the analytic-vs-simulation comparisons behind the acceptance gate at
// the given scale. Campaign parameters follow the paper's rate/delay setup:
// K=200, xi=0.4, delta=1 for the SINR chains, MPC for the load law.
inline CrossValidationReport cross_validate(const SystemParams& table2, long n_drops,
                                            std::uint64_t seed, int jobs, int k_order,
                                            PsiMode hd_mode = PsiMode::half) {
    CrossValidationReport rep;
    rep.n_drops = n_drops;

    SystemParams p = table2;
    p.cache_size = 200;
    p.xi = 0.4;
    p.delta = 1.0;
    validate(p);
    rep.h_dac = analytics::detail::h_dac_of(p);

    montecarlo::CampaignOptions opt;
    opt.n_drops = n_drops;
    opt.master_seed = seed;
    opt.jobs = jobs;
    opt.psi_mode = hd_mode;

    // --- MPC load law ---
    {
        auto records = montecarlo::run_drops(p, Policy::mpc, opt);
        auto summary = montecarlo::summarize(Policy::mpc, records);
        double lc = analytics::lambda_cell(p, Policy::mpc);
        double tv = 0.0;
        double analytic_mass = 0.0;
        long n_max = long(summary.load_pmf.size()) + 200;
        for (long n = 1; n <= n_max; ++n) {
            double ana = analytics::cell_load_pmf(lc, p.lambda_bs, n);
            analytic_mass += ana;
            double emp = n <= long(summary.load_pmf.size()) ? summary.load_pmf[n - 1] : 0.0;
            tv += std::fabs(ana - emp);
            if (analytic_mass > 1.0 - 1e-12) break;
        }
        rep.load_tv_mpc = 0.5 * (tv + std::max(0.0, 1.0 - analytic_mass));
    }

    // --- HD-DAC campaign: cellular chain, D2D SINR, medians ---
    {
        auto records = montecarlo::run_drops(p, Policy::hd_dac, opt);
        auto summary = montecarlo::summarize(Policy::hd_dac, records);

        std::vector<double> snrs, sinrs, d2d_sinrs;
        snrs.reserve(records.size());
        sinrs.reserve(records.size());
        for (const auto& r : records) {
            snrs.push_back(r.cell_snr);
            sinrs.push_back(r.cell_sinr);
            if (r.has_d2d) d2d_sinrs.push_back(r.d2d_sinr);
        }
        std::sort(snrs.begin(), snrs.end());
        std::sort(sinrs.begin(), sinrs.end());
        std::sort(d2d_sinrs.begin(), d2d_sinrs.end());

        auto budget = analytics::cellular_budget(p);
        double snr_gap = 0.0, sinr_gap = 0.0;
        for (double t_db = -10.0; t_db <= 40.0; t_db += 0.25) {
            double t = db_to_linear(t_db);
            double ana = analytics::cellular_sinr_ccdf(t, p, budget);
            snr_gap = std::max(snr_gap, std::fabs(ana - ccdf_at(snrs, t)));
            sinr_gap = std::max(sinr_gap, std::fabs(ana - ccdf_at(sinrs, t)));
        }
        rep.snr_gap = snr_gap;
        rep.sinr_gap = sinr_gap;
        rep.noise_limited_gap = summary.noise_limited_gap;

        double hd_gap = 0.0;
        for (double t : log_grid(1e-1, 1e5, 61)) {
            double ana = analytics::hd_d2d_sinr_ccdf(t, p, k_order);
            hd_gap = std::max(hd_gap, std::fabs(ana - ccdf_at(d2d_sinrs, t)));
        }
        rep.hd_d2d_gap = hd_gap;

        rep.sim_median_cell = summary.median_cell_rate();
        rep.sim_median_d2d_hd = summary.median_d2d_rate();
        rep.ana_median_cell = invert_ccdf(
            [&](double rho) { return analytics::cellular_rate_ccdf(rho, p, Policy::hd_dac); },
            0.5, 0.0, 1e10);
        rep.ana_median_d2d_hd = invert_ccdf(
            [&](double rho) { return analytics::hd_d2d_rate_ccdf(rho, p, k_order, hd_mode); },
            0.5, 0.0, 1e10);
    }

    // --- FD-DAC campaign: pair activity, medians, Laplace bracket ---
    {
        auto records = montecarlo::run_drops(p, Policy::fd_dac, opt);
        auto summary = montecarlo::summarize(Policy::fd_dac, records);
        rep.both_active_fraction = summary.both_active_fraction;
        rep.sim_median_d2d_fd = summary.median_d2d_rate();
        rep.ana_median_d2d_fd = invert_ccdf(
            [&](double rho) {
                return analytics::fd_d2d_rate_ccdf_bounds(rho, p, k_order).second;
            },
            0.5, 0.0, 1e10);

        auto s_grid = log_grid(1e2, 1e6, 20);
        auto est = montecarlo::empirical_laplace_fd(p, s_grid, n_drops, seed + 1, jobs);
        double violation = -1.0;
        for (std::size_t i = 0; i < s_grid.size(); ++i) {
            auto [lo, up] = analytics::fd_laplace_bounds(s_grid[i], p, k_order);
            double below = (lo - est.ci_half[i]) - est.values[i];
            double above = est.values[i] - (up + est.ci_half[i]);
            violation = std::max(violation, std::max(below, above));
        }
        rep.fd_laplace_violation = violation;
    }

    return rep;
}

struct DelayCrossoverPoint {
    double xi = 0.0;
    double ana_mpc = 0.0, ana_dac = 0.0;
    double sim_mpc = 0.0, sim_dac = 0.0;
    double sim_ci = 0.0;  // combined slack of both empirical quantiles
};

// 90th-percentile delay comparison between MPC and HD-DAC on a xi grid.
inline std::vector<DelayCrossoverPoint> delay_crossover(const SystemParams& table2, long k_cache,
                                                        double delta, double xi_lo, double xi_hi,
                                                        long n_drops, std::uint64_t seed,
                                                        int jobs, int k_order,
                                                        PsiMode mode = PsiMode::random) {
    std::vector<DelayCrossoverPoint> points;
    for (double xi = xi_lo; xi <= xi_hi + 1e-9; xi += 0.1) {
        SystemParams p = table2;
        p.cache_size = k_cache;
        p.delta = delta;
        p.xi = xi;
        validate(p);

        DelayCrossoverPoint pt;
        pt.xi = xi;
        pt.ana_mpc = analytics::delay_percentile(0.9, p, Policy::mpc, k_order, mode);
        pt.ana_dac = analytics::delay_percentile(0.9, p, Policy::hd_dac, k_order, mode);

        montecarlo::CampaignOptions opt;
        opt.n_drops = n_drops;
        opt.master_seed = seed + std::uint64_t(std::lround(xi * 1000));
        opt.jobs = jobs;
        opt.psi_mode = mode;
        auto mpc = montecarlo::run_campaign(p, Policy::mpc, opt);
        auto dac = montecarlo::run_campaign(p, Policy::hd_dac, opt);
        pt.sim_mpc = mpc.delay_quantile(0.9);
        pt.sim_dac = dac.delay_quantile(0.9);
        pt.sim_ci = quantile_ci(mpc.sorted_delays, 0.9) + quantile_ci(dac.sorted_delays, 0.9);
        points.push_back(pt);
    }
    return points;
}

}  // namespace mmcache::validation
