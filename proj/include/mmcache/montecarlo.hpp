#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "mmcache/analytics.hpp"
#include "mmcache/channel.hpp"
#include "mmcache/config.hpp"
#include "mmcache/geometry.hpp"
#include "mmcache/popularity.hpp"
#include "mmcache/rng.hpp"

namespace mmcache::montecarlo {

using analytics::Policy;
using analytics::PsiMode;
using geometry::NetworkDrop;
using geometry::Point2D;
using geometry::TargetRole;

enum class Outcome { hit, d2d, cellular };
enum class PsiState { one, half, fd };

// One simulated snapshot. The outcome fields follow the request branch; the
// diagnostic fields are filled wherever the corresponding link exists (the
// SINRs do not depend on the request, so every drop contributes to the
// SINR/load statistics regardless of outcome).
struct DropRecord {
    Policy policy = Policy::mpc;
    TargetRole role = TargetRole::unpaired;
    Outcome outcome = Outcome::hit;
    double sinr_linear = 0.0;
    long load = 0;
    double rate = 0.0;   // [bit/s]
    double delay = 0.0;  // [s]
    PsiState psi = PsiState::one;

    double cell_snr = 0.0;
    double cell_sinr = 0.0;
    long cell_load = 1;
    double cell_rate = 0.0;
    bool has_d2d = false;
    double d2d_sinr = 0.0;
    double d2d_rate = 0.0;
    double d2d_i_hat = 0.0;  // normalized external D2D interference
    long pairs_total = 0;
    long pairs_both_active = 0;
};

struct CampaignOptions {
    long n_drops = 10000;
    std::uint64_t master_seed = 1;
    int jobs = 1;
    PsiMode psi_mode = PsiMode::random;
    double window_scale = 1.0;  // scales the default window half-width
    std::optional<TargetRole> forced_role;
};

namespace detail {

// Immutable per-campaign context shared by all workers.
struct SimContext {
    SystemParams params;
    Policy policy = Policy::mpc;
    PsiMode psi_mode = PsiMode::random;
    std::optional<TargetRole> forced_role;
    caching::PopularityModel pm;
    std::vector<std::uint8_t> group_of;  // 1-based content rank -> 0 (A) / 1 (B)
    double h_group[2] = {0.0, 0.0};      // cache mass of groups A and B
    double h_mpc = 0.0;
    double h_dac = 0.0;
    double c_unpaired = 1.0;  // probability an unpaired UE stays cellular
    double c_paired = 1.0;
    double n_hat_cell = 0.0;
    double n_hat_d2d = 0.0;
    double si_coeff = 0.0;  // (4 pi / (lambda_c g_ue_max))^2
    double ue_main_half = 0.0;
    double bs_main_half = 0.0;
    double half_width = 0.0;
    double trunc_sq = 0.0;
    double member_cutoff_sq = 0.0;

    bool dac() const { return policy != Policy::mpc; }
    bool fd() const { return policy == Policy::fd_dac; }
};

inline SimContext make_context(const SystemParams& p, Policy policy,
                               const CampaignOptions& opt) {
    SimContext ctx;
    ctx.params = p;
    ctx.policy = policy;
    ctx.psi_mode = opt.psi_mode;
    ctx.forced_role = opt.forced_role;
    ctx.pm = caching::zipf_pmf(p.xi, p.lib_size);
    ctx.h_mpc = caching::h_mpc(p.cache_size, ctx.pm);
    ctx.h_dac = caching::h_dac(p.cache_size, ctx.pm);
    if (policy != Policy::mpc) {
        auto assignment = caching::dac_partition(p.cache_size, ctx.pm);
        ctx.group_of.assign(2 * p.cache_size + 1, 0);
        for (long i : assignment.cache_b) ctx.group_of[i] = 1;
        ctx.h_group[0] = assignment.h_a;
        ctx.h_group[1] = assignment.h_b;
        ctx.c_unpaired = 1.0 - ctx.h_dac;
        ctx.c_paired = std::max(0.0, 1.0 - 2.0 * ctx.h_dac);
    } else {
        ctx.c_unpaired = ctx.c_paired = 1.0 - ctx.h_mpc;
    }
    ctx.n_hat_cell = analytics::cellular_budget(p).n_hat;
    ctx.n_hat_d2d = analytics::d2d_budget(p).n_hat;
    double si_c = 4.0 * M_PI / (p.wavelength() * p.g_ue_max);
    ctx.si_coeff = si_c * si_c;
    ctx.ue_main_half = p.dtheta_ue / 2.0;
    ctx.bs_main_half = p.dtheta_bs / 2.0;
    ctx.half_width = geometry::default_window_half_width(p) * opt.window_scale;
    double trunc = geometry::truncation_radius(p);
    ctx.trunc_sq = trunc * trunc;
    double cutoff = 6.0 * p.r_cell();
    ctx.member_cutoff_sq = cutoff * cutoff;
    return ctx;
}

// Normalized two-end gain of an interfering link: the interferer's boresight
// is uniform, the victim's beam points at `aim`. Each beam's mainlobe covers
// half the beamwidth to either side of boresight.
inline double sample_interferer_gain(const Point2D& tx, const Point2D& aim, double tx_half,
                                     double rx_half, double g_tx_max, double g_tx_min,
                                     double g_rx_max, double g_rx_min, Rng& rng) {
    double tx_dev = rng.uniform(-M_PI, M_PI);
    double g_tx = channel::sector_gain(tx_dev, tx_half, g_tx_max, g_tx_min);
    double rx_dev = std::atan2(tx.y, tx.x) - std::atan2(aim.y, aim.x);
    double g_rx = channel::sector_gain(rx_dev, rx_half, g_rx_max, g_rx_min);
    return g_tx * g_rx / (g_tx_max * g_rx_max);
}

inline double log2_1p(double x) { return std::log1p(x) * (1.0 / M_LN2); }

}  // namespace detail

// Simulates one snapshot: topology, caches, request, and the SINR chains.
inline DropRecord simulate_drop(const detail::SimContext& ctx, Rng& rng) {
    const SystemParams& p = ctx.params;
    DropRecord rec;
    rec.policy = ctx.policy;

    // (1) target role, sampled by the paired fraction unless pinned.
    TargetRole role;
    if (ctx.forced_role) {
        role = *ctx.forced_role;
    } else if (p.delta > 0.0 && rng.uniform() < p.delta) {
        role = rng.bernoulli(0.5) ? TargetRole::paired_a : TargetRole::paired_b;
    } else {
        role = TargetRole::unpaired;
    }
    rec.role = role;

    NetworkDrop drop = geometry::build_drop(p, role, rng, ctx.half_width);

    // (2)-(3) target cache group and request.
    int own_group = 0;
    if (ctx.dac()) {
        switch (role) {
            case TargetRole::paired_a: own_group = 0; break;
            case TargetRole::paired_b: own_group = 1; break;
            default: own_group = rng.bernoulli(0.5) ? 1 : 0;
        }
    }
    long request = ctx.pm.sample(rng);

    // (4) outcome.
    bool paired = role == TargetRole::paired_a || role == TargetRole::paired_b;
    Outcome outcome;
    if (role == TargetRole::cellular_only) {
        outcome = Outcome::cellular;
    } else if (!ctx.dac()) {
        outcome = request <= p.cache_size ? Outcome::hit : Outcome::cellular;
    } else if (request <= 2 * p.cache_size && ctx.group_of[request] == own_group) {
        outcome = Outcome::hit;
    } else if (paired && request <= 2 * p.cache_size) {
        outcome = Outcome::d2d;
    } else {
        outcome = Outcome::cellular;
    }
    rec.outcome = outcome;

    // (5) cellular chain: serving link, full BS interference, TDMA load.
    geometry::NearestBsIndex bs_index(drop.bs, drop.window_half_width,
                                      std::max(1.0, drop.r_cell));
    auto [serving, r_serve] = bs_index.nearest(Point2D{0.0, 0.0});
    {
        bool los = channel::sample_los(r_serve, p.r_los, rng);
        double alpha = los ? p.a_los : p.a_nlos;
        double s_hat = rng.exponential(1.0) * std::pow(r_serve, -alpha);

        double i_hat = 0.0;
        const Point2D aim = drop.bs[serving];
        for (std::size_t b = 0; b < drop.bs.size(); ++b) {
            if (static_cast<long>(b) == serving) continue;
            const Point2D& pos = drop.bs[b];
            double d2 = pos.x * pos.x + pos.y * pos.y;
            if (d2 > ctx.trunc_sq) continue;
            double r = std::sqrt(d2);
            double a = channel::sample_los(r, p.r_los, rng) ? p.a_los : p.a_nlos;
            double g = detail::sample_interferer_gain(pos, aim, ctx.bs_main_half,
                                                      ctx.ue_main_half, p.g_bs_max, p.g_bs_min,
                                                      p.g_ue_max, p.g_ue_min, rng);
            i_hat += g * rng.exponential(1.0) * std::pow(r, -a);
        }
        rec.cell_snr = s_hat / ctx.n_hat_cell;
        rec.cell_sinr = s_hat / (i_hat + ctx.n_hat_cell);

        // Active-cellular load in the serving cell; the target always counts.
        const Point2D serving_pos = drop.bs[serving];
        long members = 1;
        auto consider = [&](const Point2D& ue, double keep_prob) {
            if (geometry::distance_sq(ue, serving_pos) > ctx.member_cutoff_sq) return;
            if (!rng.bernoulli(keep_prob)) return;
            if (bs_index.nearest(ue).first == serving) ++members;
        };
        for (const auto& ue : drop.ue_unpaired) consider(ue, ctx.c_unpaired);
        for (const auto& pair : drop.ue_paired) {
            consider(pair.first, ctx.c_paired);
            consider(pair.second, ctx.c_paired);
        }
        rec.cell_load = members;
        rec.cell_rate = p.bw_cell() / double(members) * detail::log2_1p(rec.cell_sinr);
    }

    // (6) D2D chain for paired DAC targets.
    if (ctx.dac() && paired) {
        rec.has_d2d = true;
        const Point2D peer = *drop.target_peer;
        double r_peer = peer.norm();
        bool los = channel::sample_los(r_peer, p.r_los, rng);
        double alpha = los ? p.a_los : p.a_nlos;
        double s_hat = rng.exponential(1.0) * std::pow(r_peer, -alpha);

        double i_hat = 0.0;
        long both_active = 0;
        for (const auto& pr : drop.ue_paired) {
            // An end transmits to serve its peer's request from its own cache.
            int group_first = rng.bernoulli(0.5) ? 1 : 0;
            double e_first = ctx.h_group[1 - group_first];
            double e_second = ctx.h_group[group_first];
            bool want_first = rng.bernoulli(e_first);    // first's request hits peer cache
            bool want_second = rng.bernoulli(e_second);
            bool tx_first = false, tx_second = false;
            if (ctx.fd()) {
                tx_first = want_second;
                tx_second = want_first;
                if (tx_first && tx_second) ++both_active;
            } else {
                if (want_first && want_second) {
                    if (rng.bernoulli(0.5)) tx_second = true; else tx_first = true;
                } else if (want_first) {
                    tx_second = true;
                } else if (want_second) {
                    tx_first = true;
                }
            }
            rec.pairs_total += 1;
            auto add_interferer = [&](const Point2D& pos) {
                double d2 = pos.x * pos.x + pos.y * pos.y;
                if (d2 > ctx.trunc_sq) return;
                double r = std::sqrt(d2);
                double a = channel::sample_los(r, p.r_los, rng) ? p.a_los : p.a_nlos;
                double g = detail::sample_interferer_gain(
                    pos, peer, ctx.ue_main_half, ctx.ue_main_half, p.g_ue_max, p.g_ue_min,
                    p.g_ue_max, p.g_ue_min, rng);
                i_hat += g * rng.exponential(1.0) * std::pow(r, -a);
            };
            if (tx_first) add_interferer(pr.first);
            if (tx_second) add_interferer(pr.second);
        }
        rec.pairs_both_active = both_active;
        rec.d2d_i_hat = i_hat;

        if (ctx.fd()) {
            double i_si = ctx.si_coeff * rng.exponential(p.kappa_si);
            rec.d2d_sinr = s_hat / (i_hat + i_si + ctx.n_hat_d2d);
            rec.psi = PsiState::fd;
            rec.d2d_rate = p.bw_d2d() * detail::log2_1p(rec.d2d_sinr);
        } else {
            rec.d2d_sinr = s_hat / (i_hat + ctx.n_hat_d2d);
            double psi = 1.0;
            switch (ctx.psi_mode) {
                case PsiMode::half: psi = 0.5; break;
                case PsiMode::one: psi = 1.0; break;
                case PsiMode::random: {
                    long peer_request = ctx.pm.sample(rng);
                    bool peer_wants = peer_request <= 2 * p.cache_size &&
                                      ctx.group_of[peer_request] == own_group;
                    psi = peer_wants ? 0.5 : 1.0;
                    break;
                }
            }
            rec.psi = psi == 0.5 ? PsiState::half : PsiState::one;
            rec.d2d_rate = psi * p.bw_d2d() * detail::log2_1p(rec.d2d_sinr);
        }
    }

    // (7) outcome rate and delay.
    switch (outcome) {
        case Outcome::hit:
            break;  // zero-delay local retrieval
        case Outcome::cellular:
            rec.sinr_linear = rec.cell_sinr;
            rec.load = rec.cell_load;
            rec.rate = rec.cell_rate;
            rec.delay = p.sigma_file / rec.rate;
            break;
        case Outcome::d2d:
            rec.sinr_linear = rec.d2d_sinr;
            rec.rate = rec.d2d_rate;
            rec.delay = p.sigma_file / rec.rate;
            break;
    }
    return rec;
}

// Spec-facing convenience: single drop from a caller-provided stream.
inline DropRecord simulate_drop(const SystemParams& p, Policy policy, PsiMode psi_mode,
                                Rng& rng) {
    CampaignOptions opt;
    opt.psi_mode = psi_mode;
    auto ctx = detail::make_context(p, policy, opt);
    return simulate_drop(ctx, rng);
}

inline std::vector<double> rate_grid() {
    std::vector<double> g(201);
    g[0] = 0.0;
    for (int i = 1; i <= 200; ++i) g[i] = std::pow(10.0, 7.0 + 3.0 * (i - 1) / 199.0);
    return g;
}

inline std::vector<double> delay_grid() {
    std::vector<double> g(201);
    for (int i = 0; i <= 200; ++i) g[i] = std::pow(10.0, -3.0 + 4.0 * i / 200.0);
    return g;
}

// Aggregated campaign result. Sorted sample vectors stay available for
// quantiles; the fixed-grid curves mirror what the CSV outputs carry.
struct SimulationSummary {
    Policy policy = Policy::mpc;
    long n_drops = 0;
    long n_hit = 0, n_d2d = 0, n_cellular = 0;
    double offloading_fraction = 0.0;
    double offloading_ci = 0.0;

    std::vector<double> rate_points;
    std::vector<double> cell_rate_ccdf;
    std::vector<double> cell_rate_ci;
    std::vector<double> d2d_rate_ccdf;  // over paired drops; empty for MPC
    std::vector<double> d2d_rate_ci;
    std::vector<double> delay_points;
    std::vector<double> delay_cdf;  // total delay, hits included
    std::vector<double> delay_cdf_ci;

    std::vector<double> load_pmf;       // index n-1 -> empirical P(N_cell = n)
    double noise_limited_gap = 0.0;     // sup |CCDF_sinr - CCDF_snr|
    double both_active_fraction = 0.0;  // FD only
    long pair_observations = 0;

    std::vector<double> sorted_cell_rates;
    std::vector<double> sorted_d2d_rates;
    std::vector<double> sorted_delays;

    double median_cell_rate() const { return quantile(sorted_cell_rates, 0.5); }
    double median_d2d_rate() const { return quantile(sorted_d2d_rates, 0.5); }
    double delay_quantile(double q) const { return quantile(sorted_delays, q); }

    static double quantile(const std::vector<double>& sorted, double q) {
        if (sorted.empty()) return 0.0;
        double pos = q * double(sorted.size() - 1);
        std::size_t lo = static_cast<std::size_t>(pos);
        std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        double frac = pos - double(lo);
        return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
    }
};

namespace detail {

inline std::vector<double> empirical_ccdf(const std::vector<double>& sorted,
                                          const std::vector<double>& grid) {
    std::vector<double> out(grid.size(), 0.0);
    if (sorted.empty()) return out;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        auto it = std::upper_bound(sorted.begin(), sorted.end(), grid[i]);
        out[i] = double(sorted.end() - it) / double(sorted.size());
    }
    return out;
}

inline std::vector<double> binomial_ci(const std::vector<double>& probs, std::size_t n) {
    std::vector<double> ci(probs.size(), 0.0);
    if (n == 0) return ci;
    for (std::size_t i = 0; i < probs.size(); ++i)
        ci[i] = 1.96 * std::sqrt(probs[i] * (1.0 - probs[i]) / double(n));
    return ci;
}

}  // namespace detail

// Runs n_drops independent drops with per-drop derived seeds. Workers fill
// disjoint slots of the record vector, so the result is identical for any
// parallelism level.
inline std::vector<DropRecord> run_drops(const SystemParams& p, Policy policy,
                                         const CampaignOptions& opt) {
    auto ctx = detail::make_context(p, policy, opt);
    std::vector<DropRecord> records(opt.n_drops);
    auto work = [&](long i) {
        Rng rng = Rng::derive(opt.master_seed, static_cast<std::uint64_t>(i));
        records[i] = simulate_drop(ctx, rng);
    };
    int jobs = std::max(1, opt.jobs);
    if (jobs == 1) {
        for (long i = 0; i < opt.n_drops; ++i) work(i);
        return records;
    }
    std::atomic<long> next{0};
    const long chunk = 256;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int t = 0; t < jobs; ++t) {
        workers.emplace_back([&]() {
            for (;;) {
                long lo = next.fetch_add(chunk);
                if (lo >= opt.n_drops) break;
                long hi = std::min(lo + chunk, opt.n_drops);
                for (long i = lo; i < hi; ++i) work(i);
            }
        });
    }
    for (auto& w : workers) w.join();
    return records;
}

inline SimulationSummary summarize(Policy policy, const std::vector<DropRecord>& records) {
    SimulationSummary s;
    s.policy = policy;
    s.n_drops = static_cast<long>(records.size());

    std::vector<double> delays, cell_rates, d2d_rates, cell_sinrs, cell_snrs;
    delays.reserve(records.size());
    cell_rates.reserve(records.size());
    cell_sinrs.reserve(records.size());
    cell_snrs.reserve(records.size());
    std::vector<long> loads;
    loads.reserve(records.size());
    long both = 0, pairs = 0;

    for (const auto& r : records) {
        switch (r.outcome) {
            case Outcome::hit: ++s.n_hit; break;
            case Outcome::d2d: ++s.n_d2d; break;
            case Outcome::cellular: ++s.n_cellular; break;
        }
        delays.push_back(r.delay);
        cell_rates.push_back(r.cell_rate);
        cell_sinrs.push_back(r.cell_sinr);
        cell_snrs.push_back(r.cell_snr);
        loads.push_back(r.cell_load);
        if (r.has_d2d) d2d_rates.push_back(r.d2d_rate);
        both += r.pairs_both_active;
        pairs += r.pairs_total;
    }

    long n = std::max<long>(1, s.n_drops);
    s.offloading_fraction = double(s.n_hit + s.n_d2d) / double(n);
    s.offloading_ci =
        1.96 * std::sqrt(s.offloading_fraction * (1.0 - s.offloading_fraction) / double(n));

    std::sort(delays.begin(), delays.end());
    std::sort(cell_rates.begin(), cell_rates.end());
    std::sort(d2d_rates.begin(), d2d_rates.end());

    s.rate_points = rate_grid();
    s.cell_rate_ccdf = detail::empirical_ccdf(cell_rates, s.rate_points);
    s.cell_rate_ci = detail::binomial_ci(s.cell_rate_ccdf, cell_rates.size());
    s.d2d_rate_ccdf = detail::empirical_ccdf(d2d_rates, s.rate_points);
    s.d2d_rate_ci = detail::binomial_ci(s.d2d_rate_ccdf, d2d_rates.size());

    s.delay_points = delay_grid();
    std::vector<double> delay_ccdf = detail::empirical_ccdf(delays, s.delay_points);
    s.delay_cdf.resize(delay_ccdf.size());
    for (std::size_t i = 0; i < delay_ccdf.size(); ++i) s.delay_cdf[i] = 1.0 - delay_ccdf[i];
    s.delay_cdf_ci = detail::binomial_ci(s.delay_cdf, delays.size());

    long max_load = 1;
    for (long l : loads) max_load = std::max(max_load, l);
    s.load_pmf.assign(max_load, 0.0);
    for (long l : loads) s.load_pmf[l - 1] += 1.0 / double(loads.size());

    std::sort(cell_sinrs.begin(), cell_sinrs.end());
    std::sort(cell_snrs.begin(), cell_snrs.end());
    double gap = 0.0;
    for (double t_db = -10.0; t_db <= 40.0; t_db += 0.5) {
        double t = db_to_linear(t_db);
        auto above = [&](const std::vector<double>& v) {
            return double(v.end() - std::upper_bound(v.begin(), v.end(), t)) /
                   double(std::max<std::size_t>(1, v.size()));
        };
        gap = std::max(gap, std::fabs(above(cell_sinrs) - above(cell_snrs)));
    }
    s.noise_limited_gap = gap;

    s.pair_observations = pairs;
    s.both_active_fraction = pairs > 0 ? double(both) / double(pairs) : 0.0;

    s.sorted_cell_rates = std::move(cell_rates);
    s.sorted_d2d_rates = std::move(d2d_rates);
    s.sorted_delays = std::move(delays);
    return s;
}

inline SimulationSummary run_campaign(const SystemParams& p, Policy policy,
                                      const CampaignOptions& opt) {
    return summarize(policy, run_drops(p, policy, opt));
}

// Monte-Carlo estimate of the FD interference Laplace transform with the true
// dependent pair processes (the oracle bracketed by the analytic bounds).
struct LaplaceEstimate {
    std::vector<double> s_grid;
    std::vector<double> values;
    std::vector<double> ci_half;  // 95%
};

inline LaplaceEstimate empirical_laplace_fd(const SystemParams& p,
                                            const std::vector<double>& s_grid, long n_drops,
                                            std::uint64_t master_seed, int jobs = 1) {
    CampaignOptions opt;
    opt.n_drops = n_drops;
    opt.master_seed = master_seed;
    opt.jobs = jobs;
    opt.forced_role = TargetRole::paired_b;
    auto records = run_drops(p, Policy::fd_dac, opt);

    LaplaceEstimate est;
    est.s_grid = s_grid;
    est.values.assign(s_grid.size(), 0.0);
    est.ci_half.assign(s_grid.size(), 0.0);
    std::vector<double> sq(s_grid.size(), 0.0);
    for (const auto& r : records) {
        for (std::size_t k = 0; k < s_grid.size(); ++k) {
            double v = std::exp(-r.d2d_i_hat * s_grid[k]);
            est.values[k] += v;
            sq[k] += v * v;
        }
    }
    double n = double(std::max<long>(1, n_drops));
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        est.values[k] /= n;
        double var = std::max(0.0, sq[k] / n - est.values[k] * est.values[k]);
        est.ci_half[k] = 1.96 * std::sqrt(var / n);
    }
    return est;
}

// Raw-record dump: one row per drop; zero placeholders on hit rows.
inline void dump_records_csv(const std::vector<DropRecord>& records, std::ostream& out) {
    out << "drop_id,policy,mode,role,outcome,sinr_db,load,rate_bps,delay_s,psi\n";
    char buf[160];
    auto role_name = [](TargetRole r) {
        switch (r) {
            case TargetRole::unpaired: return "unpaired";
            case TargetRole::paired_a: return "paired_A";
            case TargetRole::paired_b: return "paired_B";
            default: return "cellular_only";
        }
    };
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        const char* policy = r.policy == Policy::mpc ? "mpc" : "dac";
        const char* mode = r.policy == Policy::fd_dac ? "fd" : "hd";
        const char* outcome = r.outcome == Outcome::hit
                                  ? "hit"
                                  : (r.outcome == Outcome::d2d ? "d2d" : "cellular");
        const char* psi =
            r.psi == PsiState::fd ? "fd" : (r.psi == PsiState::half ? "0.5" : "1");
        double sinr_db = r.outcome == Outcome::hit ? 0.0 : linear_to_db(r.sinr_linear);
        std::snprintf(buf, sizeof buf, "%zu,%s,%s,%s,%s,%.10g,%ld,%.10g,%.10g,%s\n", i, policy,
                      mode, role_name(r.role), outcome, sinr_db, r.load, r.rate, r.delay, psi);
        out << buf;
    }
}

}  // namespace mmcache::montecarlo
