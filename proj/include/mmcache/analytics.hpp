#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mmcache/channel.hpp"
#include "mmcache/config.hpp"
#include "mmcache/popularity.hpp"
#include "mmcache/specfun.hpp"

namespace mmcache::analytics {

enum class Policy { mpc, hd_dac, fd_dac };

inline caching::Scheme scheme_of(Policy p) {
    return p == Policy::mpc ? caching::Scheme::mpc : caching::Scheme::dac;
}

// How the half-duplex rate penalty enters the averaged D2D rate CCDF. The
// random mode draws psi = 1/2 exactly when the peer holds a simultaneous
// serviceable request (probability h_dac); the forced modes pin psi.
enum class PsiMode { random, half, one };

struct NormalizedBudget {
    double n_hat = 0.0;
    enum class Context { cellular, d2d } context = Context::cellular;
};

inline NormalizedBudget cellular_budget(const SystemParams& p) {
    double c = 4.0 * M_PI / p.wavelength();
    return {c * c * p.n0 * p.f_n * p.bw_cell() / (p.p_bs * p.g_bs_max * p.g_ue_max),
            NormalizedBudget::Context::cellular};
}

inline NormalizedBudget d2d_budget(const SystemParams& p) {
    double c = 4.0 * M_PI / p.wavelength();
    return {c * c * p.n0 * p.f_n * p.bw_d2d() / (p.p_ue * p.g_ue_max * p.g_ue_max),
            NormalizedBudget::Context::d2d};
}

// A CCDF/CDF sampled on a grid, optionally with lower/upper companion values.
struct DistributionEstimate {
    enum class Kind { ccdf, cdf };

    std::vector<double> grid;
    std::vector<double> values;
    Kind kind = Kind::ccdf;
    std::optional<std::pair<std::vector<double>, std::vector<double>>> bounds;

    DistributionEstimate(std::vector<double> g, std::vector<double> v, Kind k,
                         std::optional<std::pair<std::vector<double>, std::vector<double>>> b =
                             std::nullopt)
        : grid(std::move(g)), values(std::move(v)), kind(k), bounds(std::move(b)) {
        check(values);
        if (bounds) {
            check(bounds->first);
            check(bounds->second);
            for (std::size_t i = 0; i < grid.size(); ++i)
                if (bounds->first[i] > bounds->second[i] + 1e-9)
                    throw std::logic_error("DistributionEstimate: lower above upper");
        }
    }

private:
    void check(std::vector<double>& v) const {
        if (v.size() != grid.size())
            throw std::logic_error("DistributionEstimate: size mismatch");
        double prev = kind == Kind::ccdf ? 1.0 : 0.0;
        for (double& x : v) {
            if (x < -1e-9 || x > 1.0 + 1e-9)
                throw std::logic_error("DistributionEstimate: value outside [0,1]");
            x = std::clamp(x, 0.0, 1.0);
            bool ok = kind == Kind::ccdf ? x <= prev + 1e-9 : x >= prev - 1e-9;
            if (!ok) throw std::logic_error("DistributionEstimate: not monotone");
            x = kind == Kind::ccdf ? std::min(x, prev) : std::max(x, prev);
            prev = x;
        }
    }
};

// Density of active cellular UEs after the policy's caching offload.
// The DAC paired term 1 - 2 h_dac is clamped at zero where the policy
// offloads more than everything (possible at large xi).
inline double lambda_cell(const SystemParams& p, Policy policy) {
    auto pm = caching::zipf_pmf(p.xi, p.lib_size);
    double c_u, c_p;
    if (policy == Policy::mpc) {
        double h = caching::h_mpc(p.cache_size, pm);
        c_u = c_p = 1.0 - h;
    } else {
        double h = caching::h_dac(p.cache_size, pm);
        c_u = 1.0 - h;
        c_p = std::max(0.0, 1.0 - 2.0 * h);
    }
    return ((1.0 - p.delta) * c_u + p.delta * c_p) * p.lambda_ue;
}

inline bool dac_load_clamped(const SystemParams& p) {
    auto pm = caching::zipf_pmf(p.xi, p.lib_size);
    return 2.0 * caching::h_dac(p.cache_size, pm) > 1.0;
}

// Gamma-Poisson mixture for the load of the probe's (size-biased) cell.
inline double cell_load_pmf(double lambda_cell_, double lambda_bs, long n) {
    if (n < 1) throw std::domain_error("cell_load_pmf: n must be >= 1");
    if (lambda_cell_ < 0.0 || lambda_bs <= 0.0)
        throw std::domain_error("cell_load_pmf: bad densities");
    const double kappa = 3.5;
    const double mu = lambda_cell_ / (kappa * lambda_bs + lambda_cell_);
    if (mu == 0.0) return n == 1 ? 1.0 : 0.0;
    double log_pmf = specfun::lgamma_pos(n + kappa) - specfun::lgamma_pos(kappa + 1.0) -
                     specfun::lgamma_pos(double(n)) + (n - 1) * std::log(mu) +
                     (kappa + 1.0) * std::log1p(-mu);
    return std::exp(log_pmf);
}

namespace detail {

struct Prop3Constants {
    double r1;
    double r2;
    double r_cell;
};

inline Prop3Constants prop3_constants(const SystemParams& p) {
    const double rc = p.r_cell();
    const double x = rc / (2.0 * p.r_los);
    double r2 = std::sqrt(6.0) *
                std::sqrt(1.0 - std::sqrt(M_PI) * x * std::exp(x * x) * specfun::erfc(x)) * rc;
    return {std::sqrt(3.0) * rc, r2, rc};
}

// J1: linear-cutoff approximation of the Rayleigh-weighted pathloss integral.
inline double prop3_j1(double u, double a, double r1, double r_cell) {
    double x = u * std::pow(r1, a);
    double g2 = specfun::lower_incomplete_gamma(2.0 / a, x);
    double g3 = specfun::lower_incomplete_gamma(3.0 / a, x);
    return 2.0 / (a * r_cell * r_cell) *
           (g2 / std::pow(u, 2.0 / a) - g3 / (r1 * std::pow(u, 3.0 / a)));
}

// J2: quadratic-cutoff approximation of the blockage-weighted integral.
inline double prop3_j2(double u, double a, double r2, double r_cell) {
    double x = u * std::pow(r2, a);
    double g2 = specfun::lower_incomplete_gamma(2.0 / a, x);
    double g3 = specfun::lower_incomplete_gamma(3.0 / a, x);
    double g4 = specfun::lower_incomplete_gamma(4.0 / a, x);
    return 2.0 / (a * r_cell * r_cell) *
           (g2 / std::pow(u, 2.0 / a) - 2.0 * g3 / (r2 * std::pow(u, 3.0 / a)) +
            g4 / (r2 * r2 * std::pow(u, 4.0 / a)));
}

}  // namespace detail

// CCDF of the cellular SINR in the noise-limited regime (the closed-form
// approximation; the calibration radii make it exact at T = 0).
inline double cellular_sinr_ccdf(double threshold, const SystemParams& p,
                                 const NormalizedBudget& budget) {
    if (threshold < 0.0) throw std::domain_error("cellular_sinr_ccdf: negative threshold");
    if (threshold == 0.0) return 1.0;
    const double u = budget.n_hat * threshold;
    if (!std::isfinite(u)) return 0.0;
    auto c = detail::prop3_constants(p);
    double value = detail::prop3_j1(u, p.a_nlos, c.r1, c.r_cell) +
                   detail::prop3_j2(u, p.a_los, c.r2, c.r_cell) -
                   detail::prop3_j2(u, p.a_nlos, c.r2, c.r_cell);
    return std::clamp(value, 0.0, 1.0);
}

// CCDF of the cellular rate: load-mixture over the SINR CCDF, with the load
// treated as independent of the SINR. The infinite sum stops once the
// remaining pmf mass is below 1e-8 (or at n = 10^4).
inline double cellular_rate_ccdf(double rate, const SystemParams& p, Policy policy) {
    if (rate < 0.0) throw std::domain_error("cellular_rate_ccdf: negative rate");
    if (rate == 0.0) return 1.0;
    const double lc = lambda_cell(p, policy);
    const auto budget = cellular_budget(p);
    const double bw = p.bw_cell();

    double total = 0.0;
    double mass = 0.0;
    for (long n = 1; n <= 10000; ++n) {
        double pmf = cell_load_pmf(lc, p.lambda_bs, n);
        mass += pmf;
        double exponent = rate * double(n) / bw;
        double ccdf = 0.0;
        if (exponent < 1020.0) {
            double threshold = std::exp2(exponent) - 1.0;
            ccdf = cellular_sinr_ccdf(threshold, p, budget);
        }
        total += pmf * ccdf;
        if (mass > 1.0 - 1e-8) break;
        if (ccdf < 1e-14 && n > 1) break;  // SINR tail exhausted; later n only smaller
    }
    return std::clamp(total, 0.0, 1.0);
}

namespace detail {

// Per-(params, k) context for the D2D interference Laplace transforms:
// the gain mixture, the J3 constant, and the J4 coefficient tables.
struct D2dLaplaceContext {
    double r4;
    double j3_const_nlos;  // (1/2) Gamma(1-2/a_N) Gamma(1+2/a_N)
    double a_los, a_nlos;
    int order;
    channel::GainMixture mixture;
    std::vector<double> binom_sign;  // (-1)^l C(k,l)

    // E_g over the mixture of J3(s, a_N) + J4(s, a_N) - J4(s, a_L).
    double expected_exponent_terms(double s) const {
        double acc = 0.0;
        for (std::size_t gi = 0; gi < mixture.values.size(); ++gi) {
            double g = mixture.values[gi];
            double j3 = j3_const_nlos * std::pow(g * s, 2.0 / a_nlos);
            acc += mixture.probs[gi] * (j3 + j4(s, a_nlos, g) - j4(s, a_los, g));
        }
        return acc;
    }

    double j4(double s, double a, double g) const {
        double gs = g * s;
        double ra = std::pow(r4, a);
        double lead = std::pow(r4, a + 2.0) / gs;
        double sum = 0.0;
        for (int l = 0; l <= order; ++l) {
            double b = 1.0 + (l + 2.0) / a;
            double z = ra / gs;
            double f;
            if ((b - 1.0) * std::log(z) > 34.0) {
                f = b / ((b - 1.0) * z);  // deep asymptote; relative error < 1e-14
            } else {
                f = specfun::hyp2f1_special(b, z);
            }
            sum += binom_sign[l] * f / (l + a + 2.0);
        }
        return lead * sum;
    }
};

inline D2dLaplaceContext make_d2d_context(const SystemParams& p, int k) {
    if (k < 0) throw std::domain_error("d2d laplace: approximation order must be >= 0");
    if (p.a_nlos <= 2.0)
        throw std::domain_error("d2d laplace: a_nlos must exceed 2 (interference diverges)");
    D2dLaplaceContext ctx;
    ctx.r4 = std::sqrt(double(k + 1) * double(k + 2)) * p.r_los;
    ctx.j3_const_nlos = 0.5 * std::tgamma(1.0 - 2.0 / p.a_nlos) * std::tgamma(1.0 + 2.0 / p.a_nlos);
    ctx.a_los = p.a_los;
    ctx.a_nlos = p.a_nlos;
    ctx.order = k;
    ctx.mixture = channel::interferer_gain_mixture(p.dtheta_ue, p.g_ue_max, p.g_ue_min);
    ctx.binom_sign.resize(k + 1);
    double c = 1.0;
    for (int l = 0; l <= k; ++l) {
        ctx.binom_sign[l] = (l % 2 == 0 ? c : -c);
        c = c * double(k - l) / double(l + 1);
    }
    return ctx;
}

inline double h_dac_of(const SystemParams& p) {
    auto pm = caching::zipf_pmf(p.xi, p.lib_size);
    return caching::h_dac(p.cache_size, pm);
}

}  // namespace detail

// Laplace transform of the D2D interference under HD-DAC (PGFL of the
// thinned pair process, k-th order blockage approximation).
inline double hd_laplace(double s, const SystemParams& p, int k) {
    if (s < 0.0) throw std::domain_error("hd_laplace: s must be >= 0");
    if (s == 0.0) return 1.0;
    auto ctx = detail::make_d2d_context(p, k);
    double h = detail::h_dac_of(p);
    double exponent =
        M_PI * p.delta * h * (2.0 - h) * p.lambda_ue * ctx.expected_exponent_terms(s);
    return std::exp(-exponent);
}

// Laplace transform of the residual self-interference. The SI channel gain
// has mean kappa_si (the simulator samples it that way), so the transform is
// 1 / (1 + (4 pi / (lambda_c G_ue_max))^2 kappa_si s). See README for the
// orientation note on the kappa_si factor.
inline double si_laplace(double s, const SystemParams& p) {
    if (s < 0.0) throw std::domain_error("si_laplace: s must be >= 0");
    double c = 4.0 * M_PI / (p.wavelength() * p.g_ue_max);
    return 1.0 / (1.0 + c * c * p.kappa_si * s);
}

// FKG lower / Cauchy-Schwarz upper bounds for the FD-DAC interference
// Laplace transform (the two pair processes are dependent).
inline std::pair<double, double> fd_laplace_bounds(double s, const SystemParams& p, int k) {
    if (s < 0.0) throw std::domain_error("fd_laplace_bounds: s must be >= 0");
    if (s == 0.0) return {1.0, 1.0};
    auto ctx = detail::make_d2d_context(p, k);
    double h = detail::h_dac_of(p);
    double base = M_PI * p.delta * p.lambda_ue * h;
    double lower = std::exp(-base * 2.0 * ctx.expected_exponent_terms(s));
    double upper = std::exp(-base * ctx.expected_exponent_terms(2.0 * s));
    return {lower, upper};
}

namespace detail {

// Expectation over the pair distance (density 2r/r_max^2) and the LOS state
// of f(s, n_hat_s_argument) evaluated at s = T r^a per branch.
template <typename F>
double expect_over_pair_link(double threshold, const SystemParams& p, F&& laplace_times_noise) {
    static thread_local std::vector<std::pair<double, double>> cache_nodes;
    auto rule = specfun::gauss_legendre(64, 0.0, p.r_d2d_max);
    const double inv_sq = 2.0 / (p.r_d2d_max * p.r_d2d_max);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        double r = rule.nodes[i];
        double w = rule.weights[i] * inv_sq * r;
        double pl = channel::p_los(r, p.r_los);
        double s_los = threshold * std::pow(r, p.a_los);
        double s_nlos = threshold * std::pow(r, p.a_nlos);
        acc += w * (pl * laplace_times_noise(s_los) + (1.0 - pl) * laplace_times_noise(s_nlos));
    }
    return acc;
}

}  // namespace detail

// CCDF of the HD-DAC D2D SINR: expectation of the interference Laplace
// transform times the noise factor over pair distance and LOS state.
inline double hd_d2d_sinr_ccdf(double threshold, const SystemParams& p, int k) {
    if (threshold < 0.0) throw std::domain_error("hd_d2d_sinr_ccdf: negative threshold");
    if (threshold == 0.0) return 1.0;
    auto ctx = detail::make_d2d_context(p, k);
    double h = detail::h_dac_of(p);
    double coeff = M_PI * p.delta * h * (2.0 - h) * p.lambda_ue;
    double n_hat = d2d_budget(p).n_hat;
    double value = detail::expect_over_pair_link(threshold, p, [&](double s) {
        return std::exp(-coeff * ctx.expected_exponent_terms(s) - n_hat * s);
    });
    return std::clamp(value, 0.0, 1.0);
}

// CCDF of the HD-DAC D2D rate. The HD factor either halves the bandwidth
// (simultaneous peer request) or not, mixed per the chosen mode.
inline double hd_d2d_rate_ccdf(double rate, const SystemParams& p, int k,
                               PsiMode mode = PsiMode::random) {
    if (rate < 0.0) throw std::domain_error("hd_d2d_rate_ccdf: negative rate");
    if (rate == 0.0) return 1.0;
    const double bw = p.bw_d2d();
    auto ccdf_at_psi = [&](double psi) {
        double exponent = rate / (psi * bw);
        if (exponent > 1020.0) return 0.0;
        return hd_d2d_sinr_ccdf(std::exp2(exponent) - 1.0, p, k);
    };
    switch (mode) {
        case PsiMode::half: return ccdf_at_psi(0.5);
        case PsiMode::one: return ccdf_at_psi(1.0);
        case PsiMode::random: break;
    }
    double h = detail::h_dac_of(p);
    return h * ccdf_at_psi(0.5) + (1.0 - h) * ccdf_at_psi(1.0);
}

// Bounds on the CCDF of the FD-DAC D2D rate (no HD factor; SI included).
inline std::pair<double, double> fd_d2d_rate_ccdf_bounds(double rate, const SystemParams& p,
                                                         int k) {
    if (rate < 0.0) throw std::domain_error("fd_d2d_rate_ccdf_bounds: negative rate");
    if (rate == 0.0) return {1.0, 1.0};
    double exponent = rate / p.bw_d2d();
    if (exponent > 1020.0) return {0.0, 0.0};
    const double threshold = std::exp2(exponent) - 1.0;

    auto ctx = detail::make_d2d_context(p, k);
    double h = detail::h_dac_of(p);
    double base = M_PI * p.delta * p.lambda_ue * h;
    double n_hat = d2d_budget(p).n_hat;
    double si_c = 4.0 * M_PI / (p.wavelength() * p.g_ue_max);
    double si_cc = si_c * si_c * p.kappa_si;

    double lower = detail::expect_over_pair_link(threshold, p, [&](double s) {
        return std::exp(-base * 2.0 * ctx.expected_exponent_terms(s) - n_hat * s) /
               (1.0 + si_cc * s);
    });
    double upper = detail::expect_over_pair_link(threshold, p, [&](double s) {
        return std::exp(-base * ctx.expected_exponent_terms(2.0 * s) - n_hat * s) /
               (1.0 + si_cc * s);
    });
    return {std::clamp(lower, 0.0, 1.0), std::clamp(upper, 0.0, 1.0)};
}

// CDF of the content retrieval delay: point mass at zero for cache hits plus
// the transmission-delay terms. FD uses the upper Laplace bound.
inline double delay_cdf(double d, const SystemParams& p, Policy policy, int k,
                        PsiMode mode = PsiMode::random) {
    if (d <= 0.0) return 0.0;
    const double needed_rate = p.sigma_file / d;
    auto pm = caching::zipf_pmf(p.xi, p.lib_size);
    if (policy == Policy::mpc) {
        double h = caching::h_mpc(p.cache_size, pm);
        return h + (1.0 - h) * cellular_rate_ccdf(needed_rate, p, policy);
    }
    double h = caching::h_dac(p.cache_size, pm);
    double d2d_ccdf = policy == Policy::hd_dac
                          ? hd_d2d_rate_ccdf(needed_rate, p, k, mode)
                          : fd_d2d_rate_ccdf_bounds(needed_rate, p, k).second;
    double cell_ccdf = cellular_rate_ccdf(needed_rate, p, policy);
    return h + p.delta * h * d2d_ccdf + (1.0 - h - p.delta * h) * cell_ccdf;
}

// Smallest d with P(D < d) >= level, to 1e-4 relative; zero when the hit mass
// already covers the level.
inline double delay_percentile(double level, const SystemParams& p, Policy policy, int k,
                               PsiMode mode = PsiMode::random) {
    if (level <= 0.0 || level >= 1.0)
        throw std::domain_error("delay_percentile: level must be in (0, 1)");
    auto pm = caching::zipf_pmf(p.xi, p.lib_size);
    double hit_mass = policy == Policy::mpc ? caching::h_mpc(p.cache_size, pm)
                                            : caching::h_dac(p.cache_size, pm);
    if (hit_mass >= level) return 0.0;

    double lo = 0.0;
    double hi = 1e-3;
    while (delay_cdf(hi, p, policy, k, mode) < level) {
        hi *= 2.0;
        if (hi > 1e9) return hi;  // level unreachable in any practical horizon
    }
    while (hi - lo > 1e-4 * hi) {
        double mid = 0.5 * (lo + hi);
        if (delay_cdf(mid, p, policy, k, mode) >= level)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

}  // namespace mmcache::analytics
