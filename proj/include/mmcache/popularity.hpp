#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mmcache/rng.hpp"

namespace mmcache::caching {

enum class Scheme { mpc, dac };

// Zipf request model over a ranked library: q_i = i^{-xi} / sum_j j^{-xi}.
struct PopularityModel {
    long lib_size = 0;
    double xi = 0.0;
    std::vector<double> pmf;  // q_1..q_L
    std::vector<double> cdf;  // running sums, cdf.back() == 1

    // Inverse-transform sample of a 1-based content rank.
    long sample(Rng& rng) const {
        double u = rng.uniform();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        return static_cast<long>(it - cdf.begin()) + 1;
    }
};

inline PopularityModel zipf_pmf(double xi, long lib_size) {
    if (xi < 0.0) throw std::domain_error("zipf_pmf: xi must be >= 0");
    if (lib_size < 1) throw std::domain_error("zipf_pmf: library must be non-empty");
    PopularityModel pm;
    pm.lib_size = lib_size;
    pm.xi = xi;
    pm.pmf.resize(lib_size);
    for (long i = 1; i <= lib_size; ++i) pm.pmf[i - 1] = std::pow(double(i), -xi);
    double total = 0.0;
    for (long i = lib_size - 1; i >= 0; --i) total += pm.pmf[i];  // small terms first
    pm.cdf.resize(lib_size);
    double run = 0.0;
    for (long i = 0; i < lib_size; ++i) {
        pm.pmf[i] /= total;
        run += pm.pmf[i];
        pm.cdf[i] = run;
    }
    pm.cdf.back() = 1.0;
    return pm;
}

// Probability that a request falls inside `cache` (1-based ranks).
inline double hit_probability(const std::vector<long>& cache, const PopularityModel& pm) {
    double h = 0.0;
    for (long idx : cache) {
        if (idx < 1 || idx > pm.lib_size)
            throw std::domain_error("hit_probability: content rank out of range");
        h += pm.pmf[idx - 1];
    }
    return h;
}

inline double h_mpc(long cache_size, const PopularityModel& pm) {
    if (cache_size < 0 || cache_size > pm.lib_size)
        throw std::domain_error("h_mpc: cache size out of range");
    double h = 0.0;
    for (long i = cache_size; i >= 1; --i) h += pm.pmf[i - 1];
    return h;
}

// Half the mass of the 2K most popular contents (the h_A ~ h_B ~ h_dac level).
inline double h_dac(long cache_size, const PopularityModel& pm) {
    if (2 * cache_size > pm.lib_size)
        throw std::domain_error("h_dac: need 2K <= L");
    return 0.5 * h_mpc(2 * cache_size, pm);
}

// Caches of a D2D pair. For DAC, cache_a and cache_b partition {1..2K} and
// exchange works because the sets are disjoint: e_a = h_b, e_b = h_a.
struct CacheAssignment {
    Scheme kind = Scheme::mpc;
    std::vector<long> cache_a;
    std::vector<long> cache_b;
    double h_a = 0.0;
    double h_b = 0.0;
    double e_a = 0.0;
    double e_b = 0.0;
};

inline CacheAssignment mpc_assignment(long cache_size, const PopularityModel& pm) {
    CacheAssignment ca;
    ca.kind = Scheme::mpc;
    ca.cache_a.resize(cache_size);
    for (long i = 0; i < cache_size; ++i) ca.cache_a[i] = i + 1;
    ca.h_a = ca.h_b = h_mpc(cache_size, pm);
    return ca;
}

namespace detail {

// Greedy descending: each content goes to the group with less mass so far,
// ties to A, respecting the size-K cap per group.
inline std::pair<std::vector<long>, std::vector<long>> greedy_partition(
    long cache_size, const PopularityModel& pm) {
    std::vector<long> a, b;
    a.reserve(cache_size);
    b.reserve(cache_size);
    double mass_a = 0.0, mass_b = 0.0;
    for (long i = 1; i <= 2 * cache_size; ++i) {
        bool to_a = long(a.size()) < cache_size &&
                    (mass_a <= mass_b || long(b.size()) >= cache_size);
        if (to_a) {
            a.push_back(i);
            mass_a += pm.pmf[i - 1];
        } else {
            b.push_back(i);
            mass_b += pm.pmf[i - 1];
        }
    }
    return {std::move(a), std::move(b)};
}

// Visits every size-K subset of {first..last} that contains `first`
// (canonical halves of balanced partitions, each partition seen once).
template <typename Visit>
void for_each_canonical_half(long first, long last, long k, Visit&& visit) {
    std::vector<long> pick(k);
    pick[0] = first;
    // combinations of k-1 items from (first, last]
    std::vector<long> idx(k - 1);
    for (long i = 0; i < k - 1; ++i) idx[i] = first + 1 + i;
    if (k == 1) {
        visit(pick);
        return;
    }
    for (;;) {
        for (long i = 0; i < k - 1; ++i) pick[i + 1] = idx[i];
        visit(pick);
        long i = k - 2;
        while (i >= 0 && idx[i] == last - (k - 2 - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (long j = i + 1; j < k - 1; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// Splits the 2K most popular contents into two size-K groups with |h_A - h_B|
// minimal. Exact search for 2K <= 24, greedy above that; ties go to the greedy
// result when it achieves the minimum.
inline CacheAssignment dac_partition(long cache_size, const PopularityModel& pm) {
    if (cache_size < 1) throw std::domain_error("dac_partition: K must be >= 1");
    if (2 * cache_size > pm.lib_size) throw std::domain_error("dac_partition: need 2K <= L");

    const long two_k = 2 * cache_size;
    double total = 0.0;
    for (long i = two_k; i >= 1; --i) total += pm.pmf[i - 1];

    auto [greedy_a, greedy_b] = detail::greedy_partition(cache_size, pm);
    auto mass_of = [&](const std::vector<long>& set) {
        double m = 0.0;
        for (auto it = set.rbegin(); it != set.rend(); ++it) m += pm.pmf[*it - 1];
        return m;
    };
    std::vector<long> best_a = greedy_a;
    double best_diff = std::fabs(2.0 * mass_of(greedy_a) - total);

    if (two_k <= 24) {
        detail::for_each_canonical_half(1, two_k, cache_size, [&](const std::vector<long>& half) {
            double diff = std::fabs(2.0 * mass_of(half) - total);
            if (diff < best_diff * (1.0 - 1e-12)) {
                best_diff = diff;
                best_a = half;
            }
        });
    }

    std::vector<long> best_b;
    best_b.reserve(cache_size);
    for (long i = 1, j = 0; i <= two_k; ++i) {
        if (j < long(best_a.size()) && best_a[j] == i)
            ++j;
        else
            best_b.push_back(i);
    }

    CacheAssignment ca;
    ca.kind = Scheme::dac;
    ca.h_a = mass_of(best_a);
    ca.h_b = mass_of(best_b);
    ca.cache_a = std::move(best_a);
    ca.cache_b = std::move(best_b);
    if (ca.h_a < ca.h_b) {
        std::swap(ca.cache_a, ca.cache_b);
        std::swap(ca.h_a, ca.h_b);
    }
    ca.e_a = ca.h_b;
    ca.e_b = ca.h_a;
    return ca;
}

namespace detail {

inline double binomial_checked(long n, long k) {
    double c = 1.0;
    for (long i = 0; i < k; ++i) c = c * double(n - i) / double(i + 1);
    return c;
}

template <typename Visit>
void for_each_subset(long n, long k, Visit&& visit) {
    std::vector<long> idx(k);
    for (long i = 0; i < k; ++i) idx[i] = i + 1;
    for (;;) {
        visit(idx);
        long i = k - 1;
        while (i >= 0 && idx[i] == n - (k - 1 - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (long j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

// Exhaustive check of the Pareto property: no pair of size-K caches can
// simultaneously beat both exchange probabilities of any balanced top-2K
// partition. Enumeration over all C(L,K)^2 cache pairs.
inline bool verify_partition_pareto(long cache_size, const PopularityModel& pm) {
    const long lib = pm.lib_size;
    if (2 * cache_size > lib) throw std::domain_error("verify_partition_pareto: need 2K <= L");
    double pairs = detail::binomial_checked(lib, cache_size);
    if (pairs * pairs > 1e6)
        throw std::length_error("verify_partition_pareto: instance too large");

    // Exchange probabilities of every candidate (A', B'): e_A' over B'\A'.
    std::vector<std::vector<long>> subsets;
    detail::for_each_subset(lib, cache_size, [&](const std::vector<long>& s) {
        subsets.push_back(s);
    });
    auto exchange = [&](const std::vector<long>& own, const std::vector<long>& peer) {
        double e = 0.0;
        for (long i : peer)
            if (!std::binary_search(own.begin(), own.end(), i)) e += pm.pmf[i - 1];
        return e;
    };

    bool pareto = true;
    detail::for_each_canonical_half(1, 2 * cache_size, cache_size,
                                    [&](const std::vector<long>& half_a) {
        if (!pareto) return;
        std::vector<long> half_b;
        for (long i = 1; i <= 2 * cache_size; ++i)
            if (!std::binary_search(half_a.begin(), half_a.end(), i)) half_b.push_back(i);
        double e_a = exchange(half_a, half_b);
        double e_b = exchange(half_b, half_a);
        for (const auto& alt_a : subsets) {
            for (const auto& alt_b : subsets) {
                if (exchange(alt_a, alt_b) > e_a + 1e-12 &&
                    exchange(alt_b, alt_a) > e_b + 1e-12) {
                    pareto = false;
                    return;
                }
            }
        }
    });
    return pareto;
}

// h_dac / h_mpc; library size cancels, so only K and xi matter.
inline double h_ratio(long cache_size, double xi) {
    if (cache_size < 1) throw std::domain_error("h_ratio: K must be >= 1");
    if (xi < 0.0) throw std::domain_error("h_ratio: xi must be >= 0");
    double num = 0.0;
    for (long i = 2 * cache_size; i >= 1; --i) num += std::pow(double(i), -xi);
    double den = 0.0;
    for (long i = cache_size; i >= 1; --i) den += std::pow(double(i), -xi);
    return 0.5 * num / den;
}

// Large-K limit of h_ratio.
inline double h_ratio_limit(double xi) {
    if (xi < 0.0) throw std::domain_error("h_ratio_limit: xi must be >= 0");
    return std::max(std::pow(2.0, -xi), 0.5);
}

// Offloading factor: fraction of requests not served over cellular links.
inline double offloading_factor(Scheme policy, double delta, long cache_size,
                                const PopularityModel& pm) {
    if (policy == Scheme::mpc) return h_mpc(cache_size, pm);
    return (1.0 + delta) * h_dac(cache_size, pm);
}

// Smallest paired fraction for which DAC offloads at least as much as MPC:
// (1 + delta) h_ratio = 1. Empty when even delta = 1 is not enough.
inline std::optional<double> min_delta_for_gain(long cache_size, double xi) {
    double ratio = h_ratio(cache_size, xi);
    double needed = 1.0 / ratio - 1.0;
    if (needed > 1.0) return std::nullopt;
    return std::max(0.0, needed);
}

// Inverse of the above in xi: largest xi (within [0, 4]) at which DAC with the
// given delta still matches MPC. h_ratio is monotone in xi, so bisection works.
// Empty when DAC wins on the whole range (e.g. delta = 1).
inline std::optional<double> xi_threshold_for_delta(double delta, long cache_size,
                                                    double tol = 1e-4) {
    const double target = 1.0 / (1.0 + delta);
    double lo = 0.0, hi = 4.0;
    if (h_ratio(cache_size, hi) >= target) return std::nullopt;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (h_ratio(cache_size, mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace mmcache::caching
