#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "mmcache/popularity.hpp"
#include "mmcache/rng.hpp"

using namespace mmcache;
using namespace mmcache::caching;
using Catch::Approx;

TEST_CASE("zipf pmf closed cases") {
    auto uniform = zipf_pmf(0.0, 4);
    for (double q : uniform.pmf) CHECK(q == Approx(0.25).epsilon(1e-14));

    auto two = zipf_pmf(1.0, 2);
    CHECK(two.pmf[0] == Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(two.pmf[1] == Approx(1.0 / 3.0).epsilon(1e-14));

    auto big = zipf_pmf(1.0, 1000);
    CHECK(big.pmf[0] == Approx(0.13359).margin(5e-6));

    CHECK_THROWS_AS(zipf_pmf(-0.1, 10), std::domain_error);
    CHECK_THROWS_AS(zipf_pmf(1.0, 0), std::domain_error);
}

TEST_CASE("zipf pmf invariants") {
    for (double xi : {0.0, 0.4, 1.0, 2.3}) {
        auto pm = zipf_pmf(xi, 777);
        double total = std::accumulate(pm.pmf.begin(), pm.pmf.end(), 0.0);
        CHECK(total == Approx(1.0).margin(1e-12));
        for (std::size_t i = 1; i < pm.pmf.size(); ++i) {
            CHECK(pm.pmf[i] <= pm.pmf[i - 1] + 1e-15);
            CHECK(pm.pmf[i] > 0.0);
        }
        CHECK(pm.cdf.back() == 1.0);
    }
}

TEST_CASE("zipf sampling matches the pmf") {
    auto pm = zipf_pmf(0.8, 50);
    Rng rng(42);
    std::vector<long> counts(50, 0);
    const long n = 200000;
    for (long i = 0; i < n; ++i) ++counts[pm.sample(rng) - 1];
    for (int i : {0, 1, 10, 49}) {
        CHECK(double(counts[i]) / n == Approx(pm.pmf[i]).margin(0.004));
    }
}

TEST_CASE("hit probability") {
    auto pm = zipf_pmf(0.0, 1000);
    std::vector<long> first100(100);
    std::iota(first100.begin(), first100.end(), 1);
    CHECK(hit_probability(first100, pm) == Approx(0.1).epsilon(1e-12));

    auto pm1 = zipf_pmf(1.0, 1000);
    std::vector<long> first200(200);
    std::iota(first200.begin(), first200.end(), 1);
    CHECK(hit_probability(first200, pm1) == Approx(0.7853).margin(5e-5));

    CHECK(hit_probability({}, pm) == 0.0);
    CHECK_THROWS_AS(hit_probability({1001}, pm), std::domain_error);
}

TEST_CASE("h_dac paper-quoted values") {
    CHECK(h_dac(200, zipf_pmf(1.0, 1000)) == Approx(0.439).margin(0.001));
    CHECK(h_dac(200, zipf_pmf(0.4, 1000)) == Approx(0.286).margin(0.001));
    CHECK(h_dac(500, zipf_pmf(0.0, 1000)) == Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(h_dac(501, zipf_pmf(0.0, 1000)), std::domain_error);
}

TEST_CASE("dac partition small exact cases") {
    auto pm = zipf_pmf(1.0, 4);
    auto ca = dac_partition(2, pm);
    CHECK(ca.cache_a == std::vector<long>{1, 4});
    CHECK(ca.cache_b == std::vector<long>{2, 3});
    CHECK(std::fabs(ca.h_a - ca.h_b) == Approx(0.2).epsilon(1e-12));
    CHECK(ca.e_a == ca.h_b);
    CHECK(ca.e_b == ca.h_a);

    auto only = dac_partition(1, zipf_pmf(0.7, 2));
    CHECK(only.cache_a == std::vector<long>{1});
    CHECK(only.cache_b == std::vector<long>{2});

    auto flat = dac_partition(3, zipf_pmf(0.0, 6));
    CHECK(flat.h_a == Approx(flat.h_b).epsilon(1e-12));
}

TEST_CASE("dac partition structural invariants") {
    for (double xi : {0.0, 0.4, 1.0, 1.7}) {
        for (long k : {1L, 3L, 12L, 50L, 200L}) {
            auto pm = zipf_pmf(xi, 2 * k);
            auto ca = dac_partition(k, pm);
            CHECK(long(ca.cache_a.size()) == k);
            CHECK(long(ca.cache_b.size()) == k);
            std::vector<long> merged = ca.cache_a;
            merged.insert(merged.end(), ca.cache_b.begin(), ca.cache_b.end());
            std::sort(merged.begin(), merged.end());
            for (long i = 0; i < 2 * k; ++i) CHECK(merged[i] == i + 1);
            CHECK(ca.h_a >= ca.h_b);
            CHECK(ca.h_a + ca.h_b == Approx(2.0 * h_dac(k, pm)).epsilon(1e-12));
        }
    }
}

TEST_CASE("exact partition matches exhaustive search up to 2K = 16") {
    for (double xi : {0.3, 0.7, 1.1}) {
        for (long k = 1; k <= 8; ++k) {
            auto pm = zipf_pmf(xi, 2 * k);
            auto ca = dac_partition(k, pm);
            // brute force over all balanced partitions
            double total = 0.0;
            for (double q : pm.pmf) total += q;
            double best = 1e300;
            std::vector<int> pick(2 * k, 0);
            std::function<void(long, long)> rec = [&](long idx, long chosen) {
                if (chosen == k) {
                    double mass = 0.0;
                    for (long i = 0; i < 2 * k; ++i)
                        if (pick[i]) mass += pm.pmf[i];
                    best = std::min(best, std::fabs(2.0 * mass - total));
                    return;
                }
                if (idx >= 2 * k || 2 * k - idx < k - chosen) return;
                pick[idx] = 1;
                rec(idx + 1, chosen + 1);
                pick[idx] = 0;
                rec(idx + 1, chosen);
            };
            pick[0] = 1;
            rec(1, 1);
            CHECK(std::fabs(ca.h_a - ca.h_b) == Approx(best).margin(1e-13));
        }
    }
}

TEST_CASE("pareto property of top-2K partitions") {
    CHECK(verify_partition_pareto(1, zipf_pmf(1.0, 3)));
    CHECK(verify_partition_pareto(2, zipf_pmf(0.8, 5)));
    CHECK(verify_partition_pareto(2, zipf_pmf(0.0, 4)));
    for (double xi : {0.0, 0.5, 1.0, 2.0}) {
        for (long lib = 2; lib <= 8; ++lib) {
            for (long k = 1; k <= 3 && 2 * k <= lib; ++k) {
                CHECK(verify_partition_pareto(k, zipf_pmf(xi, lib)));
            }
        }
    }
    CHECK_THROWS_AS(verify_partition_pareto(10, zipf_pmf(1.0, 100)), std::length_error);
}

TEST_CASE("h_ratio values and limits") {
    CHECK(h_ratio(100, 0.0) == Approx(1.0).epsilon(1e-14));
    CHECK(h_ratio(1000000, 2.0) == Approx(0.5).margin(1e-3));
    CHECK(h_ratio_limit(0.0) == 1.0);
    CHECK(h_ratio_limit(2.0) == 0.5);
    CHECK(h_ratio_limit(0.5) == Approx(std::pow(2.0, -0.5)).epsilon(1e-14));
}

TEST_CASE("h_ratio monotone in K and xi, bounded by the limit") {
    for (double xi : {0.1, 0.5, 1.0, 1.5, 2.0}) {
        double prev = h_ratio(1, xi);
        for (long k : {2L, 5L, 10L, 100L, 1000L, 10000L}) {
            double v = h_ratio(k, xi);
            CHECK(v < prev);
            CHECK(v > 0.5);
            CHECK(v <= 1.0);
            CHECK(v >= h_ratio_limit(xi));
            prev = v;
        }
    }
    for (long k : {1L, 10L, 300L}) {
        double prev = h_ratio(k, 0.1);
        for (double xi : {0.3, 0.6, 1.0, 1.4, 2.0}) {
            double v = h_ratio(k, xi);
            CHECK(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("offloading factor") {
    auto pm = zipf_pmf(0.0, 1000);
    CHECK(offloading_factor(Scheme::mpc, 0.3, 100, pm) == Approx(0.1).epsilon(1e-12));
    CHECK(offloading_factor(Scheme::dac, 0.0, 100, pm) ==
          Approx(h_dac(100, pm)).epsilon(1e-12));
    CHECK(offloading_factor(Scheme::dac, 1.0, 100, pm) == Approx(0.2).epsilon(1e-12));
}

TEST_CASE("minimum pairing fraction for offloading gain") {
    CHECK(min_delta_for_gain(100, 0.0).value() == Approx(0.0).margin(1e-12));
    // thresholds at K=100: delta* = 0.5 near xi = 0.64, 0.75 near xi = 0.98
    CHECK(min_delta_for_gain(100, 0.6396).value() == Approx(0.5).margin(2e-3));
    CHECK(min_delta_for_gain(100, 0.9757).value() == Approx(0.75).margin(2e-3));
    // h_ratio > 1/2 strictly at finite K, so a feasible delta always exists,
    // approaching 1 for steep popularity
    auto steep = min_delta_for_gain(100, 3.0);
    REQUIRE(steep.has_value());
    CHECK(*steep > 0.999);
    CHECK(*steep <= 1.0);
}

TEST_CASE("xi threshold inversion by bisection") {
    CHECK(xi_threshold_for_delta(0.5, 100).value() == Approx(0.6396).margin(2e-3));
    CHECK(xi_threshold_for_delta(0.75, 100).value() == Approx(0.9757).margin(2e-3));
    CHECK_FALSE(xi_threshold_for_delta(1.0, 100).has_value());
}

TEST_CASE("mpc assignment") {
    auto pm = zipf_pmf(0.7, 300);
    auto ca = mpc_assignment(40, pm);
    CHECK(ca.kind == Scheme::mpc);
    CHECK(long(ca.cache_a.size()) == 40);
    CHECK(ca.cache_a.front() == 1);
    CHECK(ca.cache_a.back() == 40);
    CHECK(ca.cache_b.empty());
    CHECK(ca.e_a == 0.0);
}
