#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace mmcache {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

// xoshiro256++ with explicit seeding. Self-contained so that simulation
// streams do not depend on the standard library's engine or distribution
// implementations; identical seeds reproduce identical streams everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = detail::splitmix64(sm);
    }

    // Independent per-drop stream: mixes the master seed with the drop index.
    static Rng derive(std::uint64_t master_seed, std::uint64_t index) {
        std::uint64_t sm = master_seed;
        std::uint64_t a = detail::splitmix64(sm);
        sm = a ^ (index + 0x9E3779B97F4A7C15ULL);
        std::uint64_t b = detail::splitmix64(sm);
        return Rng(b);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Exponential with the given mean (mean 0 yields the degenerate 0).
    double exponential(double mean) {
        if (mean == 0.0) return 0.0;
        return -mean * std::log1p(-uniform());
    }

    bool bernoulli(double p) { return uniform() < p; }

    long poisson(double mean) {
        if (mean < 0.0) throw std::domain_error("poisson: negative mean");
        if (mean == 0.0) return 0;
        return mean < 10.0 ? poisson_product(mean) : poisson_ptrs(mean);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    long poisson_product(double mean) {
        const double limit = std::exp(-mean);
        long k = 0;
        double prod = uniform();
        while (prod > limit) {
            ++k;
            prod *= uniform();
        }
        return k;
    }

    // Hormann's PTRS transformed-rejection sampler, valid for mean >= 10.
    long poisson_ptrs(double mean) {
        const double log_mu = std::log(mean);
        const double b = 0.931 + 2.53 * std::sqrt(mean);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = uniform() - 0.5;
            double v = uniform();
            double us = 0.5 - std::fabs(u);
            double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= v_r) return static_cast<long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                kf * log_mu - mean - std::lgamma(kf + 1.0)) {
                return static_cast<long>(kf);
            }
        }
    }

    std::uint64_t state_[4];
};

}  // namespace mmcache
