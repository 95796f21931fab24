#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "mmcache/config.hpp"
#include "mmcache/rng.hpp"

namespace mmcache::channel {

// One directional link as sampled inside a drop.
struct LinkState {
    double distance = 0.0;  // [m]
    bool los = false;
    double alpha = 2.0;     // pathloss exponent consistent with the LOS flag
    double eta = 1.0;       // Rayleigh power gain, Exp(1)
    double tx_gain = 1.0;   // [linear]
    double rx_gain = 1.0;   // [linear]
};

inline double wrap_angle(double theta) {
    theta = std::fmod(theta, 2.0 * M_PI);
    if (theta > M_PI) theta -= 2.0 * M_PI;
    if (theta <= -M_PI) theta += 2.0 * M_PI;
    return theta;
}

// Sectorized pattern: mainlobe gain inside |theta| <= threshold (inclusive),
// sidelobe outside. Callers model a beam of full width dtheta by passing
// dtheta / 2 as the threshold.
inline double sector_gain(double theta, double threshold, double g_max, double g_min) {
    return std::fabs(wrap_angle(theta)) <= threshold ? g_max : g_min;
}

// Exponential blockage model.
inline double p_los(double r, double r_los) { return std::exp(-r / r_los); }

inline bool sample_los(double r, double r_los, Rng& rng) {
    return rng.uniform() < p_los(r, r_los);
}

// Friis-style received power with sectorized gains and Rayleigh fading.
inline double received_power(double p_tx, double g_tx, double g_rx, double eta, double r,
                             double alpha, double lambda_c) {
    if (r <= 0.0) throw std::domain_error("received_power: r must be > 0");
    double unit = lambda_c / (4.0 * M_PI);
    return unit * unit * p_tx * g_tx * g_rx * eta * std::pow(r, -alpha);
}

// Residual self-interference power of a full-duplex transmitter: the SI
// channel gain is Rayleigh with mean kappa_si after cancellation.
inline double sample_self_interference(double p_ue, double kappa_si, Rng& rng) {
    return rng.exponential(kappa_si) * p_ue;
}

// Discrete distribution of the normalized two-end antenna gain of an
// interfering UE link, when the interferer's boresight is uniform and the
// victim's beam points at its own transmitter.
struct GainMixture {
    std::vector<double> values;  // normalized by g_max^2
    std::vector<double> probs;

    double expect(double (*f)(double)) const {
        double e = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) e += probs[i] * f(values[i]);
        return e;
    }
};

inline GainMixture interferer_gain_mixture(double dtheta_ue, double g_ue_max,
                                           double g_ue_min) {
    if (dtheta_ue <= 0.0 || dtheta_ue > 2.0 * M_PI)
        throw std::domain_error("interferer_gain_mixture: beamwidth must be in (0, 2pi]");
    const double ratio = g_ue_min / g_ue_max;
    const double two_pi = 2.0 * M_PI;
    const double p_main = dtheta_ue / two_pi;
    GainMixture mix;
    mix.values = {1.0, ratio, ratio * ratio};
    mix.probs = {p_main * p_main, 2.0 * p_main * (1.0 - p_main), (1.0 - p_main) * (1.0 - p_main)};
    return mix;
}

}  // namespace mmcache::channel
