#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace mmcache::specfun {

// lgamma without the signgam global; all arguments here are positive.
inline double lgamma_pos(double x) {
#ifdef __GLIBC__
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

inline double erfc(double x) { return std::erfc(x); }

namespace detail {

// Regularized P(s,x) by power series, for x < s + 1.
inline double gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double a = s;
    for (int n = 0; n < 500; ++n) {
        a += 1.0;
        term *= x / a;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) break;
    }
    return sum * std::exp(-x + s * std::log(x) - lgamma_pos(s));
}

// Regularized Q(s,x) by modified-Lentz continued fraction, for x >= s + 1.
inline double gamma_q_cf(double s, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-17) break;
    }
    return std::exp(-x + s * std::log(x) - lgamma_pos(s)) * h;
}

}  // namespace detail

// Lower incomplete gamma, non-regularized: integral of t^{s-1} e^{-t} on [0, x].
inline double lower_incomplete_gamma(double s, double x) {
    if (s <= 0.0) throw std::domain_error("lower_incomplete_gamma: s must be > 0");
    if (x < 0.0) throw std::domain_error("lower_incomplete_gamma: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double gam = std::exp(lgamma_pos(s));
    if (x < s + 1.0) return detail::gamma_p_series(s, x) * gam;
    return (1.0 - detail::gamma_q_cf(s, x)) * gam;
}

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    enum class Kind { gauss_legendre, adaptive } kind = Kind::gauss_legendre;

    template <typename F>
    double integrate(F&& f) const {
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
        return sum;
    }
};

namespace detail {

// Nodes/weights on [-1, 1] by Newton iteration on the Legendre recurrence.
inline const std::vector<std::pair<double, double>>& legendre_reference(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::vector<std::pair<double, double>> rule(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule[i] = {-x, w};
        rule[n - 1 - i] = {x, w};
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace detail

// n-node Gauss-Legendre rule on [a, b]; exact for polynomials of degree 2n-1.
inline QuadratureRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
    const auto& ref = detail::legendre_reference(n);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = mid + half * ref[i].first;
        rule.weights[i] = half * ref[i].second;
    }
    return rule;
}

// Gauss hypergeometric for the single pattern 2F1(1, b; b+1; -z), b > 0, z >= 0,
// via the integral identity  2F1(1,b;b+1;-z) = b * I,  I = int_0^1 t^{b-1}/(1+zt) dt.
//
// For z <= 1/2 the power series in -z converges geometrically. Otherwise [0,1]
// is split into dyadic panels [2^{-j-1}, 2^{-j}]; on each, the integrand is
// analytic with the pole at t = -1/z at least three panel half-lengths away, so
// a fixed 16-node rule is accurate to near machine precision. The remaining
// segment [0, 2^{-J}] has z*t <= 1/2 and is summed as a series.
inline double hyp2f1_special(double b, double z) {
    if (b <= 0.0) throw std::domain_error("hyp2f1_special: b must be > 0");
    if (z < 0.0) throw std::domain_error("hyp2f1_special: z must be >= 0");
    if (z == 0.0) return 1.0;

    if (z <= 0.5) {
        double sum = 1.0;
        double zp = 1.0;
        for (int n = 1; n <= 80; ++n) {
            zp *= -z;
            double term = zp * b / (b + n);
            sum += term;
            if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
        }
        return sum;
    }

    static const QuadratureRule panel = gauss_legendre(16, 0.5, 1.0);
    const int num_panels = static_cast<int>(std::ceil(std::log2(2.0 * z)));

    double integral = 0.0;
    double scale = 1.0;                      // 2^{-j b}
    const double step = std::pow(2.0, -b);   // per-panel decay of t^{b-1} dt
    double zj = z;                           // z * 2^{-j}
    std::vector<double> tb(panel.nodes.size());
    for (std::size_t i = 0; i < panel.nodes.size(); ++i)
        tb[i] = std::pow(panel.nodes[i], b - 1.0);
    for (int j = 0; j < num_panels; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < panel.nodes.size(); ++i)
            acc += panel.weights[i] * tb[i] / (1.0 + zj * panel.nodes[i]);
        integral += scale * acc;
        scale *= step;
        zj *= 0.5;
    }

    // Tail [0, c] with c = 2^{-J}: series with ratio z*c <= 1/2.
    const double c = std::pow(2.0, -num_panels);
    const double zc = z * c;
    double tail = 0.0;
    double zp = 1.0;
    for (int n = 0; n <= 80; ++n) {
        double term = zp / (b + n);
        tail += term;
        if (std::fabs(term) < 1e-17 * std::fabs(tail)) break;
        zp *= -zc;
    }
    integral += std::pow(c, b) * tail;

    return b * integral;
}

}  // namespace mmcache::specfun
