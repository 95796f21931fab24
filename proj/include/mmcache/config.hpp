#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "mmcache/errors.hpp"

namespace mmcache {

inline constexpr double kSpeedOfLight = 299792458.0;  // [m/s]

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }
inline double deg_to_rad(double deg) { return deg * M_PI / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / M_PI; }

// Full parameter set in SI linear units. dB/dBm/degree/km^2 conversions happen
// only at the config-file boundary. Immutable after load; share freely.
struct SystemParams {
    double lambda_bs = 127e-6;               // BS density [1/m^2]
    double lambda_ue = 1270e-6;              // UE density [1/m^2]
    double delta = 1.0;                      // paired-UE fraction
    double r_d2d_max = 15.0;                 // max pair distance [m]
    double f_c = 28e9;                       // carrier frequency [Hz]
    double bw_total = 2e9;                   // downlink bandwidth [Hz]
    double chi_d2d = 0.2;                    // D2D bandwidth fraction
    double r_los = 30.0;                     // average LOS radius [m]
    double a_los = 2.0;                      // LOS pathloss exponent
    double a_nlos = 3.0;                     // NLOS pathloss exponent
    double p_bs = dbm_to_watts(30.0);        // BS transmit power [W]
    double p_ue = dbm_to_watts(23.0);        // UE transmit power [W]
    double kappa_si = db_to_linear(-80.0);   // residual SI power gain [linear]
    double n0 = dbm_to_watts(-174.0);        // noise PSD [W/Hz]
    double f_n = db_to_linear(10.0);         // noise figure [linear]
    double dtheta_ue = deg_to_rad(30.0);     // UE beamwidth [rad]
    double dtheta_bs = deg_to_rad(10.0);     // BS beamwidth [rad]
    double g_bs_max = db_to_linear(18.0);
    double g_bs_min = db_to_linear(-2.0);
    double g_ue_max = db_to_linear(9.0);
    double g_ue_min = db_to_linear(-9.0);
    double sigma_file = 8e8;                 // file size [bits]
    long lib_size = 1000;                    // library size L
    long cache_size = 100;                   // UE cache size K
    double xi = 0.0;                         // Zipf popularity exponent

    double bw_cell() const { return (1.0 - chi_d2d) * bw_total; }
    double bw_d2d() const { return chi_d2d * bw_total; }
    double r_cell() const { return 1.0 / std::sqrt(M_PI * lambda_bs); }
    double wavelength() const { return kSpeedOfLight / f_c; }
};

// Validates every invariant; throws ValidationError naming the first bad field.
inline void validate(const SystemParams& p) {
    auto require = [](bool ok, const char* field, const char* msg) {
        if (!ok) throw ValidationError(field, msg);
    };
    require(p.lambda_bs > 0, "lambda_bs_per_km2", "must be > 0");
    require(p.lambda_ue > 0, "lambda_ue_per_km2", "must be > 0");
    require(p.delta >= 0 && p.delta <= 1, "delta", "must be in [0, 1]");
    require(p.r_d2d_max > 0, "r_d2d_max_m", "must be > 0");
    require(p.f_c > 0, "f_c_ghz", "must be > 0");
    require(p.bw_total > 0, "bw_ghz", "must be > 0");
    require(p.chi_d2d > 0 && p.chi_d2d < 1, "chi_d2d", "must be in (0, 1)");
    require(p.r_los > 0, "r_los_m", "must be > 0");
    require(p.a_los >= 2, "a_los", "must be >= 2");
    require(p.a_nlos >= p.a_los, "a_nlos", "must be >= a_los");
    require(p.p_bs > 0, "p_bs_dbm", "must be > 0 W");
    require(p.p_ue > 0, "p_ue_dbm", "must be > 0 W");
    require(p.kappa_si >= 0, "kappa_si_db", "must be >= 0");
    require(p.n0 > 0, "n0_dbm_hz", "must be > 0");
    require(p.f_n >= 1, "f_n_db", "must be >= 0 dB");
    require(p.dtheta_ue > 0 && p.dtheta_ue <= 2 * M_PI, "dtheta_ue_deg", "must be in (0, 360]");
    require(p.dtheta_bs > 0 && p.dtheta_bs <= 2 * M_PI, "dtheta_bs_deg", "must be in (0, 360]");
    require(p.g_bs_max >= p.g_bs_min && p.g_bs_min > 0, "g_bs_max_db",
            "gains must be positive, max >= min");
    require(p.g_ue_max >= p.g_ue_min && p.g_ue_min > 0, "g_ue_max_db",
            "gains must be positive, max >= min");
    require(p.sigma_file > 0, "sigma_file_mb", "must be > 0");
    require(p.lib_size >= 1, "lib_size", "must be >= 1");
    require(p.cache_size >= 1, "cache_size", "must be >= 1");
    require(2 * p.cache_size <= p.lib_size, "cache_size", "2K must be <= L");
    require(p.xi >= 0, "xi", "must be >= 0");
}

namespace detail {

inline std::map<std::string, std::string> parse_kv_file(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw.substr(0, raw.find('#'));
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value', got '" + raw + "'", line_no);
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) throw ConfigError("empty key or value", line_no);
        if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
        kv[key] = value;
    }
    return kv;
}

inline double to_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double parsed;
    try {
        parsed = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ValidationError(key, "not a number: '" + value + "'");
    }
    if (pos != value.size()) throw ValidationError(key, "trailing junk in '" + value + "'");
    return parsed;
}

// Finds a config-unit double whose forward conversion reproduces `target`
// bit-exactly when one exists (the conversions are expanding maps, so the
// naive inverse can be off by a few ulps).
template <typename Fwd>
double invert_conversion(double target, double estimate, Fwd&& fwd) {
    if (fwd(estimate) == target) return estimate;
    double best = estimate;
    double best_err = std::fabs(fwd(estimate) - target);
    for (int dir = -1; dir <= 1; dir += 2) {
        double d = estimate;
        for (int step = 0; step < 256; ++step) {
            d = std::nextafter(d, dir < 0 ? -HUGE_VAL : HUGE_VAL);
            double err = std::fabs(fwd(d) - target);
            if (err == 0.0) return d;
            if (err < best_err) {
                best_err = err;
                best = d;
            }
        }
    }
    return best;
}

}  // namespace detail

// Loads the flat key=value config format. Omitted keys take the defaults
// above except xi, which has no safe default and must be present.
inline SystemParams load_params(std::istream& in) {
    auto kv = detail::parse_kv_file(in);
    SystemParams p;
    bool have_xi = false;

    auto take = [&](const char* key, auto&& apply) {
        auto it = kv.find(key);
        if (it == kv.end()) return;
        apply(detail::to_double(key, it->second));
        kv.erase(it);
    };

    take("lambda_bs_per_km2", [&](double v) { p.lambda_bs = v * 1e-6; });
    take("lambda_ue_per_km2", [&](double v) { p.lambda_ue = v * 1e-6; });
    take("delta", [&](double v) { p.delta = v; });
    take("r_d2d_max_m", [&](double v) { p.r_d2d_max = v; });
    take("f_c_ghz", [&](double v) { p.f_c = v * 1e9; });
    take("bw_ghz", [&](double v) { p.bw_total = v * 1e9; });
    take("chi_d2d", [&](double v) { p.chi_d2d = v; });
    take("r_los_m", [&](double v) { p.r_los = v; });
    take("a_los", [&](double v) { p.a_los = v; });
    take("a_nlos", [&](double v) { p.a_nlos = v; });
    take("p_bs_dbm", [&](double v) { p.p_bs = dbm_to_watts(v); });
    take("p_ue_dbm", [&](double v) { p.p_ue = dbm_to_watts(v); });
    take("kappa_si_db", [&](double v) { p.kappa_si = db_to_linear(v); });
    take("n0_dbm_hz", [&](double v) { p.n0 = dbm_to_watts(v); });
    take("f_n_db", [&](double v) { p.f_n = db_to_linear(v); });
    take("dtheta_ue_deg", [&](double v) { p.dtheta_ue = deg_to_rad(v); });
    take("dtheta_bs_deg", [&](double v) { p.dtheta_bs = deg_to_rad(v); });
    take("g_bs_max_db", [&](double v) { p.g_bs_max = db_to_linear(v); });
    take("g_bs_min_db", [&](double v) { p.g_bs_min = db_to_linear(v); });
    take("g_ue_max_db", [&](double v) { p.g_ue_max = db_to_linear(v); });
    take("g_ue_min_db", [&](double v) { p.g_ue_min = db_to_linear(v); });
    take("sigma_file_mb", [&](double v) { p.sigma_file = v * 8e6; });
    take("lib_size", [&](double v) { p.lib_size = static_cast<long>(v); });
    take("cache_size", [&](double v) { p.cache_size = static_cast<long>(v); });
    take("xi", [&](double v) {
        p.xi = v;
        have_xi = true;
    });

    if (!kv.empty()) throw ValidationError(kv.begin()->first, "unknown key");
    if (!have_xi) throw ValidationError("xi", "required key is missing");
    validate(p);
    return p;
}

inline SystemParams load_params(const std::string& file_path) {
    std::ifstream in(file_path);
    if (!in) throw ConfigError("cannot open '" + file_path + "'", 0);
    return load_params(in);
}

// Serializes back to config-file units. Each converted field is emitted as the
// config-unit value that reproduces the in-memory double exactly on reload.
inline std::string save_params(const SystemParams& p) {
    std::ostringstream out;
    char buf[64];
    auto emit = [&](const char* key, double value) {
        std::snprintf(buf, sizeof buf, "%.17g", value);
        out << key << " = " << buf << "\n";
    };
    auto emit_inv = [&](const char* key, double target, double estimate, auto&& fwd) {
        emit(key, detail::invert_conversion(target, estimate, fwd));
    };

    emit_inv("lambda_bs_per_km2", p.lambda_bs, p.lambda_bs * 1e6,
             [](double v) { return v * 1e-6; });
    emit_inv("lambda_ue_per_km2", p.lambda_ue, p.lambda_ue * 1e6,
             [](double v) { return v * 1e-6; });
    emit("delta", p.delta);
    emit("r_d2d_max_m", p.r_d2d_max);
    emit_inv("f_c_ghz", p.f_c, p.f_c / 1e9, [](double v) { return v * 1e9; });
    emit_inv("bw_ghz", p.bw_total, p.bw_total / 1e9, [](double v) { return v * 1e9; });
    emit("chi_d2d", p.chi_d2d);
    emit("r_los_m", p.r_los);
    emit("a_los", p.a_los);
    emit("a_nlos", p.a_nlos);
    emit_inv("p_bs_dbm", p.p_bs, watts_to_dbm(p.p_bs), dbm_to_watts);
    emit_inv("p_ue_dbm", p.p_ue, watts_to_dbm(p.p_ue), dbm_to_watts);
    emit_inv("kappa_si_db", p.kappa_si, linear_to_db(p.kappa_si), db_to_linear);
    emit_inv("n0_dbm_hz", p.n0, watts_to_dbm(p.n0), dbm_to_watts);
    emit_inv("f_n_db", p.f_n, linear_to_db(p.f_n), db_to_linear);
    emit_inv("dtheta_ue_deg", p.dtheta_ue, rad_to_deg(p.dtheta_ue), deg_to_rad);
    emit_inv("dtheta_bs_deg", p.dtheta_bs, rad_to_deg(p.dtheta_bs), deg_to_rad);
    emit_inv("g_bs_max_db", p.g_bs_max, linear_to_db(p.g_bs_max), db_to_linear);
    emit_inv("g_bs_min_db", p.g_bs_min, linear_to_db(p.g_bs_min), db_to_linear);
    emit_inv("g_ue_max_db", p.g_ue_max, linear_to_db(p.g_ue_max), db_to_linear);
    emit_inv("g_ue_min_db", p.g_ue_min, linear_to_db(p.g_ue_min), db_to_linear);
    emit_inv("sigma_file_mb", p.sigma_file, p.sigma_file / 8e6,
             [](double v) { return v * 8e6; });
    out << "lib_size = " << p.lib_size << "\n";
    out << "cache_size = " << p.cache_size << "\n";
    emit("xi", p.xi);
    return out.str();
}

}  // namespace mmcache
