#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "mmcache/config.hpp"

using namespace mmcache;
using Catch::Approx;

namespace {

SystemParams from_text(const std::string& text) {
    std::istringstream in(text);
    return load_params(in);
}

}  // namespace

TEST_CASE("defaults reproduce the canonical cell radius") {
    auto p = from_text("xi = 0.5\n");
    CHECK(p.r_cell() == Approx(50.06).margin(0.01));
    CHECK(p.bw_cell() == Approx(1.6e9));
    CHECK(p.bw_d2d() == Approx(0.4e9));
    CHECK(p.bw_cell() + p.bw_d2d() == Approx(p.bw_total));
}

TEST_CASE("unit cell radius identity") {
    auto p = from_text("lambda_bs_per_km2 = 318309.8861837907\nxi = 0\n");  // 1/pi per m^2
    CHECK(p.r_cell() == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("noise power from Table-II style dB fields") {
    auto p = from_text("xi = 0\n");
    double noise_w = p.n0 * p.f_n * p.bw_cell();
    CHECK(watts_to_dbm(noise_w) == Approx(-71.96).margin(0.005));
}

TEST_CASE("dB and dBm round trips") {
    for (double dbm : {-174.0, -80.0, 0.0, 23.0, 30.0}) {
        CHECK(watts_to_dbm(dbm_to_watts(dbm)) == Approx(dbm).margin(1e-9));
    }
    double w = dbm_to_watts(23.0);
    CHECK(std::fabs(dbm_to_watts(watts_to_dbm(w)) - w) <= 1e-9 * w);
}

TEST_CASE("config parsing reports line numbers and bad fields") {
    std::istringstream bad("xi = 0.5\nthis is not a kv pair\n");
    try {
        load_params(bad);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
    }

    CHECK_THROWS_AS(from_text("xi = 0.5\nnot_a_key = 3\n"), ValidationError);
    CHECK_THROWS_AS(from_text("xi = abc\n"), ValidationError);
    CHECK_THROWS_AS(from_text("xi = 0.5\nxi = 0.6\n"), ConfigError);
    CHECK_THROWS_AS(from_text("lambda_bs_per_km2 = 127\n"), ValidationError);  // xi missing
}

TEST_CASE("invariant violations name the offending field") {
    try {
        from_text("xi = 0.5\ndelta = 1.5\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.field() == "delta");
    }
    CHECK_THROWS_AS(from_text("xi = 0.5\nchi_d2d = 0\n"), ValidationError);
    CHECK_THROWS_AS(from_text("xi = 0.5\ncache_size = 600\n"), ValidationError);  // 2K > L
    CHECK_THROWS_AS(from_text("xi = 0.5\na_los = 3\na_nlos = 2.5\n"), ValidationError);
    CHECK_THROWS_AS(from_text("xi = -0.1\n"), ValidationError);
}

TEST_CASE("comments, blank lines and spacing are tolerated") {
    auto p = from_text("# full config\n\n  xi = 1.25  # popularity\n cache_size=150 \n");
    CHECK(p.xi == 1.25);
    CHECK(p.cache_size == 150);
}

TEST_CASE("save/load round trip is bit-exact per field") {
    auto p = from_text(
        "xi = 0.73\nlambda_bs_per_km2 = 127\nlambda_ue_per_km2 = 1270\np_ue_dbm = 23\n"
        "kappa_si_db = -80\nn0_dbm_hz = -174\nf_n_db = 10\ndtheta_ue_deg = 30\n"
        "g_ue_min_db = -9\nsigma_file_mb = 100\ncache_size = 37\n");
    auto q = from_text(save_params(p));
    CHECK(q.lambda_bs == p.lambda_bs);
    CHECK(q.lambda_ue == p.lambda_ue);
    CHECK(q.delta == p.delta);
    CHECK(q.r_d2d_max == p.r_d2d_max);
    CHECK(q.f_c == p.f_c);
    CHECK(q.bw_total == p.bw_total);
    CHECK(q.chi_d2d == p.chi_d2d);
    CHECK(q.r_los == p.r_los);
    CHECK(q.p_bs == p.p_bs);
    CHECK(q.p_ue == p.p_ue);
    CHECK(q.kappa_si == p.kappa_si);
    CHECK(q.n0 == p.n0);
    CHECK(q.f_n == p.f_n);
    CHECK(q.dtheta_ue == p.dtheta_ue);
    CHECK(q.dtheta_bs == p.dtheta_bs);
    CHECK(q.g_bs_max == p.g_bs_max);
    CHECK(q.g_bs_min == p.g_bs_min);
    CHECK(q.g_ue_max == p.g_ue_max);
    CHECK(q.g_ue_min == p.g_ue_min);
    CHECK(q.sigma_file == p.sigma_file);
    CHECK(q.lib_size == p.lib_size);
    CHECK(q.cache_size == p.cache_size);
    CHECK(q.xi == p.xi);
    // and the serialization is a fixed point
    CHECK(save_params(q) == save_params(p));
}

TEST_CASE("wavelength and beamwidth conversions") {
    auto p = from_text("xi = 0\n");
    CHECK(p.wavelength() == Approx(0.0107).margin(2e-4));
    CHECK(p.dtheta_ue == Approx(M_PI / 6.0).epsilon(1e-12));
    CHECK(p.dtheta_bs == Approx(M_PI / 18.0).epsilon(1e-12));
}
