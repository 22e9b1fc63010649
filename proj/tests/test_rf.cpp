#include <cmath>
#include <random>

#include "bandshare/error.hpp"
#include "bandshare/rf.hpp"
#include "doctest.h"
#include "oracles.hpp"

using bandshare::ValidationError;
using bandshare::geo::GeoPoint;
using namespace bandshare::rf;

namespace {

Environment dry() {
  Environment env;
  env.rain_coeff_k = 0.0002415;
  env.rain_coeff_alpha = 1.5277;
  return env;
}

RadioEndpoint tx_at(GeoPoint where, AntennaPattern antenna, double power_dbm, double freq = 4900.0) {
  return {where, antenna, freq, power_dbm, std::nullopt};
}

RadioEndpoint rx_at(GeoPoint where, AntennaPattern antenna, double sensitivity, double freq = 4900.0) {
  return {where, antenna, freq, std::nullopt, sensitivity};
}

}  // namespace

TEST_SUITE("rf") {
  TEST_CASE("antenna gain examples") {
    CHECK(antenna_gain_dbi(HalfWaveDipole{}, 17.0, 0.0) == doctest::Approx(2.15));
    CHECK(antenna_gain_dbi(HalfWaveDipole{}, 300.0, 0.0) == antenna_gain_dbi(HalfWaveDipole{}, 0.0, 0.0));
    CHECK(antenna_gain_dbi(Isotropic{}, 123.0, 45.0) == 0.0);
    DirectionalSector sector;
    sector.boresight_az_deg = 0.0;
    sector.front_to_back_db = 25.0;
    sector.max_gain_dbi = 15.0;
    CHECK(antenna_gain_dbi(sector, 180.0, 0.0) == doctest::Approx(-10.0));
  }

  TEST_CASE("dipole pattern shape") {
    // Pattern formula evaluated directly at 30 degrees elevation.
    const double el = 30.0 * std::numbers::pi / 180.0;
    const double expected = 2.15 + 20.0 * std::log10(std::cos(std::numbers::pi / 2 * std::sin(el)) / std::cos(el));
    CHECK(antenna_gain_dbi(HalfWaveDipole{}, 0.0, 30.0) == doctest::Approx(expected));
    CHECK(antenna_gain_dbi(HalfWaveDipole{}, 0.0, -30.0) == doctest::Approx(expected));
    CHECK(antenna_gain_dbi(HalfWaveDipole{}, 0.0, 90.0) == doctest::Approx(2.15 - 40.0));
    CHECK(antenna_gain_dbi(HalfWaveDipole{}, 0.0, -90.0) == doctest::Approx(2.15 - 40.0));
    CHECK(antenna_gain_dbi(HalfWaveDipole{}, 0.0, 89.99) >= 2.15 - 40.0);
    double previous = antenna_gain_dbi(HalfWaveDipole{}, 0.0, 0.0);
    for (double e = 1.0; e <= 90.0; e += 1.0) {
      const double g = antenna_gain_dbi(HalfWaveDipole{}, 0.0, e);
      CHECK(g <= previous);
      previous = g;
    }
  }

  TEST_CASE("sector pattern: boresight, 3 dB points, wrap-around") {
    DirectionalSector s{350.0, 60.0, 10.0, 15.0, 25.0};
    CHECK(antenna_gain_dbi(s, 350.0, 0.0) == doctest::Approx(15.0));
    CHECK(antenna_gain_dbi(s, 20.0, 0.0) == doctest::Approx(12.0));   // +30 deg across north
    CHECK(antenna_gain_dbi(s, 320.0, 0.0) == doctest::Approx(12.0));  // -30 deg
    CHECK(antenna_gain_dbi(s, 350.0, 5.0) == doctest::Approx(12.0));
    CHECK(antenna_gain_dbi(s, 350.0, -5.0) == doctest::Approx(12.0));
    CHECK(antenna_gain_dbi(s, 170.0, 0.0) == doctest::Approx(-10.0));
    for (double az = 0.0; az < 360.0; az += 5.0) {
      const double g = antenna_gain_dbi(s, az, 0.0);
      CHECK(g <= 15.0);
      CHECK(g >= 15.0 - 25.0);
    }
  }

  TEST_CASE("antenna errors") {
    CHECK_THROWS_WITH_AS(antenna_gain_dbi(Isotropic{}, 360.0, 0.0), doctest::Contains("invalid direction"),
                         ValidationError);
    CHECK_THROWS_AS(antenna_gain_dbi(Isotropic{}, -1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(antenna_gain_dbi(Isotropic{}, 0.0, 90.5), ValidationError);
    CHECK_THROWS_AS(antenna_gain_dbi(DirectionalSector{0, 0, 10, 15, 25}, 0, 0), ValidationError);
    CHECK_THROWS_AS(antenna_gain_dbi(DirectionalSector{0, 65, 10, 15, -1}, 0, 0), ValidationError);
    CHECK(parse_antenna_kind("directional") == AntennaKind::Directional);
    CHECK_THROWS_AS(parse_antenna_kind("yagi"), ValidationError);
  }

  TEST_CASE("free-space path loss examples") {
    CHECK(std::abs(oracle::friis_loss_db(4900.0, 1000.0) - 106.2517048) < 1e-6);  // frozen
    CHECK(std::abs(fspl_db(4900.0, 1000.0) - 106.25) <= 0.01);
    CHECK(fspl_db(4900.0, 1000.0) == doctest::Approx(oracle::friis_loss_db(4900.0, 1000.0)).epsilon(1e-12));
    // At f = 1 MHz the 0 dB distance c/(4*pi*f) = 23.86 m clears the near-field limit.
    const double unit = kSpeedOfLightMps / (4.0 * std::numbers::pi * 1e6);
    CHECK(std::abs(fspl_db(1.0, unit)) < 1e-12);
    CHECK(fspl_db(4900.0, 2000.0) - fspl_db(4900.0, 1000.0) == doctest::Approx(6.0206).epsilon(1e-4));
  }

  TEST_CASE("free-space loss errors and monotonicity") {
    CHECK_THROWS_WITH_AS(fspl_db(4900.0, 0.0), doctest::Contains("near-field singularity"), ValidationError);
    CHECK_THROWS_AS(fspl_db(4900.0, 0.5), ValidationError);
    CHECK_THROWS_AS(fspl_db(0.0, 100.0), ValidationError);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> f(100.0, 10000.0), d(1.0, 1e6);
    for (int i = 0; i < 200; ++i) {
      const double ff = f(rng), dd = d(rng);
      CHECK(fspl_db(ff * 1.01, dd) > fspl_db(ff, dd));
      CHECK(fspl_db(ff, dd * 1.01) > fspl_db(ff, dd));
    }
  }

  TEST_CASE("two-ray model") {
    const double dc = two_ray_crossover_m(4900.0, 60.0, 2.0);
    CHECK(dc == doctest::Approx(24647.137).epsilon(1e-6));
    // 10 km is inside the crossover: the model is free space there.
    CHECK(two_ray_loss_db(4900.0, 10'000.0, 60.0, 2.0) == fspl_db(4900.0, 10'000.0));
    CHECK(two_ray_loss_db(4900.0, dc, 60.0, 2.0) == fspl_db(4900.0, dc));
    // Beyond the crossover: 40*log10(30000) - 20*log10(120).
    CHECK(two_ray_loss_db(4900.0, 30'000.0, 60.0, 2.0) == doctest::Approx(137.5012253).epsilon(1e-9));
    CHECK(two_ray_loss_db(4900.0, 10'000.0, 60.0, 2.0) < two_ray_loss_db(4900.0, 10'000.0, 2.0, 2.0));
    // Branches meet at the crossover.
    const double above = 40.0 * std::log10(dc) - 20.0 * std::log10(120.0);
    CHECK(above == doctest::Approx(fspl_db(4900.0, dc)).epsilon(1e-9));
    CHECK_THROWS_WITH_AS(two_ray_loss_db(4900.0, 100.0, 0.0, 2.0), doctest::Contains("positive heights"),
                         ValidationError);
  }

  TEST_CASE("two-ray loss is nonincreasing in each height") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> h(0.5, 80.0), d(1000.0, 50'000.0);
    for (int i = 0; i < 300; ++i) {
      const double ht = h(rng), hr = h(rng), dd = d(rng);
      const double base = two_ray_loss_db(4980.0, dd, ht, hr);
      CHECK(two_ray_loss_db(4980.0, dd, ht * 1.2, hr) <= base + 1e-9);
      CHECK(two_ray_loss_db(4980.0, dd, ht, hr * 1.2) <= base + 1e-9);
    }
  }

  TEST_CASE("rain attenuation") {
    Environment env = dry();
    CHECK(rain_attenuation_db(env, 5000.0) == 0.0);
    env.rain_rate_mm_per_h = 25.0;
    CHECK(rain_attenuation_db(env, 0.0) == 0.0);
    CHECK(rain_attenuation_db(env, 2000.0) == doctest::Approx(2.0 * 0.0002415 * std::pow(25.0, 1.5277)));
    double previous = 0.0;
    for (double r = 1.0; r <= 150.0; r += 1.0) {
      env.rain_rate_mm_per_h = r;
      const double a = rain_attenuation_db(env, 3000.0);
      CHECK(a > previous);
      previous = a;
    }
  }

  TEST_CASE("shipped rain coefficients match the P.838-3 fit at 4.98 GHz") {
    const auto fit = oracle::p838_vertical(4.98);
    CHECK(0.0002415 == doctest::Approx(fit.k).epsilon(1e-3));
    CHECK(1.5277 == doctest::Approx(fit.alpha).epsilon(1e-3));
    // The fit reproduces the recommendation's 5 GHz table row.
    const auto row = oracle::p838_vertical(5.0);
    CHECK(row.k == doctest::Approx(0.0002428).epsilon(1e-3));
    CHECK(row.alpha == doctest::Approx(1.5317).epsilon(1e-3));
  }

  TEST_CASE("environment validation") {
    Environment env = dry();
    env.rain_rate_mm_per_h = -1.0;
    CHECK_THROWS_AS(env.validate(), ValidationError);
    env = dry();
    env.rain_coeff_k = 0.0;
    CHECK_THROWS_AS(env.validate(), ValidationError);
    env = dry();
    env.misc_loss_db = -2.0;
    CHECK_THROWS_AS(env.validate(), ValidationError);
    CHECK(parse_propagation_model("two_ray") == PropagationModel::TwoRay);
    CHECK_THROWS_AS(parse_propagation_model("hata"), ValidationError);
  }

  TEST_CASE("link budget: dipoles at 1 km") {
    const GeoPoint a(32.0, -81.0, 10.0);
    const GeoPoint b = bandshare::geo::destination_point(a, 45.0, 1000.0);
    const auto report = link_budget(tx_at(a, HalfWaveDipole{}, 30.0), rx_at(b, HalfWaveDipole{}, -85.0), dry());
    const double expected = 30.0 + 2.15 + 2.15 - oracle::friis_loss_db(4900.0, 1000.0);
    CHECK(expected == doctest::Approx(-71.9517).epsilon(1e-6));
    CHECK(report.rx_power_dbm == doctest::Approx(expected).epsilon(1e-9));
    CHECK(report.covered);
    CHECK(report.margin_db == doctest::Approx(13.05).epsilon(1e-3));
  }

  TEST_CASE("link budget: zero-loss geometry returns tx power") {
    // Vertical separation of c/(4*pi*f) at 1 MHz gives 0 dB free-space loss.
    const double unit = kSpeedOfLightMps / (4.0 * std::numbers::pi * 1e6);
    const GeoPoint low(10.0, 10.0, 0.0);
    const auto report =
        link_budget(tx_at(low, Isotropic{}, 20.0, 1.0), rx_at(low.with_height(unit), Isotropic{}, -90.0, 1.0), dry());
    CHECK(report.distance_m == doctest::Approx(unit));
    CHECK(report.rx_power_dbm == doctest::Approx(20.0).epsilon(1e-12));
  }

  TEST_CASE("link budget: rain larger than the margin uncovers the link") {
    const GeoPoint a(32.0, -81.0, 10.0);
    const GeoPoint b = bandshare::geo::destination_point(a, 45.0, 1000.0).with_height(10.0);
    Environment env = dry();
    const auto clear = link_budget(tx_at(a, HalfWaveDipole{}, 30.0), rx_at(b, HalfWaveDipole{}, -85.0), env);
    REQUIRE(clear.covered);
    // Choose k so that the rain loss over 1 km is margin + 1 dB.
    env.rain_rate_mm_per_h = 10.0;
    env.rain_coeff_alpha = 1.0;
    env.rain_coeff_k = (clear.margin_db + 1.0) / 10.0;
    const auto wet = link_budget(tx_at(a, HalfWaveDipole{}, 30.0), rx_at(b, HalfWaveDipole{}, -85.0), env);
    CHECK(wet.rain_loss_db > clear.margin_db);
    CHECK_FALSE(wet.covered);
  }

  TEST_CASE("link budget identity and symmetry on random links") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> lat(25.0, 45.0), lon(-120.0, -70.0), h(1.0, 80.0), brg(0.0, 360.0),
        dist(10.0, 40'000.0), rain(0.0, 100.0), misc(0.0, 10.0);
    const AntennaPattern patterns[] = {Isotropic{}, HalfWaveDipole{}, DirectionalSector{}};
    for (int i = 0; i < 300; ++i) {
      const GeoPoint a(lat(rng), lon(rng), h(rng));
      const GeoPoint b = bandshare::geo::destination_point(a, brg(rng), dist(rng)).with_height(h(rng));
      Environment env = dry();
      env.propagation_model = i % 2 ? PropagationModel::TwoRay : PropagationModel::FreeSpace;
      env.rain_rate_mm_per_h = rain(rng);
      env.misc_loss_db = misc(rng);
      const auto& pa = patterns[i % 3];
      const auto& pb = patterns[(i / 3) % 3];
      const auto r = link_budget(tx_at(a, pa, 30.0), rx_at(b, pb, -85.0), env);
      const double identity =
          r.tx_power_dbm + r.tx_gain_dbi + r.rx_gain_dbi - r.path_loss_db - r.rain_loss_db - r.misc_loss_db;
      CHECK(std::abs(r.rx_power_dbm - identity) <= 1e-9);
      CHECK(r.covered == (r.rx_power_dbm >= r.sensitivity_dbm));
      CHECK(r.margin_db == r.rx_power_dbm - r.sensitivity_dbm);
      const auto swapped = link_budget(tx_at(b, pb, 30.0), rx_at(a, pa, -85.0), env);
      CHECK(swapped.path_loss_db == r.path_loss_db);
    }
  }

  TEST_CASE("received power falls with distance along a bearing") {
    const GeoPoint a(32.0, -81.0, 2.0);
    double previous = 1e9;
    for (double d = 10.0; d <= 50'000.0; d *= 1.3) {
      const auto r = link_budget(tx_at(a, Isotropic{}, 30.0),
                                 rx_at(bandshare::geo::destination_point(a, 70.0, d), Isotropic{}, -85.0), dry());
      CHECK(r.rx_power_dbm < previous);
      previous = r.rx_power_dbm;
    }
  }

  TEST_CASE("link budget errors") {
    const GeoPoint a(32.0, -81.0, 2.0);
    CHECK_THROWS_WITH_AS(link_budget(tx_at(a, Isotropic{}, 30.0), rx_at(a, Isotropic{}, -85.0), dry()),
                         doctest::Contains("degenerate link"), ValidationError);
    const GeoPoint b = bandshare::geo::destination_point(a, 0.0, 100.0);
    CHECK_THROWS_AS(link_budget(rx_at(a, Isotropic{}, -85.0), rx_at(b, Isotropic{}, -85.0), dry()),
                    ValidationError);
    CHECK_THROWS_AS(link_budget(tx_at(a, Isotropic{}, 30.0), rx_at(b, Isotropic{}, -85.0, 4980.0), dry()),
                    ValidationError);
    // Clamped variant evaluates at the near-field limit instead.
    const auto clamped = link_budget_clamped(tx_at(a, Isotropic{}, 30.0), rx_at(a, Isotropic{}, -85.0), dry());
    CHECK(clamped.path_loss_db == fspl_db(4900.0, kNearFieldLimitM));
  }
}
