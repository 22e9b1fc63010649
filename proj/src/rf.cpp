#include "bandshare/rf.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "bandshare/error.hpp"

namespace bandshare::rf {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// 12 * (offset/beamwidth)^2 puts the 3 dB point at half the beamwidth.
constexpr double kSectorRollOffDb = 12.0;

void check_direction(double az_deg, double el_deg) {
  if (!(az_deg >= 0.0 && az_deg < 360.0) || !(el_deg >= -90.0 && el_deg <= 90.0)) {
    throw ValidationError(fmt::format("invalid direction: az {} deg, el {} deg", az_deg, el_deg));
  }
}

double dipole_gain_dbi(double el_deg) {
  const double floor_dbi = kDipolePeakGainDbi - kDipoleNullFloorDb;
  const double el = el_deg * kDegToRad;
  const double cos_el = std::cos(el);
  // cos(pi/2) is not exactly zero in floating point; treat the axis explicitly.
  if (std::abs(el_deg) == 90.0 || cos_el < 1e-12) return floor_dbi;
  const double field = std::abs(std::cos(0.5 * std::numbers::pi * std::sin(el)) / cos_el);
  if (field <= 0.0) return floor_dbi;
  return std::max(floor_dbi, kDipolePeakGainDbi + 20.0 * std::log10(field));
}

double sector_gain_dbi(const DirectionalSector& s, double az_deg, double el_deg) {
  s.validate();
  double offset = std::fmod(std::abs(az_deg - s.boresight_az_deg), 360.0);
  if (offset > 180.0) offset = 360.0 - offset;
  const double a = offset / s.az_beamwidth_3db_deg;
  const double e = el_deg / s.el_beamwidth_3db_deg;
  const double attenuation = std::min(kSectorRollOffDb * (a * a + e * e), s.front_to_back_db);
  return s.max_gain_dbi - attenuation;
}

struct Geometry {
  double ground_m = 0.0;
  double slant_m = 0.0;
  double tx_az_deg = 0.0;
  double tx_el_deg = 0.0;
  double rx_az_deg = 0.0;
  double rx_el_deg = 0.0;
};

Geometry link_geometry(const geo::GeoPoint& tx, const geo::GeoPoint& rx) {
  Geometry g;
  g.ground_m = geo::great_circle_distance_m(tx, rx);
  const double dh = rx.height_m() - tx.height_m();
  g.slant_m = std::hypot(g.ground_m, dh);
  const bool same_spot = tx.lat_deg() == rx.lat_deg() && tx.lon_deg() == rx.lon_deg();
  if (!same_spot) {
    g.tx_az_deg = geo::initial_bearing_deg(tx, rx);
    g.rx_az_deg = geo::initial_bearing_deg(rx, tx);
  }
  g.tx_el_deg = std::atan2(dh, g.ground_m) * kRadToDeg;
  g.rx_el_deg = std::atan2(-dh, g.ground_m) * kRadToDeg;
  return g;
}

LinkReport evaluate(const RadioEndpoint& tx, const RadioEndpoint& rx, const Environment& env,
                    bool clamp_near_field) {
  if (!tx.tx_power_dbm) throw ValidationError("link budget: transmitter has no tx power");
  if (!rx.sensitivity_dbm) throw ValidationError("link budget: receiver has no sensitivity");
  if (tx.freq_mhz != rx.freq_mhz) {
    throw ValidationError(
        fmt::format("link budget: endpoint frequencies differ ({} vs {} MHz)", tx.freq_mhz, rx.freq_mhz));
  }
  env.validate();
  const Geometry g = link_geometry(tx.location, rx.location);
  if (g.slant_m == 0.0 && !clamp_near_field) {
    throw ValidationError("degenerate link: coincident endpoints");
  }
  const double path_m = clamp_near_field ? std::max(g.slant_m, kNearFieldLimitM) : g.slant_m;

  LinkReport r;
  r.ground_distance_m = g.ground_m;
  r.distance_m = g.slant_m;
  r.tx_power_dbm = *tx.tx_power_dbm;
  r.tx_gain_dbi = antenna_gain_dbi(tx.antenna, g.tx_az_deg, g.tx_el_deg);
  r.rx_gain_dbi = antenna_gain_dbi(rx.antenna, g.rx_az_deg, g.rx_el_deg);
  switch (env.propagation_model) {
    case PropagationModel::FreeSpace:
      r.path_loss_db = fspl_db(tx.freq_mhz, path_m);
      break;
    case PropagationModel::TwoRay:
      r.path_loss_db =
          two_ray_loss_db(tx.freq_mhz, path_m, tx.location.height_m(), rx.location.height_m());
      break;
  }
  r.rain_loss_db = rain_attenuation_db(env, path_m);
  r.misc_loss_db = env.misc_loss_db;
  r.rx_power_dbm =
      r.tx_power_dbm + r.tx_gain_dbi + r.rx_gain_dbi - r.path_loss_db - r.rain_loss_db - r.misc_loss_db;
  r.sensitivity_dbm = *rx.sensitivity_dbm;
  r.margin_db = r.rx_power_dbm - r.sensitivity_dbm;
  r.covered = r.rx_power_dbm >= r.sensitivity_dbm;
  return r;
}

}  // namespace

void DirectionalSector::validate() const {
  const auto beamwidth_ok = [](double bw) { return bw > 0.0 && bw < 360.0; };
  if (!beamwidth_ok(az_beamwidth_3db_deg) || !beamwidth_ok(el_beamwidth_3db_deg)) {
    throw ValidationError("sector beamwidths must lie in (0, 360) deg");
  }
  if (!(front_to_back_db >= 0.0) || !std::isfinite(front_to_back_db)) {
    throw ValidationError("sector front-to-back ratio must be finite and >= 0 dB");
  }
  if (!std::isfinite(max_gain_dbi)) throw ValidationError("sector max gain must be finite");
  if (!std::isfinite(boresight_az_deg)) throw ValidationError("sector boresight must be finite");
}

AntennaKind parse_antenna_kind(std::string_view text) {
  if (text == "isotropic") return AntennaKind::Isotropic;
  if (text == "dipole") return AntennaKind::Dipole;
  if (text == "directional") return AntennaKind::Directional;
  throw ValidationError(
      fmt::format("unknown antenna '{}' (expected isotropic, dipole or directional)", text));
}

std::string_view to_string(AntennaKind kind) {
  switch (kind) {
    case AntennaKind::Isotropic: return "isotropic";
    case AntennaKind::Dipole: return "dipole";
    case AntennaKind::Directional: return "directional";
  }
  return "?";
}

double antenna_gain_dbi(const AntennaPattern& pattern, double az_deg, double el_deg) {
  check_direction(az_deg, el_deg);
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Isotropic>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, HalfWaveDipole>) {
          return dipole_gain_dbi(el_deg);
        } else {
          return sector_gain_dbi(p, az_deg, el_deg);
        }
      },
      pattern);
}

double fspl_db(double freq_mhz, double distance_m) {
  if (!(freq_mhz > 0.0)) throw ValidationError("frequency must be > 0");
  if (!(distance_m >= kNearFieldLimitM)) {
    throw ValidationError(
        fmt::format("near-field singularity: distance {} m below {} m", distance_m, kNearFieldLimitM));
  }
  return 20.0 * std::log10(4.0 * std::numbers::pi * distance_m * freq_mhz * 1e6 / kSpeedOfLightMps);
}

double two_ray_crossover_m(double freq_mhz, double h_tx_m, double h_rx_m) {
  const double wavelength = kSpeedOfLightMps / (freq_mhz * 1e6);
  return 4.0 * std::numbers::pi * h_tx_m * h_rx_m / wavelength;
}

double two_ray_loss_db(double freq_mhz, double distance_m, double h_tx_m, double h_rx_m) {
  if (!(h_tx_m > 0.0) || !(h_rx_m > 0.0)) {
    throw ValidationError("two-ray requires positive heights");
  }
  const double free_space = fspl_db(freq_mhz, distance_m);
  if (distance_m <= two_ray_crossover_m(freq_mhz, h_tx_m, h_rx_m)) return free_space;
  return 40.0 * std::log10(distance_m) - 20.0 * std::log10(h_tx_m * h_rx_m);
}

PropagationModel parse_propagation_model(std::string_view text) {
  if (text == "free_space") return PropagationModel::FreeSpace;
  if (text == "two_ray") return PropagationModel::TwoRay;
  throw ValidationError(
      fmt::format("unknown propagation model '{}' (expected free_space or two_ray)", text));
}

std::string_view to_string(PropagationModel model) {
  return model == PropagationModel::FreeSpace ? "free_space" : "two_ray";
}

void Environment::validate() const {
  if (!(rain_rate_mm_per_h >= 0.0) || !std::isfinite(rain_rate_mm_per_h)) {
    throw ValidationError("rain rate must be finite and >= 0 mm/h");
  }
  if (!(rain_coeff_k > 0.0) || !std::isfinite(rain_coeff_k)) {
    throw ValidationError("rain coefficient k must be finite and > 0");
  }
  if (!(rain_coeff_alpha > 0.0) || !std::isfinite(rain_coeff_alpha)) {
    throw ValidationError("rain coefficient alpha must be finite and > 0");
  }
  if (!(misc_loss_db >= 0.0) || !std::isfinite(misc_loss_db)) {
    throw ValidationError("misc loss must be finite and >= 0 dB");
  }
}

double rain_attenuation_db(const Environment& env, double distance_m) {
  if (!(distance_m >= 0.0)) throw ValidationError("rain path length must be >= 0");
  const double specific_db_per_km = env.rain_coeff_k * std::pow(env.rain_rate_mm_per_h, env.rain_coeff_alpha);
  return specific_db_per_km * (distance_m / 1000.0);
}

LinkReport link_budget(const RadioEndpoint& tx, const RadioEndpoint& rx, const Environment& env) {
  return evaluate(tx, rx, env, false);
}

LinkReport link_budget_clamped(const RadioEndpoint& tx, const RadioEndpoint& rx,
                               const Environment& env) {
  return evaluate(tx, rx, env, true);
}

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts * 1000.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

}  // namespace bandshare::rf
