#pragma once

#include <optional>
#include <string_view>
#include <variant>

#include "bandshare/geo.hpp"

namespace bandshare::rf {

inline constexpr double kSpeedOfLightMps = 299'792'458.0;
/// Links shorter than this are inside the antennas' near field and rejected.
inline constexpr double kNearFieldLimitM = 1.0;

/// Peak gain of a half-wave dipole over isotropic.
inline constexpr double kDipolePeakGainDbi = 2.15;
/// Depth of the dipole's axial null below its peak.
inline constexpr double kDipoleNullFloorDb = 40.0;

struct Isotropic {};

/// Vertical half-wave dipole, omnidirectional in azimuth.
struct HalfWaveDipole {};

/// Parametric sector antenna: quadratic roll-off in azimuth and elevation
/// (3 dB down at half of each beamwidth), floored by the front-to-back ratio.
struct DirectionalSector {
  double boresight_az_deg = 0.0;
  double az_beamwidth_3db_deg = 65.0;
  double el_beamwidth_3db_deg = 10.0;
  double max_gain_dbi = 15.0;
  double front_to_back_db = 25.0;

  void validate() const;
  friend bool operator==(const DirectionalSector&, const DirectionalSector&) = default;
};

using AntennaPattern = std::variant<Isotropic, HalfWaveDipole, DirectionalSector>;

enum class AntennaKind { Isotropic, Dipole, Directional };

AntennaKind parse_antenna_kind(std::string_view text);
std::string_view to_string(AntennaKind kind);

/// Throws ValidationError when az is outside [0, 360) or el outside [-90, 90]
/// ("invalid direction"), or when a sector pattern is malformed.
double antenna_gain_dbi(const AntennaPattern& pattern, double az_deg, double el_deg);

/// Free-space path loss 20*log10(4*pi*d*f/c). Distances under the near-field
/// limit throw ValidationError("near-field singularity").
double fspl_db(double freq_mhz, double distance_m);

/// Breakpoint distance 4*pi*h_tx*h_rx/lambda of the two-ray model.
double two_ray_crossover_m(double freq_mhz, double h_tx_m, double h_rx_m);

/// Free space up to the crossover distance, 40*log10(d) - 20*log10(h_tx*h_rx) beyond.
/// The two branches meet at the crossover.
double two_ray_loss_db(double freq_mhz, double distance_m, double h_tx_m, double h_rx_m);

enum class PropagationModel { FreeSpace, TwoRay };

PropagationModel parse_propagation_model(std::string_view text);
std::string_view to_string(PropagationModel model);

struct Environment {
  PropagationModel propagation_model = PropagationModel::FreeSpace;
  double rain_rate_mm_per_h = 0.0;
  double rain_coeff_k = 0.0;  // power-law specific-attenuation coefficients
  double rain_coeff_alpha = 0.0;
  double misc_loss_db = 0.0;

  void validate() const;
};

/// Power-law rain loss: k * R^alpha dB/km over the path length.
double rain_attenuation_db(const Environment& env, double distance_m);

struct RadioEndpoint {
  geo::GeoPoint location;  // height_m is the antenna height
  AntennaPattern antenna;
  double freq_mhz = 0.0;
  std::optional<double> tx_power_dbm;
  std::optional<double> sensitivity_dbm;
};

struct LinkReport {
  double ground_distance_m = 0.0;
  double distance_m = 0.0;  // slant
  double tx_power_dbm = 0.0;
  double tx_gain_dbi = 0.0;
  double rx_gain_dbi = 0.0;
  double path_loss_db = 0.0;
  double rain_loss_db = 0.0;
  double misc_loss_db = 0.0;
  double rx_power_dbm = 0.0;
  double sensitivity_dbm = 0.0;
  double margin_db = 0.0;
  bool covered = false;
};

/// End-to-end budget along the slant path between two endpoints.
LinkReport link_budget(const RadioEndpoint& tx, const RadioEndpoint& rx, const Environment& env);

/// Same budget, but a slant path shorter than the near-field limit is
/// evaluated at the limit instead of throwing. Used where receivers are
/// sampled on a grid that may land on the transmitter.
LinkReport link_budget_clamped(const RadioEndpoint& tx, const RadioEndpoint& rx,
                               const Environment& env);

double watts_to_dbm(double watts);
double dbm_to_watts(double dbm);

}  // namespace bandshare::rf
