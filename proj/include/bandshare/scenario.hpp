#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bandshare/geo.hpp"
#include "bandshare/regulatory.hpp"
#include "bandshare/rf.hpp"

namespace bandshare {

/// A fixed receiver location evaluated with its own antenna and sensitivity.
struct RxSite {
  int id = 0;  // 1-based, contiguous
  std::string label;
  geo::GeoPoint location;
  double sensitivity_dbm = 0.0;
  rf::AntennaKind antenna = rf::AntennaKind::Isotropic;
};

/// One transmitter, its regulatory selection, the receivers of interest and
/// the evaluation environment. Produced by parse_scenario with every default
/// materialized, so downstream code never applies defaults of its own.
struct Scenario {
  std::string name;

  geo::GeoPoint tx_location;
  double tx_power_w = 0.0;
  regulatory::PowerClass power_class = regulatory::PowerClass::High;
  std::vector<int> tx_channels;
  regulatory::AggregateChannel channel;  // derived from tx_channels
  rf::AntennaKind tx_antenna = rf::AntennaKind::Dipole;
  rf::DirectionalSector sector;  // used when tx_antenna is Directional
  bool tx_airborne = false;

  // Reference receiver used for rasters and radius probes: isotropic.
  double rx_sensitivity_dbm = 0.0;
  double rx_height_m = 2.0;
  std::vector<RxSite> rx_sites;

  rf::Environment environment;

  geo::BoundingBox grid_bbox;
  double grid_resolution_m = 100.0;
  double max_probe_range_m = 100'000.0;

  std::string registry_path = "incumbents_us.txt";
  std::string mask_name = "DSRC-A";
  std::string mask_dir = "masks";
  std::string psd_path;  // empty: no PSD measurement supplied

  double freq_mhz() const { return channel.center_mhz; }
  double tx_power_dbm() const { return rf::watts_to_dbm(tx_power_w); }

  rf::AntennaPattern tx_antenna_pattern() const;
  rf::RadioEndpoint tx_endpoint() const;
  /// Isotropic receiver at `where` (ground position) and the reference height.
  rf::RadioEndpoint reference_receiver(const geo::GeoPoint& where) const;
  rf::RadioEndpoint rx_endpoint(const RxSite& site) const;

  /// Re-derives `channel` from `tx_channels` and checks every cross-field
  /// invariant (band edges, power limit, ground-based operation, receiver
  /// ids, grid geometry). Throws ValidationError naming the offending key.
  void validate();
};

/// Parses the flat "section.key = value" schema documented in docs/scenario.md.
Scenario parse_scenario(std::string_view text);

/// Writes every field, defaults included, in the parse_scenario schema.
/// parse_scenario(serialize_scenario(s)) reproduces s exactly.
std::string serialize_scenario(const Scenario& scenario);

}  // namespace bandshare
