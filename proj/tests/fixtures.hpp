#pragma once

#include <string>

#include <fmt/core.h>

#include "bandshare/cli.hpp"
#include "bandshare/scenario.hpp"

namespace fixture {

inline std::string scenario_path(const std::string& name) {
  return std::string(BANDSHARE_DATA_DIR) + "/scenarios/" + name + ".scn";
}

inline bandshare::Scenario bundled(const std::string& name) {
  return bandshare::cli::load_scenario_file(scenario_path(name));
}

/// Isotropic ground transmitter over a small grid, no rain, free space.
inline std::string small_text(double power_w = 1.0, double span_m = 4000.0, double resolution_m = 100.0) {
  return fmt::format(
      "scenario.name = small\n"
      "tx.lat_deg = 32.0\n"
      "tx.lon_deg = -81.0\n"
      "tx.height_m = 2\n"
      "tx.power_w = {}\n"
      "tx.power_class = high\n"
      "tx.channels = 12,13\n"
      "tx.antenna = isotropic\n"
      "rx.sensitivity_dbm = -85\n"
      "env.rain_k = 0.0002415\n"
      "env.rain_alpha = 1.5277\n"
      "grid.span_m = {}\n"
      "grid.resolution_m = {}\n",
      power_w, span_m, resolution_m);
}

inline bandshare::Scenario small(double power_w = 1.0, double span_m = 4000.0, double resolution_m = 100.0) {
  return bandshare::parse_scenario(small_text(power_w, span_m, resolution_m));
}

}  // namespace fixture
