#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bandshare/geo.hpp"
#include "bandshare/rf.hpp"
#include "bandshare/scenario.hpp"

namespace bandshare::coverage {

/// Received power of the scenario's reference receiver over a regular grid.
struct CoverageRaster {
  geo::BoundingBox bbox;
  double resolution_m = 0.0;
  geo::GridShape shape;
  double sensitivity_dbm = 0.0;
  std::vector<geo::GeoPoint> cells;  // row-major, see geo::make_grid
  std::vector<double> rx_power_dbm;
  std::vector<std::uint8_t> covered;  // 1 iff rx_power_dbm >= sensitivity_dbm

  std::size_t size() const { return cells.size(); }
};

/// Evaluates one link per grid cell on `threads` workers (0 picks the
/// hardware concurrency). The result does not depend on the worker count.
CoverageRaster compute_coverage(const Scenario& scenario, unsigned threads = 0);

/// One link report per Rx site, with the site's own antenna and sensitivity.
std::vector<std::pair<int, rf::LinkReport>> evaluate_rx_sites(const Scenario& scenario);

/// Largest probe distance d along `bearing_deg` such that every probe at
/// k * grid resolution <= d is covered; 0 when the first probe is not.
/// Probing stops at the scenario's max probe range.
double coverage_radius_m(const Scenario& scenario, double bearing_deg);

struct RadiusSample {
  double bearing_deg = 0.0;
  double radius_m = 0.0;
};

std::vector<RadiusSample> radius_samples(const Scenario& scenario, std::span<const double> bearings);

struct CoverageSummary {
  std::size_t total_cells = 0;
  std::size_t covered_cells = 0;
  double covered_fraction = 0.0;
  double max_rx_power_dbm = 0.0;
  double min_rx_power_dbm = 0.0;
  double cell_area_m2 = 0.0;  // at the grid's mid-latitude
  double covered_area_m2 = 0.0;
  std::vector<RadiusSample> radii;
};

CoverageSummary summarize(const CoverageRaster& raster, std::vector<RadiusSample> radii);

}  // namespace bandshare::coverage
