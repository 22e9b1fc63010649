#include "bandshare/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "bandshare/error.hpp"

namespace bandshare::coverage {

namespace {

constexpr std::size_t kCellsPerTask = 256;

}  // namespace

CoverageRaster compute_coverage(const Scenario& scenario, unsigned threads) {
  CoverageRaster raster;
  raster.bbox = scenario.grid_bbox;
  raster.resolution_m = scenario.grid_resolution_m;
  raster.shape = geo::grid_shape(scenario.grid_bbox, scenario.grid_resolution_m);
  raster.sensitivity_dbm = scenario.rx_sensitivity_dbm;
  raster.cells = geo::make_grid(scenario.grid_bbox, scenario.grid_resolution_m, scenario.rx_height_m);
  raster.rx_power_dbm.assign(raster.cells.size(), 0.0);
  raster.covered.assign(raster.cells.size(), 0);

  const rf::RadioEndpoint tx = scenario.tx_endpoint();
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    try {
      for (;;) {
        const std::size_t begin = next.fetch_add(kCellsPerTask);
        if (begin >= raster.cells.size()) return;
        const std::size_t end = std::min(begin + kCellsPerTask, raster.cells.size());
        for (std::size_t i = begin; i < end; ++i) {
          const auto report =
              rf::link_budget_clamped(tx, scenario.reference_receiver(raster.cells[i]), scenario.environment);
          raster.rx_power_dbm[i] = report.rx_power_dbm;
          raster.covered[i] = report.covered ? 1 : 0;
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = raster.cells.size();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
  return raster;
}

std::vector<std::pair<int, rf::LinkReport>> evaluate_rx_sites(const Scenario& scenario) {
  if (scenario.rx_sites.empty()) throw ValidationError("scenario has no rx sites");
  const rf::RadioEndpoint tx = scenario.tx_endpoint();
  std::vector<std::pair<int, rf::LinkReport>> reports;
  reports.reserve(scenario.rx_sites.size());
  for (const auto& site : scenario.rx_sites) {
    reports.emplace_back(site.id, rf::link_budget(tx, scenario.rx_endpoint(site), scenario.environment));
  }
  return reports;
}

double coverage_radius_m(const Scenario& scenario, double bearing_deg) {
  const rf::RadioEndpoint tx = scenario.tx_endpoint();
  const double step = scenario.grid_resolution_m;
  double radius = 0.0;
  // Walk every probe: coverage need not be monotone in distance (sector
  // elevation roll-off near a tall mast), and the radius is defined by the
  // first gap.
  for (std::size_t k = 1;; ++k) {
    const double d = step * static_cast<double>(k);
    if (d > scenario.max_probe_range_m) break;
    const geo::GeoPoint probe = geo::destination_point(scenario.tx_location, bearing_deg, d);
    const auto report =
        rf::link_budget_clamped(tx, scenario.reference_receiver(probe), scenario.environment);
    if (!report.covered) break;
    radius = d;
  }
  return radius;
}

std::vector<RadiusSample> radius_samples(const Scenario& scenario, std::span<const double> bearings) {
  std::vector<RadiusSample> out;
  out.reserve(bearings.size());
  for (double b : bearings) out.push_back({b, coverage_radius_m(scenario, b)});
  return out;
}

CoverageSummary summarize(const CoverageRaster& raster, std::vector<RadiusSample> radii) {
  CoverageSummary s;
  s.total_cells = raster.size();
  s.covered_cells = static_cast<std::size_t>(std::count(raster.covered.begin(), raster.covered.end(), 1));
  s.covered_fraction =
      s.total_cells == 0 ? 0.0 : static_cast<double>(s.covered_cells) / static_cast<double>(s.total_cells);
  if (!raster.rx_power_dbm.empty()) {
    const auto [lo, hi] = std::minmax_element(raster.rx_power_dbm.begin(), raster.rx_power_dbm.end());
    s.min_rx_power_dbm = *lo;
    s.max_rx_power_dbm = *hi;
  }
  s.cell_area_m2 = raster.shape.lat_step_m * raster.shape.lon_step_m;
  s.covered_area_m2 = static_cast<double>(s.covered_cells) * s.cell_area_m2;
  s.radii = std::move(radii);
  return s;
}

}  // namespace bandshare::coverage
