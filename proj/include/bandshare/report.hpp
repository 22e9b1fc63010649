#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bandshare/coverage.hpp"
#include "bandshare/regulatory.hpp"
#include "bandshare/rf.hpp"
#include "bandshare/scenario.hpp"
#include "bandshare/sharing.hpp"

namespace bandshare::report {

/// Header "lat_deg,lon_deg,rx_power_dbm,covered", one row per cell in raster order.
std::string write_raster_csv(const coverage::CoverageRaster& raster);

/// FeatureCollection of covered cells as closed lon/lat quads.
std::string write_coverage_geojson(const coverage::CoverageRaster& raster);

struct NearestIncumbent {
  std::string zone;
  double distance_m = 0.0;
};

/// Everything known about one candidate site. Optional sections are present
/// only when their inputs were supplied.
struct FeasibilityReport {
  std::string scenario_name;
  geo::GeoPoint tx;
  double freq_mhz = 0.0;
  sharing::FeasibilityVerdict verdict;
  std::optional<NearestIncumbent> nearest;
  regulatory::AggregateChannel channel;
  regulatory::PowerCheck power;
  std::optional<regulatory::ComplianceReport> mask;
  std::vector<std::pair<int, rf::LinkReport>> rx_reports;
  std::optional<coverage::CoverageSummary> coverage;
};

struct ReportOptions {
  bool include_coverage = true;
  unsigned threads = 0;
};

FeasibilityReport build_feasibility_report(const Scenario& scenario,
                                           const sharing::IncumbentRegistry& registry,
                                           std::optional<regulatory::ComplianceReport> mask,
                                           const ReportOptions& options = {});

/// Bearings sampled for the coverage summary: every 45 degrees, plus the
/// sector boresight when the transmitter is directional.
std::vector<double> summary_bearings(const Scenario& scenario);

std::string format_report_text(const FeasibilityReport& report);

/// One JSON object per line, each tagged with a "record" field.
std::string format_report_json_lines(const FeasibilityReport& report);

std::string format_rx_reports(const Scenario& scenario,
                              const std::vector<std::pair<int, rf::LinkReport>>& reports);

std::string format_compliance(const regulatory::ComplianceReport& report);

}  // namespace bandshare::report
