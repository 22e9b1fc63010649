#include "bandshare/report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "json.hpp"

namespace bandshare::report {

namespace {

constexpr double kMetersPerMile = 1609.344;

std::string join_channels(const std::vector<int>& members) {
  std::string out;
  for (std::size_t i = 0; i < members.size(); ++i) out += (i ? "," : "") + std::to_string(members[i]);
  return out;
}

const RxSite* find_site(const Scenario& scenario, int id) {
  for (const auto& site : scenario.rx_sites) {
    if (site.id == id) return &site;
  }
  return nullptr;
}

}  // namespace

std::string write_raster_csv(const coverage::CoverageRaster& raster) {
  std::string out = "lat_deg,lon_deg,rx_power_dbm,covered\n";
  out.reserve(out.size() + raster.size() * 40);
  for (std::size_t i = 0; i < raster.size(); ++i) {
    out += fmt::format("{:.6f},{:.6f},{:.2f},{}\n", raster.cells[i].lat_deg(), raster.cells[i].lon_deg(),
                       raster.rx_power_dbm[i], raster.covered[i] ? 1 : 0);
  }
  return out;
}

std::string write_coverage_geojson(const coverage::CoverageRaster& raster) {
  using nlohmann::json;
  const double half_lat = 0.5 * raster.shape.lat_step_deg;
  const double half_lon = 0.5 * raster.shape.lon_step_deg;
  json features = json::array();
  for (std::size_t i = 0; i < raster.size(); ++i) {
    if (!raster.covered[i]) continue;
    const double lat = raster.cells[i].lat_deg();
    const double lon = raster.cells[i].lon_deg();
    const double south = std::max(-90.0, lat - half_lat);
    const double north = std::min(90.0, lat + half_lat);
    // Exterior ring counterclockwise, first vertex repeated.
    json ring = json::array({json::array({lon - half_lon, south}), json::array({lon + half_lon, south}),
                             json::array({lon + half_lon, north}), json::array({lon - half_lon, north}),
                             json::array({lon - half_lon, south})});
    features.push_back({
        {"type", "Feature"},
        {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
        {"properties",
         {{"row", i / raster.shape.cols},
          {"col", i % raster.shape.cols},
          {"rx_power_dbm", std::round(raster.rx_power_dbm[i] * 100.0) / 100.0}}},
    });
  }
  json doc = {{"type", "FeatureCollection"}, {"features", std::move(features)}};
  return doc.dump() + "\n";
}

std::vector<double> summary_bearings(const Scenario& scenario) {
  std::vector<double> bearings;
  for (int b = 0; b < 360; b += 45) bearings.push_back(b);
  if (scenario.tx_antenna == rf::AntennaKind::Directional) {
    const double boresight = geo::normalize_bearing_deg(scenario.sector.boresight_az_deg);
    if (std::find(bearings.begin(), bearings.end(), boresight) == bearings.end()) {
      bearings.push_back(boresight);
    }
  }
  return bearings;
}

FeasibilityReport build_feasibility_report(const Scenario& scenario,
                                           const sharing::IncumbentRegistry& registry,
                                           std::optional<regulatory::ComplianceReport> mask,
                                           const ReportOptions& options) {
  FeasibilityReport r;
  r.scenario_name = scenario.name;
  r.tx = scenario.tx_location;
  r.freq_mhz = scenario.freq_mhz();
  r.verdict = sharing::evaluate_site(scenario.tx_location, registry);
  if (!registry.empty()) {
    const auto [zone, distance] = sharing::nearest_incumbent(scenario.tx_location, registry);
    r.nearest = NearestIncumbent{zone->name, distance};
  }
  r.channel = scenario.channel;
  r.power = regulatory::check_tx_power(scenario.tx_power_w, scenario.channel.total_bandwidth_mhz,
                                       scenario.power_class);
  r.mask = std::move(mask);
  if (!scenario.rx_sites.empty()) r.rx_reports = coverage::evaluate_rx_sites(scenario);
  if (options.include_coverage) {
    const auto raster = coverage::compute_coverage(scenario, options.threads);
    const auto bearings = summary_bearings(scenario);
    r.coverage = coverage::summarize(raster, coverage::radius_samples(scenario, bearings));
  }
  return r;
}

std::string format_compliance(const regulatory::ComplianceReport& c) {
  std::string out = fmt::format(
      "Emission mask {}: {} (reference {:.2f} dBm/MHz, {} in-band, {} out-of-band samples)\n", c.mask_name,
      c.compliant() ? "COMPLIANT" : "NON-COMPLIANT", c.reference_psd_dbm_per_mhz, c.in_band_samples,
      c.out_of_band_samples);
  for (const auto& v : c.violations) {
    out += fmt::format(
        "  violation at {:.3f} MHz: {:.2f} dBm/MHz, {:.3f} MHz past edge, limit {:.2f} dBm/MHz "
        "({:.2f} dB required), over by {:.2f} dB\n",
        v.freq_mhz, v.psd_dbm_per_mhz, v.edge_offset_mhz, v.limit_dbm_per_mhz, v.required_attenuation_db,
        v.deficit_db);
  }
  return out;
}

std::string format_rx_reports(const Scenario& scenario,
                              const std::vector<std::pair<int, rf::LinkReport>>& reports) {
  std::string out = fmt::format("{:>3}  {:<24} {:>9} {:>9} {:>8} {:>8} {:>9} {:>8}  {}\n", "id", "label",
                                "dist_km", "loss_db", "gtx_dbi", "grx_dbi", "rx_dbm", "margin", "status");
  for (const auto& [id, link] : reports) {
    const RxSite* site = find_site(scenario, id);
    out += fmt::format("{:>3}  {:<24} {:>9.3f} {:>9.2f} {:>8.2f} {:>8.2f} {:>9.2f} {:>8.2f}  {}\n", id,
                       site ? site->label : "", link.distance_m / 1000.0,
                       link.path_loss_db + link.rain_loss_db + link.misc_loss_db, link.tx_gain_dbi,
                       link.rx_gain_dbi, link.rx_power_dbm, link.margin_db,
                       link.covered ? "covered" : "NOT COVERED");
  }
  return out;
}

std::string format_report_text(const FeasibilityReport& r) {
  std::string out;
  if (!r.scenario_name.empty()) out += fmt::format("Scenario: {}\n", r.scenario_name);
  out += fmt::format("Transmitter: {:.6f}, {:.6f} at {:.1f} m, {:.1f} MHz\n", r.tx.lat_deg(), r.tx.lon_deg(),
                     r.tx.height_m(), r.freq_mhz);
  out += fmt::format("Channel: {} -> {} MHz aggregate [{:.1f}, {:.1f}] MHz\n", join_channels(r.channel.members),
                     r.channel.total_bandwidth_mhz, r.channel.lower_edge_mhz(), r.channel.upper_edge_mhz());
  out += fmt::format("Power: {} W against {} W limit: {} (margin {:.2f} dB)\n", r.power.tx_power_w,
                     r.power.limit_w, r.power.pass ? "PASS" : "FAIL", r.power.margin_db);
  if (r.mask) out += format_compliance(*r.mask);
  out += fmt::format("Incumbent verdict: {}\n", sharing::to_string(r.verdict.status));
  for (const auto& hit : r.verdict.triggering) {
    out += fmt::format("  inside {} ({}): {:.2f} km from center, {:.2f} km inside the protection radius\n",
                       hit.zone, sharing::to_string(hit.policy), hit.distance_m / 1000.0,
                       -hit.margin_m / 1000.0);
  }
  if (r.nearest) {
    out += fmt::format("Nearest incumbent: {} at {:.2f} km ({:.1f} mi)\n", r.nearest->zone,
                       r.nearest->distance_m / 1000.0, r.nearest->distance_m / kMetersPerMile);
  }
  if (!r.rx_reports.empty()) {
    out += "Rx sites:\n";
    for (const auto& [id, link] : r.rx_reports) {
      out += fmt::format("  Rx {}: {:.3f} km, rx {:.2f} dBm, margin {:.2f} dB, {}\n", id, link.distance_m / 1000.0,
                         link.rx_power_dbm, link.margin_db, link.covered ? "covered" : "NOT COVERED");
    }
  }
  if (r.coverage) {
    const auto& c = *r.coverage;
    out += fmt::format("Coverage: {} of {} cells ({:.1f}%), {:.2f} km2, rx power {:.2f} to {:.2f} dBm\n",
                       c.covered_cells, c.total_cells, 100.0 * c.covered_fraction, c.covered_area_m2 / 1e6,
                       c.min_rx_power_dbm, c.max_rx_power_dbm);
    for (const auto& s : c.radii) {
      out += fmt::format("  radius at {:5.1f} deg: {:.2f} km ({:.2f} mi)\n", s.bearing_deg, s.radius_m / 1000.0,
                         s.radius_m / kMetersPerMile);
    }
  }
  return out;
}

std::string format_report_json_lines(const FeasibilityReport& r) {
  using nlohmann::json;
  std::string out;
  const auto emit = [&](json record) { out += record.dump() + "\n"; };
  emit({{"record", "site"},
        {"scenario", r.scenario_name},
        {"lat_deg", r.tx.lat_deg()},
        {"lon_deg", r.tx.lon_deg()},
        {"height_m", r.tx.height_m()},
        {"freq_mhz", r.freq_mhz}});
  emit({{"record", "aggregation"},
        {"channels", r.channel.members},
        {"bandwidth_mhz", r.channel.total_bandwidth_mhz},
        {"center_mhz", r.channel.center_mhz}});
  emit({{"record", "power"},
        {"pass", r.power.pass},
        {"tx_power_w", r.power.tx_power_w},
        {"limit_w", r.power.limit_w},
        {"margin_db", r.power.margin_db}});
  if (r.mask) {
    emit({{"record", "mask"},
          {"mask", r.mask->mask_name},
          {"compliant", r.mask->compliant()},
          {"reference_psd_dbm_per_mhz", r.mask->reference_psd_dbm_per_mhz},
          {"violations", r.mask->violations.size()}});
  }
  json hits = json::array();
  for (const auto& hit : r.verdict.triggering) {
    hits.push_back({{"zone", hit.zone},
                    {"policy", sharing::to_string(hit.policy)},
                    {"distance_m", hit.distance_m},
                    {"margin_m", hit.margin_m}});
  }
  emit({{"record", "verdict"}, {"status", sharing::to_string(r.verdict.status)}, {"triggering", hits}});
  if (r.nearest) {
    emit({{"record", "nearest_incumbent"}, {"zone", r.nearest->zone}, {"distance_m", r.nearest->distance_m}});
  }
  for (const auto& [id, link] : r.rx_reports) {
    emit({{"record", "rx"},
          {"id", id},
          {"distance_m", link.distance_m},
          {"path_loss_db", link.path_loss_db},
          {"rain_loss_db", link.rain_loss_db},
          {"tx_gain_dbi", link.tx_gain_dbi},
          {"rx_gain_dbi", link.rx_gain_dbi},
          {"rx_power_dbm", link.rx_power_dbm},
          {"margin_db", link.margin_db},
          {"covered", link.covered}});
  }
  if (r.coverage) {
    const auto& c = *r.coverage;
    json radii = json::array();
    for (const auto& s : c.radii) radii.push_back({{"bearing_deg", s.bearing_deg}, {"radius_m", s.radius_m}});
    emit({{"record", "coverage"},
          {"total_cells", c.total_cells},
          {"covered_cells", c.covered_cells},
          {"covered_fraction", c.covered_fraction},
          {"covered_area_m2", c.covered_area_m2},
          {"max_rx_power_dbm", c.max_rx_power_dbm},
          {"min_rx_power_dbm", c.min_rx_power_dbm},
          {"radii", radii}});
  }
  return out;
}

}  // namespace bandshare::report
