#include "bandshare/scenario.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <set>

#include <fmt/core.h>

#include "bandshare/error.hpp"
#include "text_util.hpp"

namespace bandshare {

namespace {

constexpr double kDefaultGridSpanM = 30'000.0;

const std::set<std::string, std::less<>> kKnownKeys{
    "scenario.name",
    "tx.lat_deg",
    "tx.lon_deg",
    "tx.height_m",
    "tx.power_w",
    "tx.power_class",
    "tx.channels",
    "tx.freq_mhz",
    "tx.antenna",
    "tx.airborne",
    "tx.sector.boresight_az_deg",
    "tx.sector.az_beamwidth_deg",
    "tx.sector.el_beamwidth_deg",
    "tx.sector.max_gain_dbi",
    "tx.sector.front_to_back_db",
    "rx.sensitivity_dbm",
    "rx.height_m",
    "env.model",
    "env.rain_rate_mm_per_h",
    "env.rain_k",
    "env.rain_alpha",
    "env.misc_loss_db",
    "grid.resolution_m",
    "grid.span_m",
    "grid.min_lat_deg",
    "grid.min_lon_deg",
    "grid.max_lat_deg",
    "grid.max_lon_deg",
    "grid.max_probe_range_m",
    "registry.path",
    "mask.name",
    "mask.dir",
    "psd.path",
};

// Checked in this order so an empty file reports tx.lat_deg first.
const std::vector<std::string> kRequiredKeys{
    "tx.lat_deg",     "tx.lon_deg",         "tx.height_m", "tx.power_w", "tx.power_class",
    "tx.channels",    "rx.sensitivity_dbm", "env.rain_k",  "env.rain_alpha",
};

const std::set<std::string, std::less<>> kRxSiteFields{"label",  "lat_deg",         "lon_deg",
                                                       "height_m", "sensitivity_dbm", "antenna"};

struct FieldIssue {
  std::string key;
  std::string message;
};

struct RxKey {
  int id;
  std::string field;
};

std::optional<RxKey> split_rx_key(std::string_view key) {
  constexpr std::string_view prefix = "rxsite.";
  if (key.substr(0, prefix.size()) != prefix) return std::nullopt;
  const auto rest = key.substr(prefix.size());
  const auto dot = rest.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  const auto id = detail::parse_int(rest.substr(0, dot));
  const auto field = rest.substr(dot + 1);
  if (!id || *id < 1 || !kRxSiteFields.contains(field)) return std::nullopt;
  return RxKey{*id, std::string(field)};
}

bool finite(double v) { return std::isfinite(v); }

std::optional<FieldIssue> check_fields(Scenario& s) {
  if (s.name.find('#') != std::string::npos) return FieldIssue{"scenario.name", "must not contain '#'"};
  if (!(s.tx_location.height_m() >= 0.0)) return FieldIssue{"tx.height_m", "must be >= 0"};
  if (s.tx_airborne) return FieldIssue{"tx.airborne", "airborne use of the band is prohibited"};
  try {
    s.channel = regulatory::validate_aggregation(regulatory::standard_band_plan(), s.tx_channels);
  } catch (const ValidationError& e) {
    return FieldIssue{"tx.channels", e.what()};
  }
  if (s.channel.lower_edge_mhz() < regulatory::kBandLowMhz ||
      s.channel.upper_edge_mhz() > regulatory::kBandHighMhz) {
    return FieldIssue{"tx.channels", "aggregate leaves the 4940-4990 MHz band"};
  }
  try {
    const auto check =
        regulatory::check_tx_power(s.tx_power_w, s.channel.total_bandwidth_mhz, s.power_class);
    if (!check.pass) {
      return FieldIssue{
          "tx.power_w",
          fmt::format("{} W exceeds the {} W {}-power limit for {} MHz (margin {:.2f} dB)",
                      s.tx_power_w, check.limit_w, regulatory::to_string(s.power_class),
                      s.channel.total_bandwidth_mhz, check.margin_db)};
    }
  } catch (const ValidationError& e) {
    return FieldIssue{"tx.power_w", e.what()};
  }
  try {
    s.sector.validate();
  } catch (const ValidationError& e) {
    return FieldIssue{"tx.sector", e.what()};
  }
  if (!finite(s.rx_sensitivity_dbm)) return FieldIssue{"rx.sensitivity_dbm", "must be finite"};
  if (!finite(s.rx_height_m) || s.rx_height_m < 0.0) return FieldIssue{"rx.height_m", "must be >= 0"};
  for (std::size_t i = 0; i < s.rx_sites.size(); ++i) {
    const auto& site = s.rx_sites[i];
    const std::string prefix = fmt::format("rxsite.{}", site.id);
    if (site.id != static_cast<int>(i) + 1) {
      return FieldIssue{prefix, fmt::format("rx site ids must be contiguous from 1 (expected {})", i + 1)};
    }
    if (!finite(site.sensitivity_dbm)) return FieldIssue{prefix + ".sensitivity_dbm", "must be finite"};
    if (site.antenna == rf::AntennaKind::Directional) {
      return FieldIssue{prefix + ".antenna", "rx sites support isotropic or dipole antennas"};
    }
    if (site.label.find('#') != std::string::npos) return FieldIssue{prefix + ".label", "must not contain '#'"};
  }
  try {
    s.environment.validate();
  } catch (const ValidationError& e) {
    return FieldIssue{"env", e.what()};
  }
  try {
    geo::grid_shape(s.grid_bbox, s.grid_resolution_m);
  } catch (const ValidationError& e) {
    return FieldIssue{"grid", e.what()};
  }
  if (!finite(s.max_probe_range_m) || !(s.max_probe_range_m > 0.0)) {
    return FieldIssue{"grid.max_probe_range_m", "must be > 0"};
  }
  for (const auto* path : {&s.registry_path, &s.mask_name, &s.mask_dir, &s.psd_path}) {
    if (path->find('#') != std::string::npos) return FieldIssue{"path", "must not contain '#'"};
  }
  return std::nullopt;
}

class Entries {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
  };

  void add(std::string key, std::string value, std::size_t line) {
    if (!kKnownKeys.contains(key) && !split_rx_key(key)) {
      throw ValidationError(fmt::format("line {}: unknown key '{}'", line, key));
    }
    if (const auto it = map_.find(key); it != map_.end()) {
      throw ValidationError(
          fmt::format("line {}: key '{}' already set on line {}", line, key, it->second.line));
    }
    map_.emplace(std::move(key), Entry{std::move(value), line});
  }

  bool has(const std::string& key) const { return map_.contains(key); }
  std::size_t line_of(const std::string& key) const {
    const auto it = map_.find(key);
    return it == map_.end() ? 0 : it->second.line;
  }
  const std::map<std::string, Entry>& all() const { return map_; }

  [[noreturn]] void fail(const std::string& key, std::string_view message) const {
    const auto line = line_of(key);
    if (line == 0) throw ValidationError(fmt::format("key '{}': {}", key, message));
    throw ValidationError(fmt::format("line {}: key '{}': {}", line, key, message));
  }

  std::string text(const std::string& key, std::string fallback = {}) const {
    const auto it = map_.find(key);
    return it == map_.end() ? fallback : it->second.value;
  }

  double number(const std::string& key, double fallback = 0.0) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    const auto v = detail::parse_number(it->second.value);
    if (!v || std::isnan(*v)) fail(key, fmt::format("expected a number, got '{}'", it->second.value));
    return *v;
  }

  bool flag(const std::string& key, bool fallback) const {
    const auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    if (it->second.value == "true") return true;
    if (it->second.value == "false") return false;
    fail(key, fmt::format("expected true or false, got '{}'", it->second.value));
  }

  template <typename Fn>
  auto with_context(const std::string& key, Fn&& fn) const {
    try {
      return fn();
    } catch (const ValidationError& e) {
      fail(key, e.what());
    }
  }

 private:
  std::map<std::string, Entry> map_;
};

geo::GeoPoint make_point(const Entries& in, const std::string& prefix, double height) {
  const double lat = in.number(prefix + ".lat_deg");
  const double lon = in.number(prefix + ".lon_deg");
  if (!(lat >= -90.0 && lat <= 90.0)) in.fail(prefix + ".lat_deg", "latitude outside [-90, 90]");
  if (!finite(lon)) in.fail(prefix + ".lon_deg", "longitude must be finite");
  if (!finite(height) || height < 0.0) in.fail(prefix + ".height_m", "height must be finite and >= 0");
  return geo::GeoPoint(lat, lon, height);
}

}  // namespace

rf::AntennaPattern Scenario::tx_antenna_pattern() const {
  switch (tx_antenna) {
    case rf::AntennaKind::Isotropic: return rf::Isotropic{};
    case rf::AntennaKind::Dipole: return rf::HalfWaveDipole{};
    case rf::AntennaKind::Directional: return sector;
  }
  return rf::Isotropic{};
}

rf::RadioEndpoint Scenario::tx_endpoint() const {
  return {tx_location, tx_antenna_pattern(), freq_mhz(), tx_power_dbm(), std::nullopt};
}

rf::RadioEndpoint Scenario::reference_receiver(const geo::GeoPoint& where) const {
  return {where.with_height(rx_height_m), rf::Isotropic{}, freq_mhz(), std::nullopt,
          rx_sensitivity_dbm};
}

rf::RadioEndpoint Scenario::rx_endpoint(const RxSite& site) const {
  rf::AntennaPattern pattern = rf::Isotropic{};
  if (site.antenna == rf::AntennaKind::Dipole) pattern = rf::HalfWaveDipole{};
  return {site.location, pattern, freq_mhz(), std::nullopt, site.sensitivity_dbm};
}

void Scenario::validate() {
  if (auto issue = check_fields(*this)) {
    throw ValidationError(fmt::format("key '{}': {}", issue->key, issue->message));
  }
}

Scenario parse_scenario(std::string_view text) {
  Entries in;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view raw) {
    const auto line = detail::trim(detail::strip_comment(raw));
    if (line.empty()) return;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(fmt::format("line {}: expected 'section.key = value'", line_no));
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError(fmt::format("line {}: empty key", line_no));
    in.add(std::string(key), std::string(value), line_no);
  });
  for (const auto& key : kRequiredKeys) {
    if (!in.has(key)) throw ValidationError(fmt::format("missing required key '{}'", key));
  }

  Scenario s;
  s.name = in.text("scenario.name");
  s.tx_location = make_point(in, "tx", in.number("tx.height_m"));
  s.tx_power_w = in.number("tx.power_w");
  s.power_class = in.with_context("tx.power_class",
                                  [&] { return regulatory::parse_power_class(in.text("tx.power_class")); });
  s.tx_channels = in.with_context("tx.channels",
                                  [&] { return regulatory::parse_channel_list(in.text("tx.channels")); });
  s.tx_antenna = in.with_context("tx.antenna",
                                 [&] { return rf::parse_antenna_kind(in.text("tx.antenna", "dipole")); });
  s.tx_airborne = in.flag("tx.airborne", false);
  const rf::DirectionalSector sector_defaults;
  s.sector.boresight_az_deg = in.number("tx.sector.boresight_az_deg", sector_defaults.boresight_az_deg);
  s.sector.az_beamwidth_3db_deg = in.number("tx.sector.az_beamwidth_deg", sector_defaults.az_beamwidth_3db_deg);
  s.sector.el_beamwidth_3db_deg = in.number("tx.sector.el_beamwidth_deg", sector_defaults.el_beamwidth_3db_deg);
  s.sector.max_gain_dbi = in.number("tx.sector.max_gain_dbi", sector_defaults.max_gain_dbi);
  s.sector.front_to_back_db = in.number("tx.sector.front_to_back_db", sector_defaults.front_to_back_db);

  s.rx_sensitivity_dbm = in.number("rx.sensitivity_dbm");
  s.rx_height_m = in.number("rx.height_m", 2.0);

  std::map<int, std::set<std::string>> site_fields;
  for (const auto& [key, entry] : in.all()) {
    if (const auto rk = split_rx_key(key)) site_fields[rk->id].insert(rk->field);
  }
  int expected_id = 1;
  for (const auto& [id, fields] : site_fields) {
    const std::string prefix = fmt::format("rxsite.{}", id);
    if (id != expected_id) {
      in.fail(prefix + ".lat_deg",
              fmt::format("rx site ids must be contiguous from 1 (missing rxsite.{})", expected_id));
    }
    ++expected_id;
    for (const char* required : {"lat_deg", "lon_deg"}) {
      if (!fields.contains(required)) {
        throw ValidationError(fmt::format("missing required key '{}.{}'", prefix, required));
      }
    }
    RxSite site;
    site.id = id;
    site.label = in.text(prefix + ".label");
    site.location = make_point(in, prefix, in.number(prefix + ".height_m", s.rx_height_m));
    site.sensitivity_dbm = in.number(prefix + ".sensitivity_dbm", s.rx_sensitivity_dbm);
    site.antenna = in.with_context(prefix + ".antenna", [&] {
      return rf::parse_antenna_kind(in.text(prefix + ".antenna", "isotropic"));
    });
    s.rx_sites.push_back(std::move(site));
  }

  s.environment.propagation_model = in.with_context(
      "env.model", [&] { return rf::parse_propagation_model(in.text("env.model", "free_space")); });
  s.environment.rain_rate_mm_per_h = in.number("env.rain_rate_mm_per_h", 0.0);
  s.environment.rain_coeff_k = in.number("env.rain_k");
  s.environment.rain_coeff_alpha = in.number("env.rain_alpha");
  s.environment.misc_loss_db = in.number("env.misc_loss_db", 0.0);

  s.grid_resolution_m = in.number("grid.resolution_m", 100.0);
  s.max_probe_range_m = in.number("grid.max_probe_range_m", 100'000.0);
  const std::array<std::string, 4> bounds{"grid.min_lat_deg", "grid.min_lon_deg", "grid.max_lat_deg",
                                          "grid.max_lon_deg"};
  const auto bounds_given = std::count_if(bounds.begin(), bounds.end(), [&](const auto& k) { return in.has(k); });
  if (bounds_given == 4) {
    if (in.has("grid.span_m")) in.fail("grid.span_m", "conflicts with explicit grid bounds");
    s.grid_bbox = {in.number(bounds[0]), in.number(bounds[1]), in.number(bounds[2]), in.number(bounds[3])};
  } else if (bounds_given == 0) {
    s.grid_bbox = in.with_context("grid.span_m", [&] {
      return geo::BoundingBox::centered(s.tx_location, in.number("grid.span_m", kDefaultGridSpanM));
    });
  } else {
    throw ValidationError("grid bounds need all of grid.min_lat_deg, grid.min_lon_deg, "
                          "grid.max_lat_deg and grid.max_lon_deg");
  }

  s.registry_path = in.text("registry.path", s.registry_path);
  s.mask_name = in.text("mask.name", s.mask_name);
  s.mask_dir = in.text("mask.dir", s.mask_dir);
  s.psd_path = in.text("psd.path");

  if (auto issue = check_fields(s)) {
    std::string key = issue->key;
    if (!in.has(key)) {
      // Group issues ("env", "grid") point at the first key of that group present in the file.
      for (const auto& [k, entry] : in.all()) {
        if (k.rfind(key + ".", 0) == 0) {
          key = k;
          break;
        }
      }
    }
    in.fail(key, issue->message);
  }
  if (in.has("tx.freq_mhz") && in.number("tx.freq_mhz") != s.freq_mhz()) {
    in.fail("tx.freq_mhz", fmt::format("does not match the aggregate center {} MHz of channels {}",
                                       s.freq_mhz(), in.text("tx.channels")));
  }
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  std::string out;
  const auto put = [&](std::string_view key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  std::string channels;
  for (std::size_t i = 0; i < s.tx_channels.size(); ++i) {
    channels += (i ? "," : "") + std::to_string(s.tx_channels[i]);
  }
  out += "# bandshare scenario (all defaults materialized)\n";
  put("scenario.name", s.name);
  put("tx.lat_deg", s.tx_location.lat_deg());
  put("tx.lon_deg", s.tx_location.lon_deg());
  put("tx.height_m", s.tx_location.height_m());
  put("tx.power_w", s.tx_power_w);
  put("tx.power_class", regulatory::to_string(s.power_class));
  put("tx.channels", channels);
  put("tx.freq_mhz", s.freq_mhz());
  put("tx.antenna", rf::to_string(s.tx_antenna));
  put("tx.airborne", s.tx_airborne ? "true" : "false");
  put("tx.sector.boresight_az_deg", s.sector.boresight_az_deg);
  put("tx.sector.az_beamwidth_deg", s.sector.az_beamwidth_3db_deg);
  put("tx.sector.el_beamwidth_deg", s.sector.el_beamwidth_3db_deg);
  put("tx.sector.max_gain_dbi", s.sector.max_gain_dbi);
  put("tx.sector.front_to_back_db", s.sector.front_to_back_db);
  put("rx.sensitivity_dbm", s.rx_sensitivity_dbm);
  put("rx.height_m", s.rx_height_m);
  for (const auto& site : s.rx_sites) {
    const std::string p = fmt::format("rxsite.{}.", site.id);
    put(p + "label", site.label);
    put(p + "lat_deg", site.location.lat_deg());
    put(p + "lon_deg", site.location.lon_deg());
    put(p + "height_m", site.location.height_m());
    put(p + "sensitivity_dbm", site.sensitivity_dbm);
    put(p + "antenna", rf::to_string(site.antenna));
  }
  put("env.model", rf::to_string(s.environment.propagation_model));
  put("env.rain_rate_mm_per_h", s.environment.rain_rate_mm_per_h);
  put("env.rain_k", s.environment.rain_coeff_k);
  put("env.rain_alpha", s.environment.rain_coeff_alpha);
  put("env.misc_loss_db", s.environment.misc_loss_db);
  put("grid.resolution_m", s.grid_resolution_m);
  put("grid.min_lat_deg", s.grid_bbox.min_lat_deg);
  put("grid.min_lon_deg", s.grid_bbox.min_lon_deg);
  put("grid.max_lat_deg", s.grid_bbox.max_lat_deg);
  put("grid.max_lon_deg", s.grid_bbox.max_lon_deg);
  put("grid.max_probe_range_m", s.max_probe_range_m);
  put("registry.path", s.registry_path);
  put("mask.name", s.mask_name);
  put("mask.dir", s.mask_dir);
  if (!s.psd_path.empty()) put("psd.path", s.psd_path);
  return out;
}

}  // namespace bandshare
