#include "bandshare/sharing.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/core.h>

#include "bandshare/error.hpp"
#include "text_util.hpp"

namespace bandshare::sharing {

namespace {

ZoneKind parse_kind(std::string_view text) {
  if (text == "RadioAstronomyPrimary") return ZoneKind::RadioAstronomyPrimary;
  if (text == "RadioAstronomySecondary") return ZoneKind::RadioAstronomySecondary;
  if (text == "NavyCEC") return ZoneKind::NavyCEC;
  throw ValidationError(fmt::format("unknown zone kind '{}'", text));
}

ZonePolicy parse_policy(std::string_view text) {
  if (text == "Prohibit") return ZonePolicy::Prohibit;
  if (text == "RequireWaiver") return ZonePolicy::RequireWaiver;
  throw ValidationError(fmt::format("unknown zone policy '{}'", text));
}

VerdictStatus severity_of(ZonePolicy policy) {
  return policy == ZonePolicy::Prohibit ? VerdictStatus::Prohibited : VerdictStatus::WaiverRequired;
}

}  // namespace

std::string_view to_string(ZoneKind kind) {
  switch (kind) {
    case ZoneKind::RadioAstronomyPrimary: return "RadioAstronomyPrimary";
    case ZoneKind::RadioAstronomySecondary: return "RadioAstronomySecondary";
    case ZoneKind::NavyCEC: return "NavyCEC";
  }
  return "?";
}

std::string_view to_string(ZonePolicy policy) {
  return policy == ZonePolicy::Prohibit ? "Prohibit" : "RequireWaiver";
}

std::string_view to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Clear: return "Clear";
    case VerdictStatus::WaiverRequired: return "WaiverRequired";
    case VerdictStatus::Prohibited: return "Prohibited";
  }
  return "?";
}

void ProtectionZone::validate() const {
  if (name.empty()) throw ValidationError("protection zone without a name");
  if (!(radius_m > 0.0) || !std::isfinite(radius_m)) {
    throw ValidationError(fmt::format("zone '{}': radius must be finite and > 0", name));
  }
  if (kind == ZoneKind::NavyCEC && policy != ZonePolicy::RequireWaiver) {
    throw ValidationError(fmt::format("zone '{}': NavyCEC zones must use RequireWaiver", name));
  }
  if (kind == ZoneKind::RadioAstronomyPrimary && policy != ZonePolicy::Prohibit) {
    throw ValidationError(
        fmt::format("zone '{}': RadioAstronomyPrimary zones must use Prohibit", name));
  }
}

IncumbentRegistry::IncumbentRegistry(std::vector<ProtectionZone> zones, bool airborne_prohibited)
    : zones_(std::move(zones)), airborne_prohibited_(airborne_prohibited) {
  std::set<std::string> names;
  for (const auto& zone : zones_) {
    zone.validate();
    if (!names.insert(zone.name).second) {
      throw ValidationError(fmt::format("duplicate zone name '{}'", zone.name));
    }
  }
}

IncumbentRegistry parse_registry(std::string_view text) {
  std::vector<ProtectionZone> zones;
  std::set<std::string> names;
  bool airborne_prohibited = true;
  detail::for_each_line(text, [&](std::size_t line_no, std::string_view line) {
    const auto fields = detail::split_ws(detail::strip_comment(line));
    if (fields.empty()) return;
    try {
      if (fields[0] == "airborne_prohibited") {
        if (fields.size() != 2 || (fields[1] != "true" && fields[1] != "false")) {
          throw ValidationError("expected 'airborne_prohibited true|false'");
        }
        airborne_prohibited = fields[1] == "true";
        return;
      }
      if (fields.size() != 6) {
        throw ValidationError(
            fmt::format("expected 'name kind policy lat_deg lon_deg radius_m', got {} fields",
                        fields.size()));
      }
      const auto lat = detail::parse_number(fields[3]);
      const auto lon = detail::parse_number(fields[4]);
      const auto radius = detail::parse_number(fields[5]);
      if (!lat || !lon || !radius) throw ValidationError("non-numeric coordinate or radius");
      ProtectionZone zone{std::string(fields[0]), parse_kind(fields[1]), parse_policy(fields[2]),
                          geo::GeoPoint(*lat, *lon), *radius};
      zone.validate();
      if (!names.insert(zone.name).second) {
        throw ValidationError(fmt::format("duplicate zone name '{}'", zone.name));
      }
      zones.push_back(std::move(zone));
    } catch (const ValidationError& e) {
      throw ValidationError(fmt::format("registry line {}: {}", line_no, e.what()));
    }
  });
  return IncumbentRegistry(std::move(zones), airborne_prohibited);
}

IncumbentRegistry load_registry(const std::string& path) {
  return parse_registry(detail::read_file(path));
}

FeasibilityVerdict evaluate_site(const geo::GeoPoint& tx, const IncumbentRegistry& registry) {
  FeasibilityVerdict verdict;
  for (const auto& zone : registry.zones()) {
    const double d = geo::great_circle_distance_m(tx, zone.center);
    if (d <= zone.radius_m) {
      verdict.triggering.push_back({zone.name, zone.policy, d, d - zone.radius_m});
      verdict.status = std::max(verdict.status, severity_of(zone.policy));
    }
  }
  std::sort(verdict.triggering.begin(), verdict.triggering.end(),
            [](const ZoneHit& a, const ZoneHit& b) { return a.zone < b.zone; });
  return verdict;
}

std::pair<const ProtectionZone*, double> nearest_incumbent(const geo::GeoPoint& tx,
                                                           const IncumbentRegistry& registry) {
  if (registry.empty()) throw ValidationError("no incumbents loaded");
  const ProtectionZone* best = nullptr;
  double best_d = 0.0;
  for (const auto& zone : registry.zones()) {
    const double d = geo::great_circle_distance_m(tx, zone.center);
    if (best == nullptr || d < best_d || (d == best_d && zone.name < best->name)) {
      best = &zone;
      best_d = d;
    }
  }
  return {best, best_d};
}

}  // namespace bandshare::sharing
