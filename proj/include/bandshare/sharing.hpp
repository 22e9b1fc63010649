#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bandshare/geo.hpp"

namespace bandshare::sharing {

/// 250 statute miles, the default protection radius for every zone kind.
inline constexpr double kDefaultProtectionRadiusM = 402'336.0;

enum class ZoneKind { RadioAstronomyPrimary, RadioAstronomySecondary, NavyCEC };
enum class ZonePolicy { Prohibit, RequireWaiver };

std::string_view to_string(ZoneKind kind);
std::string_view to_string(ZonePolicy policy);

struct ProtectionZone {
  std::string name;
  ZoneKind kind = ZoneKind::RadioAstronomySecondary;
  ZonePolicy policy = ZonePolicy::RequireWaiver;
  geo::GeoPoint center;
  double radius_m = kDefaultProtectionRadiusM;

  /// Radius must be positive; NavyCEC zones require a waiver and primary
  /// radio-astronomy zones prohibit operation.
  void validate() const;
};

/// Immutable set of protection zones with unique names.
class IncumbentRegistry {
 public:
  IncumbentRegistry() = default;
  explicit IncumbentRegistry(std::vector<ProtectionZone> zones, bool airborne_prohibited = true);

  const std::vector<ProtectionZone>& zones() const { return zones_; }
  bool airborne_prohibited() const { return airborne_prohibited_; }
  bool empty() const { return zones_.empty(); }

 private:
  std::vector<ProtectionZone> zones_;
  bool airborne_prohibited_ = true;
};

/// Registry text: one zone per line "name kind policy lat_deg lon_deg
/// radius_m"; '#' starts a comment; an optional "airborne_prohibited
/// true|false" line sets the global flag. Errors carry the line number.
IncumbentRegistry parse_registry(std::string_view text);
IncumbentRegistry load_registry(const std::string& path);

// Severity order: Clear < WaiverRequired < Prohibited.
enum class VerdictStatus { Clear = 0, WaiverRequired = 1, Prohibited = 2 };

std::string_view to_string(VerdictStatus status);

struct ZoneHit {
  std::string zone;
  ZonePolicy policy = ZonePolicy::RequireWaiver;
  double distance_m = 0.0;
  double margin_m = 0.0;  // distance - radius; <= 0 inside the zone
};

struct FeasibilityVerdict {
  VerdictStatus status = VerdictStatus::Clear;
  std::vector<ZoneHit> triggering;  // sorted by zone name
};

/// Geometric containment test against every zone; the boundary counts as inside.
FeasibilityVerdict evaluate_site(const geo::GeoPoint& tx, const IncumbentRegistry& registry);

/// Zone whose center is closest to `tx`; ties go to the lexicographically
/// smaller name. Throws ValidationError on an empty registry.
std::pair<const ProtectionZone*, double> nearest_incumbent(const geo::GeoPoint& tx,
                                                           const IncumbentRegistry& registry);

}  // namespace bandshare::sharing
