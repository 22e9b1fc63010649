#include "bandshare/geo.hpp"

#include <cmath>
#include <numbers>

#include <fmt/core.h>

#include "bandshare/error.hpp"

namespace bandshare::geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Absorbs rounding in span/resolution so an exact multiple does not gain a sample.
constexpr double kGridCountSlack = 1e-9;

double meters_per_deg_lat() { return kEarthRadiusM * kDegToRad; }

}  // namespace

double normalize_lon_deg(double lon_deg) {
  double lon = std::fmod(lon_deg + 180.0, 360.0);
  if (lon < 0.0) lon += 360.0;
  lon -= 180.0;
  // fmod of a tiny negative can round back up to exactly 180
  if (lon >= 180.0) lon -= 360.0;
  return lon;
}

double normalize_bearing_deg(double bearing_deg) {
  double b = std::fmod(bearing_deg, 360.0);
  if (b < 0.0) b += 360.0;
  if (b >= 360.0) b = 0.0;
  return b;
}

GeoPoint::GeoPoint(double lat_deg, double lon_deg, double height_m)
    : lat_deg_(lat_deg), lon_deg_(0.0), height_m_(height_m) {
  if (!std::isfinite(lat_deg) || lat_deg < -90.0 || lat_deg > 90.0) {
    throw ValidationError(fmt::format("latitude {} outside [-90, 90]", lat_deg));
  }
  if (!std::isfinite(lon_deg)) {
    throw ValidationError(fmt::format("longitude {} is not finite", lon_deg));
  }
  if (!std::isfinite(height_m) || height_m < 0.0) {
    throw ValidationError(fmt::format("height {} m must be finite and >= 0", height_m));
  }
  lon_deg_ = normalize_lon_deg(lon_deg);
}

void BoundingBox::validate() const {
  // Constructing the corners range-checks them.
  GeoPoint(min_lat_deg, min_lon_deg);
  GeoPoint(max_lat_deg, max_lon_deg);
  if (min_lon_deg < -180.0 || max_lon_deg > 180.0) {
    throw ValidationError("bounding box longitudes must lie within [-180, 180]");
  }
  if (!(min_lat_deg < max_lat_deg) || !(min_lon_deg < max_lon_deg)) {
    throw ValidationError(fmt::format("degenerate bounding box [{}, {}] x [{}, {}]", min_lat_deg,
                                      max_lat_deg, min_lon_deg, max_lon_deg));
  }
}

BoundingBox BoundingBox::centered(const GeoPoint& center, double span_m) {
  if (!(span_m > 0.0)) throw ValidationError("bounding box span must be > 0");
  const double half_lat = 0.5 * span_m / meters_per_deg_lat();
  const double half_lon =
      0.5 * span_m / (meters_per_deg_lat() * std::cos(center.lat_deg() * kDegToRad));
  BoundingBox box{center.lat_deg() - half_lat, center.lon_deg() - half_lon,
                  center.lat_deg() + half_lat, center.lon_deg() + half_lon};
  box.validate();
  return box;
}

double great_circle_distance_m(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat_deg() * kDegToRad;
  const double lat2 = b.lat_deg() * kDegToRad;
  const double sin_dlat = std::sin(0.5 * (lat2 - lat1));
  const double sin_dlon = std::sin(0.5 * (b.lon_deg() - a.lon_deg()) * kDegToRad);
  double h = sin_dlat * sin_dlat + std::cos(lat1) * std::cos(lat2) * sin_dlon * sin_dlon;
  h = std::min(1.0, std::max(0.0, h));
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

double initial_bearing_deg(const GeoPoint& a, const GeoPoint& b) {
  if (a.lat_deg() == b.lat_deg() && a.lon_deg() == b.lon_deg()) {
    throw ValidationError("undefined bearing: coincident points");
  }
  const double lat1 = a.lat_deg() * kDegToRad;
  const double lat2 = b.lat_deg() * kDegToRad;
  const double dlon = (b.lon_deg() - a.lon_deg()) * kDegToRad;
  const double y = std::sin(dlon) * std::cos(lat2);
  const double x = std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
  return normalize_bearing_deg(std::atan2(y, x) * kRadToDeg);
}

GeoPoint destination_point(const GeoPoint& origin, double bearing_deg, double distance_m) {
  if (!(distance_m >= 0.0)) throw ValidationError("destination distance must be >= 0");
  if (distance_m == 0.0) return origin;
  const double delta = distance_m / kEarthRadiusM;
  const double theta = bearing_deg * kDegToRad;
  const double lat1 = origin.lat_deg() * kDegToRad;
  const double lon1 = origin.lon_deg() * kDegToRad;
  const double sin_lat2 =
      std::sin(lat1) * std::cos(delta) + std::cos(lat1) * std::sin(delta) * std::cos(theta);
  const double lat2 = std::asin(std::min(1.0, std::max(-1.0, sin_lat2)));
  const double lon2 = lon1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(lat1),
                                        std::cos(delta) - std::sin(lat1) * sin_lat2);
  return {lat2 * kRadToDeg, lon2 * kRadToDeg, origin.height_m()};
}

GridShape grid_shape(const BoundingBox& bbox, double resolution_m) {
  if (!(resolution_m > 0.0) || !std::isfinite(resolution_m)) {
    throw ValidationError("grid resolution must be > 0");
  }
  bbox.validate();
  const double lat_span_m = (bbox.max_lat_deg - bbox.min_lat_deg) * meters_per_deg_lat();
  const double lon_span_m = (bbox.max_lon_deg - bbox.min_lon_deg) * meters_per_deg_lat() *
                            std::cos(bbox.mid_lat_deg() * kDegToRad);
  if (resolution_m > lat_span_m || resolution_m > lon_span_m) {
    throw ValidationError(fmt::format(
        "grid underflow: resolution {} m exceeds box span ({:.1f} m x {:.1f} m)", resolution_m,
        lat_span_m, lon_span_m));
  }
  GridShape shape;
  shape.rows = static_cast<std::size_t>(std::ceil(lat_span_m / resolution_m - kGridCountSlack)) + 1;
  shape.cols = static_cast<std::size_t>(std::ceil(lon_span_m / resolution_m - kGridCountSlack)) + 1;
  shape.lat_step_deg = (bbox.max_lat_deg - bbox.min_lat_deg) / static_cast<double>(shape.rows - 1);
  shape.lon_step_deg = (bbox.max_lon_deg - bbox.min_lon_deg) / static_cast<double>(shape.cols - 1);
  shape.lat_step_m = lat_span_m / static_cast<double>(shape.rows - 1);
  shape.lon_step_m = lon_span_m / static_cast<double>(shape.cols - 1);
  return shape;
}

std::vector<GeoPoint> make_grid(const BoundingBox& bbox, double resolution_m, double height_m) {
  const GridShape shape = grid_shape(bbox, resolution_m);
  const double lat_span = bbox.max_lat_deg - bbox.min_lat_deg;
  const double lon_span = bbox.max_lon_deg - bbox.min_lon_deg;
  std::vector<GeoPoint> points;
  points.reserve(shape.size());
  for (std::size_t r = 0; r < shape.rows; ++r) {
    const double lat =
        bbox.max_lat_deg - lat_span * static_cast<double>(r) / static_cast<double>(shape.rows - 1);
    for (std::size_t c = 0; c < shape.cols; ++c) {
      const double lon =
          bbox.min_lon_deg + lon_span * static_cast<double>(c) / static_cast<double>(shape.cols - 1);
      points.emplace_back(lat, lon, height_m);
    }
  }
  return points;
}

}  // namespace bandshare::geo
