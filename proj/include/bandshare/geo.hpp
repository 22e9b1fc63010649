#pragma once

#include <cstddef>
#include <vector>

namespace bandshare::geo {

/// Mean Earth radius used for every spherical computation in the library.
inline constexpr double kEarthRadiusM = 6'371'000.0;

/// A location on the sphere plus an antenna height above ground.
///
/// Construction validates latitude and height and normalizes longitude into
/// [-180, 180); +180 maps to -180.
class GeoPoint {
 public:
  GeoPoint() = default;
  GeoPoint(double lat_deg, double lon_deg, double height_m = 0.0);

  double lat_deg() const { return lat_deg_; }
  double lon_deg() const { return lon_deg_; }
  double height_m() const { return height_m_; }

  GeoPoint with_height(double height_m) const { return {lat_deg_, lon_deg_, height_m}; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

 private:
  double lat_deg_ = 0.0;
  double lon_deg_ = 0.0;
  double height_m_ = 0.0;
};

/// Normalize a longitude into [-180, 180).
double normalize_lon_deg(double lon_deg);

/// Normalize an azimuth into [0, 360).
double normalize_bearing_deg(double bearing_deg);

struct BoundingBox {
  double min_lat_deg = 0.0;
  double min_lon_deg = 0.0;
  double max_lat_deg = 0.0;
  double max_lon_deg = 0.0;

  double mid_lat_deg() const { return 0.5 * (min_lat_deg + max_lat_deg); }

  /// Throws ValidationError unless min < max on both axes and all corners are in range.
  void validate() const;

  /// Box of `span_m` x `span_m` (north-south by east-west) centered on `center`.
  static BoundingBox centered(const GeoPoint& center, double span_m);

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Haversine distance on the sphere; heights are ignored.
double great_circle_distance_m(const GeoPoint& a, const GeoPoint& b);

/// Initial great-circle bearing from `a` toward `b`, degrees clockwise from
/// true north in [0, 360). Throws ValidationError("undefined bearing") when
/// the points coincide.
double initial_bearing_deg(const GeoPoint& a, const GeoPoint& b);

/// Forward geodesic problem on the sphere. The result keeps origin's height.
GeoPoint destination_point(const GeoPoint& origin, double bearing_deg, double distance_m);

struct GridShape {
  std::size_t rows = 0;  // latitude samples, north to south
  std::size_t cols = 0;  // longitude samples, west to east
  double lat_step_deg = 0.0;
  double lon_step_deg = 0.0;
  double lat_step_m = 0.0;  // spacing at the mid-latitude
  double lon_step_m = 0.0;

  std::size_t size() const { return rows * cols; }
};

/// Per-axis sample count is ceil(span / resolution) + 1, so spacing never
/// exceeds `resolution_m` at the box's mid-latitude.
GridShape grid_shape(const BoundingBox& bbox, double resolution_m);

/// Row-major sample points (first row is the northern edge, each row runs
/// west to east). Every point carries `height_m`.
std::vector<GeoPoint> make_grid(const BoundingBox& bbox, double resolution_m, double height_m = 0.0);

}  // namespace bandshare::geo
