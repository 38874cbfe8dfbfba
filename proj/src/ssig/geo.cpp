#include "ssig/geo.hpp"

#include <cmath>

namespace ssig {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;
constexpr double kCityScaleGuardDeg = 1.0;
}  // namespace

bool is_valid_geo(const GeoPoint& p) {
  return std::isfinite(p.lon_deg) && std::isfinite(p.lat_deg) &&
         p.lon_deg >= -180.0 && p.lon_deg <= 180.0 && p.lat_deg >= -90.0 &&
         p.lat_deg <= 90.0;
}

PlanarPoint project(const GeoPoint& origin, const GeoPoint& p) {
  if (!is_valid_geo(origin) || !is_valid_geo(p)) {
    throw_invalid("project: coordinates must be finite WGS84 lon/lat");
  }
  const double dlon = p.lon_deg - origin.lon_deg;
  const double dlat = p.lat_deg - origin.lat_deg;
  if (std::fabs(dlon) >= kCityScaleGuardDeg || std::fabs(dlat) >= kCityScaleGuardDeg) {
    throw_invalid("project: point more than 1 degree from origin, outside the "
                  "local projection's city-scale validity");
  }
  const double cos_lat = std::cos(origin.lat_deg * kDegToRad);
  return PlanarPoint{dlon * kDegToRad * kEarthRadiusM * cos_lat,
                     dlat * kDegToRad * kEarthRadiusM};
}

GeoPoint unproject(const GeoPoint& origin, const PlanarPoint& p) {
  if (!is_valid_geo(origin)) {
    throw_invalid("unproject: origin must be finite WGS84 lon/lat");
  }
  const double cos_lat = std::cos(origin.lat_deg * kDegToRad);
  return GeoPoint{origin.lon_deg + p.x_east / (kDegToRad * kEarthRadiusM * cos_lat),
                  origin.lat_deg + p.y_north / (kDegToRad * kEarthRadiusM)};
}

double planar_distance(const PlanarPoint& a, const PlanarPoint& b) {
  return std::hypot(a.x_east - b.x_east, a.y_north - b.y_north);
}

double azimuth_deg(const PlanarPoint& viewpoint, const PlanarPoint& object) {
  const double dx = object.x_east - viewpoint.x_east;
  const double dy = object.y_north - viewpoint.y_north;
  if (dx == 0.0 && dy == 0.0) {
    throw_invalid("azimuth_deg: angle undefined for coincident points");
  }
  double deg = std::atan2(dx, dy) * kRadToDeg;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg = 0.0;
  return deg;
}

}  // namespace ssig
