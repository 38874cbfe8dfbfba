#pragma once

#include "ssig/error.hpp"

namespace ssig {

// WGS84 coordinate in degrees.
struct GeoPoint {
  double lon_deg = 0.0;
  double lat_deg = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

// Local tangent-plane coordinate, meters east/north of a projection origin.
struct PlanarPoint {
  double x_east = 0.0;
  double y_north = 0.0;

  bool operator==(const PlanarPoint&) const = default;
};

struct GeoBBox {
  double lon_min = 0.0;
  double lat_min = 0.0;
  double lon_max = 0.0;
  double lat_max = 0.0;

  bool non_degenerate() const { return lon_max > lon_min && lat_max > lat_min; }
};

inline constexpr double kEarthRadiusM = 6371008.8;

bool is_valid_geo(const GeoPoint& p);

// Equirectangular local projection about `origin`. Rejects points more than
// one degree away from the origin in either axis: this projection is only
// meant for city-scale work.
PlanarPoint project(const GeoPoint& origin, const GeoPoint& p);
GeoPoint unproject(const GeoPoint& origin, const PlanarPoint& p);

double planar_distance(const PlanarPoint& a, const PlanarPoint& b);

// Clockwise angle from north in [0, 360). Throws for coincident points.
double azimuth_deg(const PlanarPoint& viewpoint, const PlanarPoint& object);

}  // namespace ssig
