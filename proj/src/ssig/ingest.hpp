#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ssig/model.hpp"

namespace ssig {

struct RowError {
  std::size_t line = 0;  // 1-based line (CSV) or feature index (GeoJSON)
  std::string message;
};

struct ObjectReadResult {
  std::vector<SemanticObject> objects;
  std::vector<RowError> row_errors;
};

// UTF-8 CSV with header `id,class,lon,lat`. The class field accepts either
// the single symbol or the class name (names case-insensitively). Malformed
// rows are collected, not fatal; an unreadable file or a bad header is.
ObjectReadResult read_objects_csv(const std::string& path,
                                  const Alphabet& alphabet = alphabet_default());

// GeoJSON FeatureCollection of features carrying a `class` property. Point
// features use their coordinate; other geometries use the centroid of their
// vertices (ring-closing duplicates dropped).
ObjectReadResult read_objects_geojson(
    const std::string& path, const Alphabet& alphabet = alphabet_default());

void write_objects_csv(std::span<const SemanticObject> objects,
                       const std::string& path);

// Versioned binary format (magic `SSIG`, version 0x01, little-endian):
// header with build parameters, projection origin, alphabet and record
// count; per record a varint cell id, fixed-point 1e-7 degree center,
// varint length, raw class symbols and bit-packed angle bins; trailing
// CRC-32. load(save(db)) == db exactly.
void save_database(const SignatureDatabase& db, const std::string& path);
SignatureDatabase load_database(const std::string& path);

struct SyntheticCityConfig {
  double width_m = 1000.0;
  double height_m = 1000.0;
  GeoPoint anchor{2.35, 48.85};  // planar origin sits at the area center
  std::vector<double> intensity_per_km2;  // parallel to the alphabet
  std::uint64_t seed = 0;

  // Intensities proportional to the reference class counts over the 79 km2
  // reference area, optionally scaled.
  static SyntheticCityConfig paris_profile(double width_m, double height_m,
                                           std::uint64_t seed,
                                           double scale = 1.0);
  static SyntheticCityConfig uniform_profile(double width_m, double height_m,
                                             std::uint64_t seed,
                                             double per_class_per_km2);
};

// Homogeneous Poisson point process per class (independent substreams),
// deterministic per seed; ids are sequential over the generated order.
std::vector<SemanticObject> generate_synthetic_city(
    const SyntheticCityConfig& cfg, const Alphabet& alphabet = alphabet_default());

// The geographic bounding box spanned by a synthetic city config.
GeoBBox synthetic_city_bbox(const SyntheticCityConfig& cfg);

}  // namespace ssig
