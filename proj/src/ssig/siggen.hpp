#pragma once

#include <cstdint>
#include <span>

#include "ssig/metrics.hpp"
#include "ssig/model.hpp"

namespace ssig {

// bin = floor(angle / (360/Q)); the lower bin edge owns the boundary, so
// 22.5 degrees maps to bin 1 at Q=16. Throws for angles outside [0, 360).
std::uint32_t quantize_angle(double angle_deg, std::uint32_t quantization_levels);

// Panoramic sweep for one viewpoint: keep objects within the visibility
// range (closed ball), order clockwise from north by raw azimuth with ties
// broken by distance, then class symbol, then input order, and emit the
// class and quantized-angle sequences.
Signature build_signature(const GeoPoint& viewpoint,
                          std::span<const SemanticObject> objects,
                          const BuildParams& params, const GeoPoint& origin);

// Grid-samples the bounding box with the configured step (inclusive
// endpoints, row-major), builds one signature per cell, and drops cells
// whose signature is empty. The projection origin is the centroid of the
// object set. Retained records get sequential cell ids.
SignatureDatabase build_database(std::span<const SemanticObject> objects,
                                 const BuildParams& params, const GeoBBox& bbox,
                                 const Alphabet& alphabet = alphabet_default());

struct GroupStats {
  std::size_t group_count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t min = 0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
  std::size_t max = 0;
};

// Distribution of group sizes when records are grouped by exact equality of
// one signature part.
GroupStats group_stats(const SignatureDatabase& db, SignaturePart part);

}  // namespace ssig
