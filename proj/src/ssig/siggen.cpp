#include "ssig/siggen.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ssig/parallel.hpp"

namespace ssig {

std::uint32_t quantize_angle(double angle_deg,
                             std::uint32_t quantization_levels) {
  if (quantization_levels < 2) throw_invalid("quantization levels must be >= 2");
  if (!(angle_deg >= 0.0) || angle_deg >= 360.0) {
    throw_invalid("angle must lie in [0, 360)");
  }
  const double step = 360.0 / static_cast<double>(quantization_levels);
  const auto bin = static_cast<std::uint32_t>(angle_deg / step);
  return bin % quantization_levels;  // guards the float boundary at 360
}

namespace {

struct SweepEntry {
  double azimuth = 0.0;
  double distance = 0.0;
  char symbol = '?';
  std::size_t input_order = 0;
};

Signature sweep_to_signature(std::vector<SweepEntry>& entries,
                             std::uint32_t quantization_levels) {
  std::sort(entries.begin(), entries.end(),
            [](const SweepEntry& a, const SweepEntry& b) {
              if (a.azimuth != b.azimuth) return a.azimuth < b.azimuth;
              if (a.distance != b.distance) return a.distance < b.distance;
              if (a.symbol != b.symbol) return a.symbol < b.symbol;
              return a.input_order < b.input_order;
            });
  Signature sig;
  sig.types.reserve(entries.size());
  sig.angle_bins.reserve(entries.size());
  for (const auto& e : entries) {
    sig.types += e.symbol;
    sig.angle_bins.push_back(
        static_cast<std::uint8_t>(quantize_angle(e.azimuth, quantization_levels)));
  }
  return sig;
}

Signature signature_at(const PlanarPoint& viewpoint,
                       std::span<const PlanarPoint> positions,
                       std::span<const std::size_t> candidates,
                       std::span<const SemanticObject> objects,
                       const BuildParams& params) {
  const double r2 = params.visibility_range_m * params.visibility_range_m;
  std::vector<SweepEntry> entries;
  for (std::size_t idx : candidates) {
    const PlanarPoint& p = positions[idx];
    const double dx = p.x_east - viewpoint.x_east;
    const double dy = p.y_north - viewpoint.y_north;
    const double d2 = dx * dx + dy * dy;
    if (d2 > r2) continue;
    if (dx == 0.0 && dy == 0.0) {
      // An object exactly at the viewpoint has no defined azimuth; sweep it
      // first (angle 0), consistent with "starting from the north".
      entries.push_back({0.0, 0.0, objects[idx].class_symbol, idx});
    } else {
      entries.push_back({azimuth_deg(viewpoint, p), std::sqrt(d2),
                         objects[idx].class_symbol, idx});
    }
  }
  return sweep_to_signature(entries, params.quantization_levels);
}

GeoPoint centroid(std::span<const SemanticObject> objects) {
  double lon = 0.0;
  double lat = 0.0;
  for (const auto& o : objects) {
    lon += o.position.lon_deg;
    lat += o.position.lat_deg;
  }
  const auto n = static_cast<double>(objects.size());
  return GeoPoint{lon / n, lat / n};
}

GeoPoint quantize_e7(const GeoPoint& p) {
  return GeoPoint{std::llround(p.lon_deg * 1e7) / 1e7,
                  std::llround(p.lat_deg * 1e7) / 1e7};
}

// Uniform buckets of side R over planar object positions, so each cell only
// inspects its 3x3 neighborhood instead of the whole object set.
class ObjectBuckets {
 public:
  ObjectBuckets(std::span<const PlanarPoint> positions, double side)
      : side_(side) {
    for (std::size_t i = 0; i < positions.size(); ++i) {
      buckets_[key_for(positions[i])].push_back(i);
    }
  }

  std::vector<std::size_t> gather(const PlanarPoint& center) const {
    std::vector<std::size_t> out;
    const auto [ci, cj] = cell_of(center);
    for (std::int64_t i = ci - 1; i <= ci + 1; ++i) {
      for (std::int64_t j = cj - 1; j <= cj + 1; ++j) {
        auto it = buckets_.find(pack(i, j));
        if (it == buckets_.end()) continue;
        out.insert(out.end(), it->second.begin(), it->second.end());
      }
    }
    return out;
  }

 private:
  std::pair<std::int64_t, std::int64_t> cell_of(const PlanarPoint& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x_east / side_)),
            static_cast<std::int64_t>(std::floor(p.y_north / side_))};
  }
  static std::uint64_t pack(std::int64_t i, std::int64_t j) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(j));
  }
  std::uint64_t key_for(const PlanarPoint& p) const {
    const auto [i, j] = cell_of(p);
    return pack(i, j);
  }

  double side_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets_;
};

std::size_t grid_points(double span_m, double step_m) {
  // Inclusive endpoints; the epsilon absorbs projection round-trip noise
  // without ever admitting a genuinely out-of-range point.
  return static_cast<std::size_t>(std::floor(span_m / step_m + 1e-6)) + 1;
}

}  // namespace

Signature build_signature(const GeoPoint& viewpoint,
                          std::span<const SemanticObject> objects,
                          const BuildParams& params, const GeoPoint& origin) {
  params.validate();
  const PlanarPoint vp = project(origin, viewpoint);
  std::vector<PlanarPoint> positions;
  positions.reserve(objects.size());
  std::vector<std::size_t> all(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    positions.push_back(project(origin, objects[i].position));
    all[i] = i;
  }
  return signature_at(vp, positions, all, objects, params);
}

SignatureDatabase build_database(std::span<const SemanticObject> objects,
                                 const BuildParams& params, const GeoBBox& bbox,
                                 const Alphabet& alphabet) {
  params.validate();
  if (objects.empty()) throw_invalid("cannot build a database from zero objects");
  if (!bbox.non_degenerate()) throw_invalid("bounding box is degenerate");
  for (const auto& o : objects) {
    if (!alphabet.contains(o.class_symbol)) {
      throw_invalid(std::string("object class '") + o.class_symbol +
                    "' is not in the database alphabet");
    }
    if (!is_valid_geo(o.position)) {
      throw_invalid("object " + o.id + " has an invalid position");
    }
  }

  const GeoPoint origin = centroid(objects);
  std::vector<PlanarPoint> positions;
  positions.reserve(objects.size());
  for (const auto& o : objects) positions.push_back(project(origin, o.position));

  const PlanarPoint lo = project(origin, GeoPoint{bbox.lon_min, bbox.lat_min});
  const PlanarPoint hi = project(origin, GeoPoint{bbox.lon_max, bbox.lat_max});
  const std::size_t nx = grid_points(hi.x_east - lo.x_east, params.grid_step_m);
  const std::size_t ny = grid_points(hi.y_north - lo.y_north, params.grid_step_m);

  const ObjectBuckets buckets(positions, params.visibility_range_m);

  // Signatures are computed per cell (parallelizable), then ids are assigned
  // in a serial row-major pass so the record order never depends on
  // scheduling.
  std::vector<Signature> cell_sigs(nx * ny);
  parallel_for(0, ny, [&](std::size_t row) {
    for (std::size_t col = 0; col < nx; ++col) {
      const PlanarPoint center{
          lo.x_east + static_cast<double>(col) * params.grid_step_m,
          lo.y_north + static_cast<double>(row) * params.grid_step_m};
      const auto candidates = buckets.gather(center);
      cell_sigs[row * nx + col] =
          signature_at(center, positions, candidates, objects, params);
    }
  });

  std::vector<DatabaseRecord> records;
  for (std::size_t row = 0; row < ny; ++row) {
    for (std::size_t col = 0; col < nx; ++col) {
      Signature& sig = cell_sigs[row * nx + col];
      if (sig.empty()) continue;
      const PlanarPoint center{
          lo.x_east + static_cast<double>(col) * params.grid_step_m,
          lo.y_north + static_cast<double>(row) * params.grid_step_m};
      DatabaseRecord rec;
      rec.cell_id = records.size();
      rec.cell_center = quantize_e7(unproject(origin, center));
      rec.signature = std::move(sig);
      records.push_back(std::move(rec));
    }
  }
  return SignatureDatabase(std::move(records), params, origin, alphabet);
}

GroupStats group_stats(const SignatureDatabase& db, SignaturePart part) {
  if (db.size() == 0) throw_invalid("group_stats requires a non-empty database");
  std::unordered_map<std::string, std::size_t> groups;
  groups.reserve(db.size());
  for (const auto& rec : db.records()) {
    if (part == SignaturePart::type) {
      ++groups[rec.signature.types];
    } else {
      ++groups[std::string(rec.signature.angle_bins.begin(),
                           rec.signature.angle_bins.end())];
    }
  }
  std::vector<std::size_t> sizes;
  sizes.reserve(groups.size());
  for (const auto& [key, n] : groups) sizes.push_back(n);
  std::sort(sizes.begin(), sizes.end());

  GroupStats stats;
  stats.group_count = sizes.size();
  stats.min = sizes.front();
  stats.max = sizes.back();
  double sum = 0.0;
  for (std::size_t s : sizes) sum += static_cast<double>(s);
  stats.mean = sum / static_cast<double>(sizes.size());
  double ss = 0.0;
  for (std::size_t s : sizes) {
    const double d = static_cast<double>(s) - stats.mean;
    ss += d * d;
  }
  stats.stddev = sizes.size() > 1
                     ? std::sqrt(ss / static_cast<double>(sizes.size() - 1))
                     : 0.0;
  auto quantile = [&](double p) {
    const double h = p * static_cast<double>(sizes.size() - 1);
    const auto lo_idx = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi_idx = std::min(lo_idx + 1, sizes.size() - 1);
    const double frac = h - std::floor(h);
    return static_cast<double>(sizes[lo_idx]) +
           frac * (static_cast<double>(sizes[hi_idx]) -
                   static_cast<double>(sizes[lo_idx]));
  };
  stats.q25 = quantile(0.25);
  stats.q50 = quantile(0.50);
  stats.q75 = quantile(0.75);
  return stats;
}

}  // namespace ssig
