#include "ssig/ingest.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ssig/rng.hpp"

namespace ssig {

namespace {

constexpr char kMagic[4] = {'S', 'S', 'I', 'G'};
constexpr std::uint8_t kFormatVersion = 0x01;
constexpr std::uint8_t kFlagEmptyCellsDropped = 0x01;
constexpr double kReferenceAreaKm2 = 79.0;

std::string strip_cr(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) {
    line.pop_back();
  }
  return line;
}

bool parse_double(const std::string& field, double& out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + field.size() && !field.empty() && std::isfinite(out);
}

const ObjectClass* resolve_class(const Alphabet& alphabet,
                                 const std::string& field) {
  if (field.size() == 1) {
    if (const auto* c = alphabet.find(field[0])) return c;
    // symbols are matched case-insensitively as well when unambiguous
    const char upper = static_cast<char>(
        std::toupper(static_cast<unsigned char>(field[0])));
    const char lower = static_cast<char>(
        std::tolower(static_cast<unsigned char>(field[0])));
    const auto* up = alphabet.find(upper);
    const auto* low = alphabet.find(lower);
    if (up && !low) return up;
    if (low && !up) return low;
    return nullptr;
  }
  return alphabet.find_by_name_ci(field);
}

}  // namespace

ObjectReadResult read_objects_csv(const std::string& path,
                                  const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  ObjectReadResult result;
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::format, path + ": empty file, expected header");
  }
  if (strip_cr(line) != "id,class,lon,lat") {
    throw Error(ErrorCode::format,
                path + ": expected header 'id,class,lon,lat', got '" +
                    strip_cr(line) + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(start));
        break;
      }
      fields.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (fields.size() != 4) {
      result.row_errors.push_back({line_no, "expected 4 fields, got " +
                                                std::to_string(fields.size())});
      continue;
    }
    const ObjectClass* cls = resolve_class(alphabet, fields[1]);
    if (cls == nullptr) {
      result.row_errors.push_back({line_no, "unknown class '" + fields[1] + "'"});
      continue;
    }
    double lon = 0.0;
    double lat = 0.0;
    if (!parse_double(fields[2], lon) || !parse_double(fields[3], lat)) {
      result.row_errors.push_back({line_no, "malformed coordinate"});
      continue;
    }
    const GeoPoint pos{lon, lat};
    if (!is_valid_geo(pos)) {
      result.row_errors.push_back({line_no, "coordinate out of WGS84 range"});
      continue;
    }
    result.objects.push_back({fields[0], cls->symbol, pos});
  }
  return result;
}

namespace {

// Mean of the geometry's vertices; ring-closing duplicates are skipped so
// polygons are not biased toward their first vertex.
void accumulate_vertices(const nlohmann::json& coords, bool drop_ring_closure,
                         double& lon_sum, double& lat_sum, std::size_t& count) {
  if (coords.is_array() && coords.size() >= 2 && coords[0].is_number()) {
    lon_sum += coords[0].get<double>();
    lat_sum += coords[1].get<double>();
    ++count;
    return;
  }
  if (!coords.is_array()) return;
  const bool is_ring = drop_ring_closure && !coords.empty() &&
                       coords.front().is_array() && !coords.front().empty() &&
                       coords.front()[0].is_number() && coords.size() >= 2 &&
                       coords.front() == coords.back();
  const std::size_t limit = is_ring ? coords.size() - 1 : coords.size();
  for (std::size_t i = 0; i < limit; ++i) {
    accumulate_vertices(coords[i], drop_ring_closure, lon_sum, lat_sum, count);
  }
}

}  // namespace

ObjectReadResult read_objects_geojson(const std::string& path,
                                      const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::format, path + ": invalid JSON: " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array()) {
    throw Error(ErrorCode::format, path + ": not a GeoJSON FeatureCollection");
  }
  ObjectReadResult result;
  std::size_t feature_no = 0;
  for (const auto& feature : doc["features"]) {
    ++feature_no;
    if (!feature.is_object() || feature.value("type", "") != "Feature") {
      result.row_errors.push_back({feature_no, "not a Feature object"});
      continue;
    }
    const auto props = feature.value("properties", nlohmann::json::object());
    if (!props.contains("class") || !props["class"].is_string()) {
      result.row_errors.push_back({feature_no, "missing 'class' property"});
      continue;
    }
    const ObjectClass* cls =
        resolve_class(alphabet, props["class"].get<std::string>());
    if (cls == nullptr) {
      result.row_errors.push_back(
          {feature_no,
           "unknown class '" + props["class"].get<std::string>() + "'"});
      continue;
    }
    if (!feature.contains("geometry") || !feature["geometry"].is_object() ||
        !feature["geometry"].contains("coordinates")) {
      result.row_errors.push_back({feature_no, "missing geometry"});
      continue;
    }
    const auto& geometry = feature["geometry"];
    const std::string geom_type = geometry.value("type", "");
    const bool ring_geometry =
        geom_type == "Polygon" || geom_type == "MultiPolygon";
    double lon_sum = 0.0;
    double lat_sum = 0.0;
    std::size_t count = 0;
    accumulate_vertices(geometry["coordinates"], ring_geometry, lon_sum,
                        lat_sum, count);
    if (count == 0) {
      result.row_errors.push_back({feature_no, "geometry has no coordinates"});
      continue;
    }
    const GeoPoint pos{lon_sum / static_cast<double>(count),
                       lat_sum / static_cast<double>(count)};
    if (!is_valid_geo(pos)) {
      result.row_errors.push_back({feature_no, "coordinate out of WGS84 range"});
      continue;
    }
    std::string id;
    if (feature.contains("id")) {
      id = feature["id"].is_string() ? feature["id"].get<std::string>()
                                     : feature["id"].dump();
    } else if (props.contains("id")) {
      id = props["id"].is_string() ? props["id"].get<std::string>()
                                   : props["id"].dump();
    } else {
      id = std::to_string(feature_no);
    }
    result.objects.push_back({id, cls->symbol, pos});
  }
  return result;
}

void write_objects_csv(std::span<const SemanticObject> objects,
                       const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  out << "id,class,lon,lat\n";
  char buf[64];
  for (const auto& o : objects) {
    out << o.id << ',' << o.class_symbol << ',';
    std::snprintf(buf, sizeof(buf), "%.7f,%.7f", o.position.lon_deg,
                  o.position.lat_deg);
    out << buf << '\n';
  }
  if (!out) throw Error(ErrorCode::io, "write to '" + path + "' failed");
}

namespace {

class ByteWriter {
 public:
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  void u32le(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64le(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32le(std::int32_t v) { u32le(static_cast<std::uint32_t>(v)); }
  void f64le(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    u64le(bits);
  }
  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      u8(static_cast<std::uint8_t>(v) | 0x80);
      v >>= 7;
    }
    u8(static_cast<std::uint8_t>(v));
  }
  const std::vector<std::uint8_t>& data() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  ByteReader(const std::uint8_t* data, std::size_t size, std::string path)
      : data_(data), size_(size), path_(std::move(path)) {}

  std::size_t position() const { return pos_; }

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  void bytes(void* out, std::size_t n) {
    need(n);
    std::memcpy(out, data_ + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32le() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{data_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64le() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{data_[pos_ + i]} << (8 * i);
    pos_ += 8;
    return v;
  }
  std::int32_t i32le() { return static_cast<std::int32_t>(u32le()); }
  double f64le() {
    const std::uint64_t bits = u64le();
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::uint64_t varint() {
    std::uint64_t v = 0;
    int shift = 0;
    for (;;) {
      const std::uint8_t byte = u8();
      v |= std::uint64_t{byte & 0x7f} << shift;
      if ((byte & 0x80) == 0) return v;
      shift += 7;
      if (shift >= 64) fail("varint too long");
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::format, path_ + ": " + what + " at byte " +
                                       std::to_string(pos_));
  }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > size_) fail("truncated file");
  }
  const std::uint8_t* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
  std::string path_;
};

std::uint32_t bits_per_bin(std::uint32_t quantization_levels) {
  return static_cast<std::uint32_t>(std::bit_width(quantization_levels - 1));
}

std::int32_t to_e7(double degrees) {
  return static_cast<std::int32_t>(std::llround(degrees * 1e7));
}

}  // namespace

void save_database(const SignatureDatabase& db, const std::string& path) {
  ByteWriter w;
  w.bytes(kMagic, sizeof(kMagic));
  w.u8(kFormatVersion);
  w.u8(kFlagEmptyCellsDropped);
  w.f64le(db.params().visibility_range_m);
  w.f64le(db.params().grid_step_m);
  w.u32le(db.params().quantization_levels);
  w.f64le(db.projection_origin().lon_deg);
  w.f64le(db.projection_origin().lat_deg);
  w.u8(static_cast<std::uint8_t>(db.alphabet().size()));
  for (const auto& c : db.alphabet()) {
    w.u8(static_cast<std::uint8_t>(c.symbol));
    w.u8(static_cast<std::uint8_t>(c.numeric_id));
    if (c.name.size() > 255) throw_invalid("class name too long to serialize");
    w.u8(static_cast<std::uint8_t>(c.name.size()));
    w.bytes(c.name.data(), c.name.size());
  }
  w.u64le(db.size());

  const std::uint32_t bits = bits_per_bin(db.params().quantization_levels);
  for (const auto& rec : db.records()) {
    w.varint(rec.cell_id);
    w.i32le(to_e7(rec.cell_center.lon_deg));
    w.i32le(to_e7(rec.cell_center.lat_deg));
    w.varint(rec.signature.size());
    w.bytes(rec.signature.types.data(), rec.signature.types.size());
    std::uint32_t acc = 0;
    std::uint32_t nbits = 0;
    for (std::uint8_t bin : rec.signature.angle_bins) {
      acc |= static_cast<std::uint32_t>(bin) << nbits;
      nbits += bits;
      while (nbits >= 8) {
        w.u8(static_cast<std::uint8_t>(acc & 0xff));
        acc >>= 8;
        nbits -= 8;
      }
    }
    if (nbits > 0) w.u8(static_cast<std::uint8_t>(acc & 0xff));
  }

  const auto& body = w.data();
  const auto crc = static_cast<std::uint32_t>(
      crc32(0L, body.data(), static_cast<uInt>(body.size())));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(body.data()),
            static_cast<std::streamsize>(body.size()));
  const std::uint8_t crc_bytes[4] = {
      static_cast<std::uint8_t>(crc), static_cast<std::uint8_t>(crc >> 8),
      static_cast<std::uint8_t>(crc >> 16),
      static_cast<std::uint8_t>(crc >> 24)};
  out.write(reinterpret_cast<const char*>(crc_bytes), 4);
  if (!out) throw Error(ErrorCode::io, "write to '" + path + "' failed");
}

SignatureDatabase load_database(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (bytes.size() < sizeof(kMagic) + 2 + 4) {
    throw Error(ErrorCode::format, path + ": file too short");
  }

  const std::size_t body_size = bytes.size() - 4;
  std::uint32_t stored_crc = 0;
  for (int i = 0; i < 4; ++i) {
    stored_crc |= std::uint32_t{bytes[body_size + i]} << (8 * i);
  }
  const auto computed_crc = static_cast<std::uint32_t>(
      crc32(0L, bytes.data(), static_cast<uInt>(body_size)));
  if (stored_crc != computed_crc) {
    throw Error(ErrorCode::format,
                path + ": checksum mismatch at byte " +
                    std::to_string(body_size) + " (file corrupt?)");
  }

  ByteReader r(bytes.data(), body_size, path);
  char magic[4];
  r.bytes(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorCode::format, path + ": bad magic, not a signature database");
  }
  const std::uint8_t version = r.u8();
  if (version != kFormatVersion) {
    throw Error(ErrorCode::format,
                path + ": unsupported format version " + std::to_string(version));
  }
  r.u8();  // flags (empty-cell policy); informational

  BuildParams params;
  params.visibility_range_m = r.f64le();
  params.grid_step_m = r.f64le();
  params.quantization_levels = r.u32le();
  GeoPoint origin;
  origin.lon_deg = r.f64le();
  origin.lat_deg = r.f64le();

  const std::uint8_t class_count = r.u8();
  std::vector<ObjectClass> classes;
  classes.reserve(class_count);
  for (std::uint8_t i = 0; i < class_count; ++i) {
    ObjectClass c;
    c.symbol = static_cast<char>(r.u8());
    c.numeric_id = r.u8();
    const std::uint8_t name_len = r.u8();
    c.name.resize(name_len);
    r.bytes(c.name.data(), name_len);
    classes.push_back(std::move(c));
  }

  const std::uint64_t record_count = r.u64le();
  const std::uint32_t bits = bits_per_bin(params.quantization_levels);
  std::vector<DatabaseRecord> records;
  records.reserve(record_count);
  for (std::uint64_t i = 0; i < record_count; ++i) {
    DatabaseRecord rec;
    rec.cell_id = r.varint();
    rec.cell_center.lon_deg = static_cast<double>(r.i32le()) / 1e7;
    rec.cell_center.lat_deg = static_cast<double>(r.i32le()) / 1e7;
    const std::uint64_t n = r.varint();
    rec.signature.types.resize(n);
    r.bytes(rec.signature.types.data(), n);
    rec.signature.angle_bins.resize(n);
    std::uint32_t acc = 0;
    std::uint32_t nbits = 0;
    const std::uint32_t mask = (1u << bits) - 1u;
    for (std::uint64_t k = 0; k < n; ++k) {
      while (nbits < bits) {
        acc |= static_cast<std::uint32_t>(r.u8()) << nbits;
        nbits += 8;
      }
      rec.signature.angle_bins[k] = static_cast<std::uint8_t>(acc & mask);
      acc >>= bits;
      nbits -= bits;
    }
    records.push_back(std::move(rec));
  }
  if (r.position() != body_size) {
    throw Error(ErrorCode::format,
                path + ": trailing garbage at byte " +
                    std::to_string(r.position()));
  }
  return SignatureDatabase(std::move(records), params, origin,
                           Alphabet(std::move(classes)));
}

SyntheticCityConfig SyntheticCityConfig::paris_profile(double width_m,
                                                       double height_m,
                                                       std::uint64_t seed,
                                                       double scale) {
  SyntheticCityConfig cfg;
  cfg.width_m = width_m;
  cfg.height_m = height_m;
  cfg.seed = seed;
  const auto counts = default_class_counts();
  cfg.intensity_per_km2.reserve(counts.size());
  for (std::uint64_t c : counts) {
    cfg.intensity_per_km2.push_back(static_cast<double>(c) / kReferenceAreaKm2 *
                                    scale);
  }
  return cfg;
}

SyntheticCityConfig SyntheticCityConfig::uniform_profile(
    double width_m, double height_m, std::uint64_t seed,
    double per_class_per_km2) {
  SyntheticCityConfig cfg;
  cfg.width_m = width_m;
  cfg.height_m = height_m;
  cfg.seed = seed;
  cfg.intensity_per_km2.assign(alphabet_default().size(), per_class_per_km2);
  return cfg;
}

GeoBBox synthetic_city_bbox(const SyntheticCityConfig& cfg) {
  const GeoPoint lo =
      unproject(cfg.anchor, PlanarPoint{-cfg.width_m / 2.0, -cfg.height_m / 2.0});
  const GeoPoint hi =
      unproject(cfg.anchor, PlanarPoint{cfg.width_m / 2.0, cfg.height_m / 2.0});
  return GeoBBox{lo.lon_deg, lo.lat_deg, hi.lon_deg, hi.lat_deg};
}

std::vector<SemanticObject> generate_synthetic_city(
    const SyntheticCityConfig& cfg, const Alphabet& alphabet) {
  if (!(cfg.width_m > 0.0) || !(cfg.height_m > 0.0)) {
    throw_invalid("synthetic city area must be positive");
  }
  if (cfg.intensity_per_km2.size() != alphabet.size()) {
    throw_invalid("need one intensity per alphabet class");
  }
  for (double v : cfg.intensity_per_km2) {
    if (!(v >= 0.0)) throw_invalid("intensities must be nonnegative");
  }
  const double area_km2 = cfg.width_m * cfg.height_m / 1e6;
  std::vector<SemanticObject> objects;
  std::uint64_t next_id = 1;
  for (std::size_t c = 0; c < alphabet.size(); ++c) {
    auto gen = rng::make_engine(rng::mix_seed(cfg.seed, c));
    const std::uint64_t count =
        rng::poisson(gen, cfg.intensity_per_km2[c] * area_km2);
    for (std::uint64_t k = 0; k < count; ++k) {
      const double x = rng::uniform01(gen) * cfg.width_m - cfg.width_m / 2.0;
      const double y = rng::uniform01(gen) * cfg.height_m - cfg.height_m / 2.0;
      objects.push_back({std::to_string(next_id++),
                         alphabet.classes()[c].symbol,
                         unproject(cfg.anchor, PlanarPoint{x, y})});
    }
  }
  return objects;
}

}  // namespace ssig
