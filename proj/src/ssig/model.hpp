#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ssig/error.hpp"
#include "ssig/geo.hpp"

namespace ssig {

struct ObjectClass {
  char symbol = '?';
  std::string name;
  int numeric_id = 0;

  bool operator==(const ObjectClass&) const = default;
};

// Immutable set of object classes with unique single-character symbols.
class Alphabet {
 public:
  explicit Alphabet(std::vector<ObjectClass> classes);

  const ObjectClass* find(char symbol) const;
  const ObjectClass* find_by_name_ci(std::string_view name) const;
  bool contains(char symbol) const { return find(symbol) != nullptr; }

  std::size_t size() const { return classes_.size(); }
  const std::vector<ObjectClass>& classes() const { return classes_; }
  auto begin() const { return classes_.begin(); }
  auto end() const { return classes_.end(); }

  bool operator==(const Alphabet& other) const {
    return classes_ == other.classes_;
  }

 private:
  std::vector<ObjectClass> classes_;
  std::int16_t by_symbol_[256];
};

// The 11 street-object classes used throughout: alignment tree (B), water
// fountain (C), street light (D), indicator (E), traffic light (G), bike
// station (H), automatic WC (I), autolib station (J), taxi station (K),
// public chair (L), bus stop (M). Note the lettering skips A and F.
const Alphabet& alphabet_default();

// Reference per-class object counts for the default alphabet, used to derive
// synthetic-city intensity ratios.
std::span<const std::uint64_t> default_class_counts();

struct SemanticObject {
  std::string id;
  char class_symbol = '?';
  GeoPoint position;
};

// One viewpoint's descriptor: the class symbols of visible objects in
// clockwise sweep order from north, with the matching quantized angle bins.
struct Signature {
  std::string types;
  std::vector<std::uint8_t> angle_bins;

  std::size_t size() const { return types.size(); }
  bool empty() const { return types.empty(); }
  bool operator==(const Signature&) const = default;
};

// Canonical text form, e.g. "BD|0;4"; the empty signature renders as "|".
std::string signature_to_string(const Signature& sig);
Signature signature_from_string(std::string_view text);  // throws ParseError

struct BuildParams {
  double visibility_range_m = 30.0;
  double grid_step_m = 10.0;
  std::uint32_t quantization_levels = 16;

  void validate() const;
  bool operator==(const BuildParams&) const = default;
};

struct DatabaseRecord {
  std::uint64_t cell_id = 0;
  GeoPoint cell_center;
  Signature signature;

  bool operator==(const DatabaseRecord&) const = default;
};

// Immutable after construction; all records share the build parameters and
// the projection origin recorded here.
class SignatureDatabase {
 public:
  SignatureDatabase(std::vector<DatabaseRecord> records, BuildParams params,
                    GeoPoint projection_origin, Alphabet alphabet);

  const std::vector<DatabaseRecord>& records() const { return records_; }
  const BuildParams& params() const { return params_; }
  const GeoPoint& projection_origin() const { return projection_origin_; }
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return records_.size(); }

  // Index into records() for a cell id, or throws not_found.
  std::size_t index_of(std::uint64_t cell_id) const;

  bool operator==(const SignatureDatabase& other) const {
    return records_ == other.records_ && params_ == other.params_ &&
           projection_origin_ == other.projection_origin_ &&
           alphabet_ == other.alphabet_;
  }

 private:
  std::vector<DatabaseRecord> records_;
  BuildParams params_;
  GeoPoint projection_origin_;
  Alphabet alphabet_;
};

}  // namespace ssig
