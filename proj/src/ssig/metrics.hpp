#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ssig/model.hpp"

namespace ssig {

enum class MetricKind { jaccard, histogram, edit };
enum class SignaturePart { type, angle };

struct EditWeights {
  double deletion = 1.0;
  double insertion = 1.0;
  double substitution = 1.0;

  bool unit() const {
    return deletion == 1.0 && insertion == 1.0 && substitution == 1.0;
  }
  double max_weight() const;
  void validate() const;
  bool operator==(const EditWeights&) const = default;
};

// Both signature parts are compared as plain symbol sequences: the type part
// as its class symbols, the angle part as bin values.
using SymbolSpan = std::span<const unsigned char>;

inline SymbolSpan type_part(const Signature& s) {
  return {reinterpret_cast<const unsigned char*>(s.types.data()),
          s.types.size()};
}

inline SymbolSpan angle_part(const Signature& s) {
  return {s.angle_bins.data(), s.angle_bins.size()};
}

inline SymbolSpan as_symbols(std::string_view s) {
  return {reinterpret_cast<const unsigned char*>(s.data()), s.size()};
}

// Set-semantics distance, 1 - |x n y| / |x u y|; 0 when both are empty.
double jaccard_distance(SymbolSpan x, SymbolSpan y);
double jaccard_distance(std::string_view x, std::string_view y);

// Per-class count-overlap distance, 1 - sum_c min/max over the classes in
// the union, normalized by the union size; 0 when both are empty.
double histogram_distance(SymbolSpan x, SymbolSpan y);
double histogram_distance(std::string_view x, std::string_view y);

// Weighted Levenshtein distance (two-row dynamic program).
double edit_distance(SymbolSpan x, SymbolSpan y, const EditWeights& w = {});
double edit_distance(std::string_view x, std::string_view y,
                     const EditWeights& w = {});

// edit_distance scaled into [0, 1] by max(len) * max(weight); 0 for two
// empty sequences.
double edit_distance_normalized(SymbolSpan x, SymbolSpan y,
                                const EditWeights& w = {});
double edit_distance_normalized(std::string_view x, std::string_view y,
                                const EditWeights& w = {});

// The normalization step alone, shared with the retrieval fast path so both
// produce bit-identical scores.
double normalize_edit_distance(double distance, std::size_t len_x,
                               std::size_t len_y, const EditWeights& w);

// One-query-many-records unit-cost edit distance. Precomputes the query's
// per-symbol bitmasks once; each record is then scanned with the
// bit-parallel recurrence (one word per query block). Distances are exactly
// the unit-weight edit_distance values.
class UnitEditScanner {
 public:
  explicit UnitEditScanner(SymbolSpan query);
  int distance(SymbolSpan record) const;
  std::size_t query_length() const { return length_; }

 private:
  std::array<std::uint64_t, 256> mask_{};
  std::size_t length_ = 0;
  std::vector<unsigned char> fallback_;  // query copy when longer than 64
};

// Dispatches the chosen metric onto one part of two signatures. Edit uses
// the normalized variant so all metrics share the [0, 1] ascending scale.
// For the angle part, bins of both signatures must lie below
// quantization_levels (same-Q precondition).
double part_distance(MetricKind kind, const Signature& a, const Signature& b,
                     SignaturePart part, const EditWeights& w,
                     std::uint32_t quantization_levels);

const char* metric_kind_name(MetricKind kind);

}  // namespace ssig
