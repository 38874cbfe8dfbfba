#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ssig/distortion.hpp"
#include "ssig/retrieval.hpp"

namespace ssig {

struct QueryItem {
  std::size_t index = 0;  // stable position in the sampled set; seeds the
                          // per-query distortion substream
  std::uint64_t cell_id = 0;
  Signature signature;
};

// Uniform sample of database records without replacement, deterministic per
// seed. n must not exceed the record count.
std::vector<QueryItem> sample_query_set(const SignatureDatabase& db,
                                        std::size_t n, std::uint64_t seed);

// Minimum planar distance from the truth location to any candidate center.
double localization_error_m(const SignatureDatabase& db,
                            const GeoPoint& truth_center,
                            std::span<const RankedCandidate> candidates);

// Keeps only queries whose full signature (both parts) is unique in the
// database.
std::vector<QueryItem> filter_unambiguous(std::span<const QueryItem> queries,
                                          const SignatureDatabase& db);

struct ErrorCdf {
  std::vector<double> error_m;
  std::vector<double> cum_prob;
};

struct RecallCurve {
  std::vector<double> rank_percent;
  std::vector<double> fraction;
};

struct TimingStats {
  double mean_ms = 0.0;
  double median_ms = 0.0;
  double min_ms = 0.0;
  double max_ms = 0.0;
};

struct EvaluationReport {
  FusionPolicy policy;
  Protocol protocol = Protocol::full;
  DistortionConfig distortion;
  BuildParams db_params;
  std::size_t query_count = 0;
  std::uint64_t master_seed = 0;
  ErrorCdf cdf;
  RecallCurve recall;
  double p_error_le_50m = 0.0;
  double recall_at_10pct = 0.0;
  TimingStats timing;  // scoring phase only, excluded from persisted outputs
};

// The fixed evaluation grids; part of the report format so runs stay
// comparable across configurations.
std::span<const double> error_grid_m();      // 0, 10, ..., 500
std::span<const double> rank_percent_grid(); // 0.1, 0.5, 1, 2, 5, 10, 20, ..., 100

// For each query: distort with its per-query substream, rank under the
// protocol, and record the top-t localization error and the ground-truth
// rank percent. Timing covers the scoring phase only.
EvaluationReport run_benchmark(const SignatureDatabase& db,
                               std::span<const QueryItem> queries,
                               const FusionPolicy& policy,
                               const DistortionConfig& distortion,
                               Protocol protocol, std::uint64_t master_seed);

// One-call driver: sample (optionally filter to unambiguous queries) and run.
struct EvalSettings {
  std::size_t query_count = 1000;
  std::uint64_t seed = 0;
  FusionPolicy policy;
  Protocol protocol = Protocol::full;
  DistortionConfig distortion;
  bool unambiguous_only = false;
};
EvaluationReport evaluate_database(const SignatureDatabase& db,
                                   const EvalSettings& settings);

struct SweepRow {
  double param = 0.0;
  double p_error_le_50m = 0.0;
  double recall_at_10pct = 0.0;
};

// Rebuilds the database for each parameter value and reruns the benchmark
// with identical seeds.
std::vector<SweepRow> sweep_visibility(std::span<const SemanticObject> objects,
                                       const GeoBBox& bbox,
                                       const BuildParams& base,
                                       std::span<const double> r_values,
                                       const EvalSettings& settings,
                                       const Alphabet& alphabet = alphabet_default());
std::vector<SweepRow> sweep_quantization(std::span<const SemanticObject> objects,
                                         const GeoBBox& bbox,
                                         const BuildParams& base,
                                         std::span<const std::uint32_t> q_values,
                                         const EvalSettings& settings,
                                         const Alphabet& alphabet = alphabet_default());

const char* protocol_name(Protocol protocol);

}  // namespace ssig
