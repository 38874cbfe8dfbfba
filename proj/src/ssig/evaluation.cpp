#include "ssig/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "ssig/parallel.hpp"
#include "ssig/rng.hpp"
#include "ssig/siggen.hpp"

namespace ssig {

namespace {

constexpr std::uint64_t kSampleStream = 1;
constexpr std::uint64_t kDistortStream = 2;

std::string signature_key(const Signature& sig) {
  std::string key;
  key.reserve(sig.size() * 2 + 4);
  const auto n = static_cast<std::uint32_t>(sig.size());
  key.append(reinterpret_cast<const char*>(&n), sizeof(n));
  key.append(sig.types);
  key.append(sig.angle_bins.begin(), sig.angle_bins.end());
  return key;
}

const std::vector<double>& error_grid_storage() {
  static const std::vector<double> grid = [] {
    std::vector<double> g;
    for (int e = 0; e <= 500; e += 10) g.push_back(static_cast<double>(e));
    return g;
  }();
  return grid;
}

const std::vector<double>& rank_grid_storage() {
  static const std::vector<double> grid = [] {
    std::vector<double> g{0.1, 0.5, 1.0, 2.0, 5.0, 10.0};
    for (int r = 20; r <= 100; r += 10) g.push_back(static_cast<double>(r));
    return g;
  }();
  return grid;
}

struct PerQueryResult {
  double error_m = 0.0;
  double rank_percent = 0.0;
  double scoring_ns = 0.0;
};

// Scores each query once and derives both benchmarks (error over top-t,
// ground-truth rank over the full ordering) from the same scan.
PerQueryResult evaluate_one(const SignatureDatabase& db, const QueryItem& item,
                            const Signature& distorted,
                            const FusionPolicy& policy, Protocol protocol) {
  namespace rd = detail;
  const std::size_t n = db.size();
  const std::size_t truth_index = db.index_of(item.cell_id);
  const std::uint64_t truth_id = db.records()[truth_index].cell_id;

  const auto started = std::chrono::steady_clock::now();

  std::vector<RankedCandidate> candidates;
  std::size_t rank = 0;
  auto rank_of_truth = [&](std::span<const double> scores) {
    const double truth_score = scores[truth_index];
    std::size_t better = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (scores[i] < truth_score ||
          (scores[i] == truth_score && db.records()[i].cell_id < truth_id)) {
        ++better;
      }
    }
    return better + 1;
  };

  switch (protocol) {
    case Protocol::full: {
      const auto d_type =
          rd::score_part_all(db, distorted, policy.metric_type,
                             SignaturePart::type, 1.0, policy.weights);
      const auto d_angle =
          rd::score_part_all(db, distorted, policy.metric_angle,
                             SignaturePart::angle, 1.0, policy.weights);
      std::vector<double> fused(n);
      for (std::size_t i = 0; i < n; ++i) {
        fused[i] = rd::fuse(policy.alpha, d_type[i], policy.beta, d_angle[i]);
      }
      rank = rank_of_truth(fused);
      candidates = rd::top_t(db, fused, policy.t);
      break;
    }
    case Protocol::two_stage_type_first:
    case Protocol::two_stage_angle_first: {
      const SignaturePart first = protocol == Protocol::two_stage_type_first
                                      ? SignaturePart::type
                                      : SignaturePart::angle;
      const auto order = rd::two_stage_order(db, distorted, policy, first);
      const std::size_t keep = std::min<std::size_t>(policy.t,
                                                     order.survivors.size());
      candidates.reserve(keep);
      for (std::size_t r = 0; r < keep; ++r) {
        const auto& rec = db.records()[order.survivors[r]];
        candidates.push_back({static_cast<std::uint32_t>(r + 1), rec.cell_id,
                              rec.cell_center,
                              order.final_scores[order.survivors[r]]});
      }
      rank = 0;
      for (std::size_t pos = 0; pos < order.survivors.size(); ++pos) {
        if (order.survivors[pos] == truth_index) {
          rank = pos + 1;
          break;
        }
      }
      if (rank == 0) {
        for (std::size_t pos = 0; pos < order.pruned.size(); ++pos) {
          if (order.pruned[pos] == truth_index) {
            rank = order.survivors.size() + pos + 1;
            break;
          }
        }
      }
      break;
    }
    case Protocol::single_type:
    case Protocol::single_angle: {
      const SignaturePart part = protocol == Protocol::single_type
                                     ? SignaturePart::type
                                     : SignaturePart::angle;
      const MetricKind kind = part == SignaturePart::type ? policy.metric_type
                                                          : policy.metric_angle;
      const auto scores =
          rd::score_part_all(db, distorted, kind, part, 1.0, policy.weights);
      rank = rank_of_truth(scores);
      candidates = rd::top_t(db, scores, policy.t);
      break;
    }
  }

  const auto stopped = std::chrono::steady_clock::now();

  PerQueryResult result;
  result.scoring_ns = static_cast<double>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(stopped - started)
          .count());
  result.rank_percent =
      100.0 * static_cast<double>(rank) / static_cast<double>(n);
  result.error_m = localization_error_m(
      db, db.records()[truth_index].cell_center, candidates);
  return result;
}

}  // namespace

std::span<const double> error_grid_m() { return error_grid_storage(); }
std::span<const double> rank_percent_grid() { return rank_grid_storage(); }

std::vector<QueryItem> sample_query_set(const SignatureDatabase& db,
                                        std::size_t n, std::uint64_t seed) {
  if (n > db.size()) {
    throw_invalid("query sample size " + std::to_string(n) +
                  " exceeds database size " + std::to_string(db.size()));
  }
  auto gen = rng::make_engine(rng::mix_seed(seed, kSampleStream));
  std::vector<std::size_t> indices(db.size());
  std::iota(indices.begin(), indices.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j =
        i + rng::uniform_below(gen, static_cast<std::uint64_t>(indices.size() - i));
    std::swap(indices[i], indices[j]);
  }
  std::vector<QueryItem> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& rec = db.records()[indices[i]];
    out.push_back({i, rec.cell_id, rec.signature});
  }
  return out;
}

double localization_error_m(const SignatureDatabase& db,
                            const GeoPoint& truth_center,
                            std::span<const RankedCandidate> candidates) {
  if (candidates.empty()) {
    throw_invalid("localization error needs at least one candidate");
  }
  const GeoPoint origin = db.projection_origin();
  const PlanarPoint truth = project(origin, truth_center);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    best = std::min(best, planar_distance(truth, project(origin, c.cell_center)));
  }
  return best;
}

std::vector<QueryItem> filter_unambiguous(std::span<const QueryItem> queries,
                                          const SignatureDatabase& db) {
  std::unordered_map<std::string, std::size_t> counts;
  counts.reserve(db.size());
  for (const auto& rec : db.records()) ++counts[signature_key(rec.signature)];
  std::vector<QueryItem> out;
  for (const auto& q : queries) {
    const auto it = counts.find(signature_key(q.signature));
    if (it != counts.end() && it->second == 1) out.push_back(q);
  }
  return out;
}

EvaluationReport run_benchmark(const SignatureDatabase& db,
                               std::span<const QueryItem> queries,
                               const FusionPolicy& policy,
                               const DistortionConfig& distortion,
                               Protocol protocol, std::uint64_t master_seed) {
  policy.validate();
  distortion.validate();
  if (db.size() == 0) throw_invalid("cannot benchmark an empty database");

  const std::uint64_t distort_master = rng::mix_seed(master_seed, kDistortStream);
  std::vector<PerQueryResult> results(queries.size());
  parallel_for(0, queries.size(), [&](std::size_t i) {
    const QueryItem& item = queries[i];
    DistortionConfig cfg = distortion;
    cfg.seed = rng::mix_seed(distort_master, item.index);
    const Signature distorted =
        distort(item.signature, cfg, db.alphabet(),
                db.params().quantization_levels);
    results[i] = evaluate_one(db, item, distorted, policy, protocol);
  });

  EvaluationReport report;
  report.policy = policy;
  report.protocol = protocol;
  report.distortion = distortion;
  report.db_params = db.params();
  report.query_count = queries.size();
  report.master_seed = master_seed;

  const auto& errors_grid = error_grid_storage();
  const auto& ranks_grid = rank_grid_storage();
  report.cdf.error_m = errors_grid;
  report.cdf.cum_prob.assign(errors_grid.size(), 0.0);
  report.recall.rank_percent = ranks_grid;
  report.recall.fraction.assign(ranks_grid.size(), 0.0);

  const double nq = queries.empty() ? 1.0 : static_cast<double>(queries.size());
  for (const auto& r : results) {
    for (std::size_t g = 0; g < errors_grid.size(); ++g) {
      if (r.error_m <= errors_grid[g]) report.cdf.cum_prob[g] += 1.0;
    }
    for (std::size_t g = 0; g < ranks_grid.size(); ++g) {
      if (r.rank_percent <= ranks_grid[g]) report.recall.fraction[g] += 1.0;
    }
  }
  for (auto& v : report.cdf.cum_prob) v /= nq;
  for (auto& v : report.recall.fraction) v /= nq;
  report.p_error_le_50m = report.cdf.cum_prob[5];     // grid point 50 m
  report.recall_at_10pct = report.recall.fraction[5]; // grid point 10 %

  if (!results.empty()) {
    std::vector<double> times;
    times.reserve(results.size());
    double sum = 0.0;
    for (const auto& r : results) {
      times.push_back(r.scoring_ns);
      sum += r.scoring_ns;
    }
    std::sort(times.begin(), times.end());
    report.timing.mean_ms = sum / static_cast<double>(times.size()) / 1e6;
    report.timing.median_ms = times[times.size() / 2] / 1e6;
    report.timing.min_ms = times.front() / 1e6;
    report.timing.max_ms = times.back() / 1e6;
  }
  return report;
}

EvaluationReport evaluate_database(const SignatureDatabase& db,
                                   const EvalSettings& settings) {
  auto queries = sample_query_set(db, settings.query_count, settings.seed);
  if (settings.unambiguous_only) {
    queries = filter_unambiguous(queries, db);
  }
  return run_benchmark(db, queries, settings.policy, settings.distortion,
                       settings.protocol, settings.seed);
}

std::vector<SweepRow> sweep_visibility(std::span<const SemanticObject> objects,
                                       const GeoBBox& bbox,
                                       const BuildParams& base,
                                       std::span<const double> r_values,
                                       const EvalSettings& settings,
                                       const Alphabet& alphabet) {
  if (r_values.empty()) throw_invalid("sweep needs at least one value");
  std::vector<SweepRow> rows;
  rows.reserve(r_values.size());
  for (double r : r_values) {
    BuildParams params = base;
    params.visibility_range_m = r;
    const auto db = build_database(objects, params, bbox, alphabet);
    const auto report = evaluate_database(db, settings);
    rows.push_back({r, report.p_error_le_50m, report.recall_at_10pct});
  }
  return rows;
}

std::vector<SweepRow> sweep_quantization(std::span<const SemanticObject> objects,
                                         const GeoBBox& bbox,
                                         const BuildParams& base,
                                         std::span<const std::uint32_t> q_values,
                                         const EvalSettings& settings,
                                         const Alphabet& alphabet) {
  if (q_values.empty()) throw_invalid("sweep needs at least one value");
  std::vector<SweepRow> rows;
  rows.reserve(q_values.size());
  for (std::uint32_t q : q_values) {
    BuildParams params = base;
    params.quantization_levels = q;
    const auto db = build_database(objects, params, bbox, alphabet);
    const auto report = evaluate_database(db, settings);
    rows.push_back({static_cast<double>(q), report.p_error_le_50m,
                    report.recall_at_10pct});
  }
  return rows;
}

const char* protocol_name(Protocol protocol) {
  switch (protocol) {
    case Protocol::full:
      return "full";
    case Protocol::two_stage_type_first:
      return "two-stage-type-first";
    case Protocol::two_stage_angle_first:
      return "two-stage-angle-first";
    case Protocol::single_type:
      return "single-type";
    case Protocol::single_angle:
      return "single-angle";
  }
  return "unknown";
}

}  // namespace ssig
