#include "ssig/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace ssig {

void FusionPolicy::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw_invalid("alpha must lie in [0, 1]");
  if (std::fabs(beta - (1.0 - alpha)) > 1e-12) {
    throw_invalid("beta must equal 1 - alpha");
  }
  if (!(k_percent > 0.0 && k_percent <= 100.0)) {
    throw_invalid("k_percent must lie in (0, 100]");
  }
  if (t < 1) throw_invalid("result count t must be positive");
  weights.validate();
}

namespace {

using detail::fuse;

SymbolSpan part_span(const Signature& s, SignaturePart part) {
  return part == SignaturePart::type ? type_part(s) : angle_part(s);
}

MetricKind metric_for(const FusionPolicy& policy, SignaturePart part) {
  return part == SignaturePart::type ? policy.metric_type : policy.metric_angle;
}

double weight_for(const FusionPolicy& policy, SignaturePart part) {
  return part == SignaturePart::type ? policy.alpha : policy.beta;
}

SignaturePart other_part(SignaturePart part) {
  return part == SignaturePart::type ? SignaturePart::angle
                                     : SignaturePart::type;
}

double single_part_distance(MetricKind kind, SymbolSpan q, SymbolSpan r,
                            const EditWeights& w) {
  switch (kind) {
    case MetricKind::jaccard:
      return jaccard_distance(q, r);
    case MetricKind::histogram:
      return histogram_distance(q, r);
    case MetricKind::edit:
      return edit_distance_normalized(q, r, w);
  }
  throw_invalid("unknown metric kind");
}

struct HeapEntry {
  double score;
  std::uint64_t cell_id;
  std::size_t index;
};

struct HeapLess {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.cell_id < b.cell_id;
  }
};

}  // namespace

namespace detail {

void validate_query(const SignatureDatabase& db, const Signature& query) {
  if (query.types.size() != query.angle_bins.size()) {
    throw_invalid("signature parts have different lengths");
  }
  for (char c : query.types) {
    if (!db.alphabet().contains(c)) {
      throw_invalid(std::string("query symbol '") + c +
                    "' is not in the database alphabet");
    }
  }
  const std::uint32_t q = db.params().quantization_levels;
  for (std::uint8_t bin : query.angle_bins) {
    if (bin >= q) {
      throw_invalid("query angle bin " + std::to_string(bin) +
                    " exceeds the database quantization (Q=" +
                    std::to_string(q) + ")");
    }
  }
}

std::size_t stage_two_survivor_count(std::size_t record_count,
                                     double k_percent) {
  const double exact = (k_percent * static_cast<double>(record_count)) / 100.0;
  auto count = static_cast<std::size_t>(std::ceil(exact));
  count = std::max<std::size_t>(count, 1);
  return std::min(count, record_count);
}

std::vector<double> score_part_all(const SignatureDatabase& db,
                                   const Signature& query, MetricKind kind,
                                   SignaturePart part, double weight,
                                   const EditWeights& weights) {
  const auto& records = db.records();
  std::vector<double> out(records.size());
  if (weight == 0.0) return out;  // 0 * d == +0 for all finite distances
  const SymbolSpan qs = part_span(query, part);
  for (std::size_t i = 0; i < records.size(); ++i) {
    out[i] = weight * single_part_distance(
                          kind, qs, part_span(records[i].signature, part),
                          weights);
  }
  return out;
}

std::vector<RankedCandidate> top_t(const SignatureDatabase& db,
                                   std::span<const double> scores,
                                   std::uint32_t t) {
  const std::size_t keep = std::min<std::size_t>(t, scores.size());
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  const ScoreOrder order{scores, &db};
  std::nth_element(idx.begin(), idx.begin() + keep, idx.end(), order);
  std::sort(idx.begin(), idx.begin() + keep, order);
  std::vector<RankedCandidate> out;
  out.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) {
    const auto& rec = db.records()[idx[r]];
    out.push_back({static_cast<std::uint32_t>(r + 1), rec.cell_id,
                   rec.cell_center, scores[idx[r]]});
  }
  return out;
}

TwoStageOrder two_stage_order(const SignatureDatabase& db,
                              const Signature& query,
                              const FusionPolicy& policy,
                              SignaturePart first_part) {
  const std::size_t n = db.size();
  const SignaturePart second_part = other_part(first_part);
  const double w1 = weight_for(policy, first_part);
  const double w2 = weight_for(policy, second_part);
  const auto stage1 = score_part_all(db, query, metric_for(policy, first_part),
                                     first_part, w1, policy.weights);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t keep = stage_two_survivor_count(n, policy.k_percent);
  const ScoreOrder by_stage1{stage1, &db};
  std::nth_element(order.begin(), order.begin() + keep, order.end(), by_stage1);
  std::sort(order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
            by_stage1);

  TwoStageOrder result;
  result.final_scores.assign(n, 0.0);
  result.survivors.assign(order.begin(), order.begin() + keep);
  result.pruned.assign(order.begin() + static_cast<std::ptrdiff_t>(keep),
                       order.end());
  const SymbolSpan qs = part_span(query, second_part);
  const MetricKind second_metric = metric_for(policy, second_part);
  for (std::size_t i : result.survivors) {
    const double d2 =
        w2 == 0.0 ? 0.0
                  : single_part_distance(
                        second_metric, qs,
                        part_span(db.records()[i].signature, second_part),
                        policy.weights);
    result.final_scores[i] = stage1[i] + w2 * d2;
  }
  const ScoreOrder by_final{result.final_scores, &db};
  std::sort(result.survivors.begin(), result.survivors.end(), by_final);
  return result;
}

}  // namespace detail

double score_fused(const Signature& query, const Signature& record,
                   const FusionPolicy& policy,
                   std::uint32_t quantization_levels) {
  policy.validate();
  const double d1 = part_distance(policy.metric_type, query, record,
                                  SignaturePart::type, policy.weights,
                                  quantization_levels);
  const double d2 = part_distance(policy.metric_angle, query, record,
                                  SignaturePart::angle, policy.weights,
                                  quantization_levels);
  return fuse(policy.alpha, d1, policy.beta, d2);
}

std::vector<RankedCandidate> rank_full(const SignatureDatabase& db,
                                       const Signature& query,
                                       const FusionPolicy& policy) {
  policy.validate();
  if (db.size() == 0) throw_invalid("cannot rank against an empty database");
  detail::validate_query(db, query);
  const auto d_type =
      detail::score_part_all(db, query, policy.metric_type, SignaturePart::type,
                             1.0, policy.weights);
  const auto d_angle = detail::score_part_all(db, query, policy.metric_angle,
                                              SignaturePart::angle, 1.0,
                                              policy.weights);
  std::vector<double> fused(db.size());
  for (std::size_t i = 0; i < fused.size(); ++i) {
    fused[i] = fuse(policy.alpha, d_type[i], policy.beta, d_angle[i]);
  }
  return detail::top_t(db, fused, policy.t);
}

std::vector<RankedCandidate> rank_single(const SignatureDatabase& db,
                                         const Signature& query,
                                         MetricKind kind, SignaturePart part,
                                         std::uint32_t t,
                                         const EditWeights& weights) {
  if (db.size() == 0) throw_invalid("cannot rank against an empty database");
  detail::validate_query(db, query);
  const auto scores = detail::score_part_all(db, query, kind, part, 1.0, weights);
  return detail::top_t(db, scores, t);
}

std::vector<RankedCandidate> rank_two_stage(const SignatureDatabase& db,
                                            const Signature& query,
                                            const FusionPolicy& policy,
                                            SignaturePart first_part) {
  policy.validate();
  if (db.size() == 0) throw_invalid("cannot rank against an empty database");
  detail::validate_query(db, query);

  const auto& records = db.records();
  const std::size_t n = records.size();
  const std::size_t keep = detail::stage_two_survivor_count(n, policy.k_percent);
  const SignaturePart second_part = other_part(first_part);
  const double w1 = weight_for(policy, first_part);
  const double w2 = weight_for(policy, second_part);
  const MetricKind first_metric = metric_for(policy, first_part);
  const SymbolSpan q1 = part_span(query, first_part);

  // Exact top-k selection under (stage-1 score, cell id). The default
  // unit-weight edit metric runs the bit-parallel scanner, whose distances
  // equal the reference DP's, so the selected set and its scores match the
  // full-scoring definition bit for bit. A record whose length gap already
  // exceeds the distance implied by the current k-th best is skipped; the
  // gap is a lower bound on the distance.
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapLess> worst_first;
  const bool fast_edit = first_metric == MetricKind::edit &&
                         policy.weights.unit() && w1 > 0.0;
  const UnitEditScanner scanner(fast_edit ? q1 : SymbolSpan{});
  const double max_w = policy.weights.max_weight();
  for (std::size_t i = 0; i < n; ++i) {
    const SymbolSpan r1 = part_span(records[i].signature, first_part);
    double s1;
    if (w1 == 0.0) {
      s1 = 0.0;
    } else if (fast_edit) {
      const std::size_t longest = std::max(q1.size(), r1.size());
      if (worst_first.size() == keep && longest > 0) {
        const double bound = worst_first.top().score;
        const std::size_t gap = q1.size() > r1.size() ? q1.size() - r1.size()
                                                      : r1.size() - q1.size();
        const double gap_score =
            w1 * (static_cast<double>(gap) /
                  (static_cast<double>(longest) * max_w));
        if (gap_score > bound) continue;  // provably worse than the k-th best
      }
      const int lev = scanner.distance(r1);
      s1 = w1 * normalize_edit_distance(static_cast<double>(lev), q1.size(),
                                        r1.size(), policy.weights);
    } else {
      s1 = w1 * single_part_distance(first_metric, q1, r1, policy.weights);
    }
    if (worst_first.size() < keep) {
      worst_first.push({s1, records[i].cell_id, i});
    } else {
      const HeapEntry& top = worst_first.top();
      if (s1 < top.score ||
          (s1 == top.score && records[i].cell_id < top.cell_id)) {
        worst_first.pop();
        worst_first.push({s1, records[i].cell_id, i});
      }
    }
  }

  // Stage 2: add the other part's weighted distance and re-rank survivors.
  std::vector<HeapEntry> survivors;
  survivors.reserve(worst_first.size());
  while (!worst_first.empty()) {
    survivors.push_back(worst_first.top());
    worst_first.pop();
  }
  const SymbolSpan q2 = part_span(query, second_part);
  const MetricKind second_metric = metric_for(policy, second_part);
  for (auto& entry : survivors) {
    const double d2 =
        w2 == 0.0
            ? 0.0
            : single_part_distance(
                  second_metric, q2,
                  part_span(records[entry.index].signature, second_part),
                  policy.weights);
    entry.score = entry.score + w2 * d2;
  }
  std::sort(survivors.begin(), survivors.end(),
            [](const HeapEntry& a, const HeapEntry& b) {
              if (a.score != b.score) return a.score < b.score;
              return a.cell_id < b.cell_id;
            });

  const std::size_t out_count = std::min<std::size_t>(policy.t, survivors.size());
  std::vector<RankedCandidate> out;
  out.reserve(out_count);
  for (std::size_t r = 0; r < out_count; ++r) {
    const auto& rec = records[survivors[r].index];
    out.push_back({static_cast<std::uint32_t>(r + 1), rec.cell_id,
                   rec.cell_center, survivors[r].score});
  }
  return out;
}

double ground_truth_rank_percent(const SignatureDatabase& db,
                                 const Signature& query,
                                 const FusionPolicy& policy,
                                 std::uint64_t truth_cell, Protocol protocol) {
  policy.validate();
  if (db.size() == 0) throw_invalid("cannot rank against an empty database");
  detail::validate_query(db, query);
  const std::size_t truth_index = db.index_of(truth_cell);
  const std::size_t n = db.size();

  auto rank_in_scores = [&](std::span<const double> scores) {
    const double truth_score = scores[truth_index];
    const std::uint64_t truth_id = db.records()[truth_index].cell_id;
    std::size_t better = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (scores[i] < truth_score ||
          (scores[i] == truth_score && db.records()[i].cell_id < truth_id)) {
        ++better;
      }
    }
    return better + 1;
  };

  std::size_t rank = 0;
  switch (protocol) {
    case Protocol::full: {
      const auto d_type = detail::score_part_all(
          db, query, policy.metric_type, SignaturePart::type, 1.0,
          policy.weights);
      const auto d_angle = detail::score_part_all(
          db, query, policy.metric_angle, SignaturePart::angle, 1.0,
          policy.weights);
      std::vector<double> fused(n);
      for (std::size_t i = 0; i < n; ++i) {
        fused[i] = fuse(policy.alpha, d_type[i], policy.beta, d_angle[i]);
      }
      rank = rank_in_scores(fused);
      break;
    }
    case Protocol::two_stage_type_first:
    case Protocol::two_stage_angle_first: {
      const SignaturePart first = protocol == Protocol::two_stage_type_first
                                      ? SignaturePart::type
                                      : SignaturePart::angle;
      const auto order = detail::two_stage_order(db, query, policy, first);
      bool found = false;
      for (std::size_t pos = 0; pos < order.survivors.size(); ++pos) {
        if (order.survivors[pos] == truth_index) {
          rank = pos + 1;
          found = true;
          break;
        }
      }
      if (!found) {
        for (std::size_t pos = 0; pos < order.pruned.size(); ++pos) {
          if (order.pruned[pos] == truth_index) {
            rank = order.survivors.size() + pos + 1;
            found = true;
            break;
          }
        }
      }
      if (!found) throw Error(ErrorCode::not_found, "truth cell lost in ordering");
      break;
    }
    case Protocol::single_type: {
      const auto scores = detail::score_part_all(
          db, query, policy.metric_type, SignaturePart::type, 1.0,
          policy.weights);
      rank = rank_in_scores(scores);
      break;
    }
    case Protocol::single_angle: {
      const auto scores = detail::score_part_all(
          db, query, policy.metric_angle, SignaturePart::angle, 1.0,
          policy.weights);
      rank = rank_in_scores(scores);
      break;
    }
  }
  return 100.0 * static_cast<double>(rank) / static_cast<double>(n);
}

}  // namespace ssig
