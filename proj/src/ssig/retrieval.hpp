#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ssig/metrics.hpp"
#include "ssig/model.hpp"

namespace ssig {

struct FusionPolicy {
  MetricKind metric_type = MetricKind::edit;
  MetricKind metric_angle = MetricKind::edit;
  double alpha = 0.5;
  double beta = 0.5;  // must equal 1 - alpha
  double k_percent = 5.0;
  std::uint32_t t = 100;
  EditWeights weights{};

  static FusionPolicy with_alpha(double alpha) {
    FusionPolicy p;
    p.alpha = alpha;
    p.beta = 1.0 - alpha;
    return p;
  }
  void validate() const;
};

enum class Protocol {
  full,
  two_stage_type_first,
  two_stage_angle_first,
  single_type,
  single_angle,
};

struct RankedCandidate {
  std::uint32_t rank = 0;  // 1-based, consecutive
  std::uint64_t cell_id = 0;
  GeoPoint cell_center;
  double score = 0.0;
};

// Fused distance per the weighted-sum rule: alpha * type distance + beta *
// angle distance.
double score_fused(const Signature& query, const Signature& record,
                   const FusionPolicy& policy,
                   std::uint32_t quantization_levels);

// Scores every record with the fused metric and returns the best
// min(t, |db|) candidates, ascending score, ties broken by ascending cell id.
std::vector<RankedCandidate> rank_full(const SignatureDatabase& db,
                                       const Signature& query,
                                       const FusionPolicy& policy);

// Stage 1 ranks all records by the weighted single-part distance and keeps
// the best ceil(k% * |db|); stage 2 adds the other part's weighted distance
// and re-ranks the survivors. k = 100 reproduces rank_full exactly.
std::vector<RankedCandidate> rank_two_stage(const SignatureDatabase& db,
                                            const Signature& query,
                                            const FusionPolicy& policy,
                                            SignaturePart first_part);

// Single-metric ranking over one part, same tie rule.
std::vector<RankedCandidate> rank_single(const SignatureDatabase& db,
                                         const Signature& query,
                                         MetricKind kind, SignaturePart part,
                                         std::uint32_t t = 100,
                                         const EditWeights& weights = {});

// Position of the ground-truth cell in the protocol's total ordering,
// expressed as 100 * rank / |db|. For two-stage protocols, records pruned
// at stage 1 keep their stage-1 order after all survivors.
double ground_truth_rank_percent(const SignatureDatabase& db,
                                 const Signature& query,
                                 const FusionPolicy& policy,
                                 std::uint64_t truth_cell, Protocol protocol);

namespace detail {

// The weighted sum of Eq.-style fusion. Every scoring path shares this one
// expression so protocols agree bit for bit.
inline double fuse(double alpha, double d_type, double beta, double d_angle) {
  return alpha * d_type + beta * d_angle;
}

// Full single-part scoring for every record (no pruning); weight simply
// scales the distances.
std::vector<double> score_part_all(const SignatureDatabase& db,
                                   const Signature& query, MetricKind kind,
                                   SignaturePart part, double weight,
                                   const EditWeights& weights);

// Total order used everywhere: ascending score, then ascending cell id.
struct ScoreOrder {
  std::span<const double> scores;
  const SignatureDatabase* db;
  bool operator()(std::size_t a, std::size_t b) const {
    const double sa = scores[a];
    const double sb = scores[b];
    if (sa != sb) return sa < sb;
    return db->records()[a].cell_id < db->records()[b].cell_id;
  }
};

std::vector<RankedCandidate> top_t(const SignatureDatabase& db,
                                   std::span<const double> scores,
                                   std::uint32_t t);

// Full two-stage ordering (survivors by final score, then pruned records by
// stage-1 score), as used for ground-truth ranking.
struct TwoStageOrder {
  std::vector<std::size_t> survivors;  // sorted by (final score, cell id)
  std::vector<std::size_t> pruned;     // sorted by (stage-1 score, cell id)
  std::vector<double> final_scores;    // survivors only, index-aligned with db
};
TwoStageOrder two_stage_order(const SignatureDatabase& db,
                              const Signature& query,
                              const FusionPolicy& policy,
                              SignaturePart first_part);

std::size_t stage_two_survivor_count(std::size_t record_count,
                                     double k_percent);

void validate_query(const SignatureDatabase& db, const Signature& query);

}  // namespace detail

}  // namespace ssig
