#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "twseg/types.hpp"

namespace twseg::eval {

/// Frame co-occurrence counts between P predicted clusters and G labels.
struct OverlapMatrix {
  std::size_t num_pred = 0;
  std::size_t num_gt = 0;
  std::vector<std::int64_t> counts;  // row-major P x G

  OverlapMatrix() = default;
  OverlapMatrix(std::size_t p, std::size_t g) : num_pred(p), num_gt(g), counts(p * g, 0) {}

  std::int64_t& operator()(std::size_t p, std::size_t g) { return counts[p * num_gt + g]; }
  std::int64_t operator()(std::size_t p, std::size_t g) const { return counts[p * num_gt + g]; }
  std::int64_t total() const;
  /// Adds another matrix with the same label space, growing rows as needed.
  void accumulate(const OverlapMatrix& other);
};

OverlapMatrix overlap(std::span<const int> pred, std::size_t num_pred, std::span<const int> gt,
                      std::size_t num_gt);
OverlapMatrix overlap(const Partition& pred, const GroundTruth& gt);

/// Maximum-total-overlap one-to-one assignment (Kuhn-Munkres on the padded
/// square matrix). Predicted ids left over when P > G map to -1.
Mapping hungarian_match(const OverlapMatrix& overlap);

/// Hungarian matching on ids renumbered by first occurrence in time, so that
/// ties between equally good assignments resolve the same way under any
/// relabeling of either side.
Mapping match(const Partition& pred, const GroundTruth& gt);

double mof(const Partition& pred, const GroundTruth& gt, const Mapping& mapping);

/// Mean over ground-truth labels of |pred ∩ gt| / |pred ∪ gt| for the
/// matched pair; labels without a match contribute 0.
double iou(const Partition& pred, const GroundTruth& gt, const Mapping& mapping);

enum class F1Mode { Micro, Macro };

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Micro: intersections pooled over matched pairs, divided by the frames of
/// the matched predicted clusters (precision) and by all frames (recall).
/// Macro: per-label precision and recall averaged over ground-truth labels.
/// F1 is 0 when both P and R are 0.
F1Score f1(const Partition& pred, const GroundTruth& gt, const Mapping& mapping,
           F1Mode mode = F1Mode::Micro);

struct MidpointHit {
  double precision = 0.0;
  double recall = 0.0;
};

/// A predicted segment hits when the midpoint floor((start+end)/2) lies in an
/// unclaimed ground-truth segment of its mapped label. Claims are greedy in
/// temporal order of the predicted segments.
MidpointHit midpoint_hit(std::span<const Segment> pred_segments,
                         std::span<const Segment> gt_segments, const Mapping& mapping);

/// Size-weighted majority-label purity: sum over clusters of the largest
/// overlap, divided by N.
double purity(const Partition& pred, const GroundTruth& gt);

struct FilteredSequence {
  FeatureSequence sequence;
  GroundTruth ground_truth;
  std::vector<std::size_t> original_index;
};

/// Indices (ascending) of the frames that survive removing
/// floor(tau * #background) uniformly chosen background frames.
std::vector<std::size_t> background_keep_indices(const GroundTruth& gt, double tau,
                                                 std::uint64_t seed);

FilteredSequence filter_background(const FeatureSequence& seq, const GroundTruth& gt, double tau,
                                   std::uint64_t seed);

/// All metrics for one video under a given mapping.
EvalReport evaluate(const Partition& pred, const GroundTruth& gt, const Mapping& mapping,
                    F1Mode mode = F1Mode::Micro);

/// Per-video Hungarian matching followed by all metrics.
EvalReport evaluate(const Partition& pred, const GroundTruth& gt, F1Mode mode = F1Mode::Micro);

enum class AggregateMode { Video, Frame };

/// Video: unweighted mean over reports. Frame: weighted by num_frames.
EvalReport aggregate(std::span<const EvalReport> reports, AggregateMode mode);

}  // namespace twseg::eval
