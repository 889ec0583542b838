#include "twseg/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "twseg/random.hpp"

namespace twseg::eval {
namespace {

void check_lengths(const Partition& pred, const GroundTruth& gt) {
  if (pred.size() != gt.size()) {
    throw Error(Errc::LengthMismatch, "prediction has " + std::to_string(pred.size()) +
                                          " frames, ground truth " + std::to_string(gt.size()));
  }
}

// Kuhn-Munkres with potentials, minimizing an integer cost on an n x n
// matrix (1-based internally). Returns the column assigned to each row.
std::vector<int> min_cost_assignment(const std::vector<std::int64_t>& cost, std::size_t n) {
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> u(n + 1, 0), v(n + 1, 0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<std::int64_t> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      std::int64_t delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const std::int64_t cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

}  // namespace

std::int64_t OverlapMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

void OverlapMatrix::accumulate(const OverlapMatrix& other) {
  if (other.num_gt != num_gt) {
    throw Error(Errc::ShapeMismatch, "overlap matrices use different label spaces");
  }
  if (other.num_pred > num_pred) {
    counts.resize(other.num_pred * num_gt, 0);
    num_pred = other.num_pred;
  }
  for (std::size_t p = 0; p < other.num_pred; ++p) {
    for (std::size_t g = 0; g < num_gt; ++g) (*this)(p, g) += other(p, g);
  }
}

OverlapMatrix overlap(std::span<const int> pred, std::size_t num_pred, std::span<const int> gt,
                      std::size_t num_gt) {
  if (pred.size() != gt.size()) {
    throw Error(Errc::LengthMismatch, "prediction and ground truth differ in length");
  }
  OverlapMatrix m(num_pred, num_gt);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++m(static_cast<std::size_t>(pred[i]), static_cast<std::size_t>(gt[i]));
  }
  return m;
}

OverlapMatrix overlap(const Partition& pred, const GroundTruth& gt) {
  check_lengths(pred, gt);
  return overlap(pred.labels(), pred.num_clusters(), gt.labels, gt.num_labels());
}

Mapping hungarian_match(const OverlapMatrix& m) {
  if (m.num_pred == 0 || m.num_gt == 0) {
    throw Error(Errc::EmptyInput, "overlap matrix has no rows or columns");
  }
  const std::size_t n = std::max(m.num_pred, m.num_gt);
  std::int64_t max_count = 0;
  for (auto c : m.counts) max_count = std::max(max_count, c);
  std::vector<std::int64_t> cost(n * n, max_count);
  for (std::size_t p = 0; p < m.num_pred; ++p) {
    for (std::size_t g = 0; g < m.num_gt; ++g) cost[p * n + g] = max_count - m(p, g);
  }
  const auto row_to_col = min_cost_assignment(cost, n);

  Mapping mapping;
  mapping.pred_to_gt.assign(m.num_pred, -1);
  for (std::size_t p = 0; p < m.num_pred; ++p) {
    const int g = row_to_col[p];
    if (g >= 0 && static_cast<std::size_t>(g) < m.num_gt) {
      mapping.pred_to_gt[p] = g;
      mapping.total_overlap += m(p, static_cast<std::size_t>(g));
    }
  }
  return mapping;
}

double mof(const Partition& pred, const GroundTruth& gt, const Mapping& mapping) {
  check_lengths(pred, gt);
  if (pred.size() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (mapping[static_cast<std::size_t>(pred[i])] == gt.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pred.size());
}

double iou(const Partition& pred, const GroundTruth& gt, const Mapping& mapping) {
  const OverlapMatrix m = overlap(pred, gt);
  const auto pred_sizes = pred.cluster_sizes();
  std::vector<std::int64_t> gt_sizes(gt.num_labels(), 0);
  for (int l : gt.labels) ++gt_sizes[static_cast<std::size_t>(l)];

  double sum = 0.0;
  std::size_t present = 0;
  for (std::size_t g = 0; g < gt.num_labels(); ++g) {
    if (gt_sizes[g] == 0) continue;
    ++present;
    for (std::size_t p = 0; p < pred.num_clusters(); ++p) {
      if (mapping[p] != static_cast<int>(g)) continue;
      const auto inter = static_cast<double>(m(p, g));
      const double uni = static_cast<double>(pred_sizes[p]) + static_cast<double>(gt_sizes[g]) - inter;
      sum += inter / uni;
    }
  }
  return present == 0 ? 0.0 : sum / static_cast<double>(present);
}

F1Score f1(const Partition& pred, const GroundTruth& gt, const Mapping& mapping, F1Mode mode) {
  const OverlapMatrix m = overlap(pred, gt);
  const auto pred_sizes = pred.cluster_sizes();
  std::vector<std::int64_t> gt_sizes(gt.num_labels(), 0);
  for (int l : gt.labels) ++gt_sizes[static_cast<std::size_t>(l)];

  F1Score s;
  if (mode == F1Mode::Micro) {
    std::int64_t inter = 0;
    std::int64_t pred_total = 0;
    std::int64_t gt_total = 0;
    for (std::size_t p = 0; p < pred.num_clusters(); ++p) {
      const int g = mapping[p];
      if (g < 0) continue;
      inter += m(p, static_cast<std::size_t>(g));
      pred_total += static_cast<std::int64_t>(pred_sizes[p]);
    }
    for (auto c : gt_sizes) gt_total += c;
    s.precision = pred_total == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(pred_total);
    s.recall = gt_total == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(gt_total);
  } else {
    double p_sum = 0.0;
    double r_sum = 0.0;
    std::size_t matched = 0;
    std::size_t present = 0;
    for (std::size_t g = 0; g < gt.num_labels(); ++g) {
      if (gt_sizes[g] == 0) continue;
      ++present;
      for (std::size_t p = 0; p < pred.num_clusters(); ++p) {
        if (mapping[p] != static_cast<int>(g)) continue;
        const auto inter = static_cast<double>(m(p, g));
        p_sum += inter / static_cast<double>(pred_sizes[p]);
        r_sum += inter / static_cast<double>(gt_sizes[g]);
        ++matched;
      }
    }
    s.precision = matched == 0 ? 0.0 : p_sum / static_cast<double>(matched);
    s.recall = present == 0 ? 0.0 : r_sum / static_cast<double>(present);
  }
  s.f1 = (s.precision + s.recall) == 0.0
             ? 0.0
             : 2.0 * s.precision * s.recall / (s.precision + s.recall);
  return s;
}

MidpointHit midpoint_hit(std::span<const Segment> pred_segments,
                         std::span<const Segment> gt_segments, const Mapping& mapping) {
  MidpointHit out;
  if (pred_segments.empty() || gt_segments.empty()) return out;
  std::vector<char> claimed(gt_segments.size(), 0);
  std::size_t hits = 0;
  for (const auto& seg : pred_segments) {
    const std::size_t mid = (seg.start + seg.end) / 2;
    auto it = std::upper_bound(gt_segments.begin(), gt_segments.end(), mid,
                               [](std::size_t v, const Segment& s) { return v < s.start; });
    if (it == gt_segments.begin()) continue;
    --it;
    if (mid > it->end) continue;
    const auto idx = static_cast<std::size_t>(it - gt_segments.begin());
    if (claimed[idx] || it->label != mapping[static_cast<std::size_t>(seg.label)]) continue;
    claimed[idx] = 1;
    ++hits;
  }
  out.precision = static_cast<double>(hits) / static_cast<double>(pred_segments.size());
  out.recall = static_cast<double>(hits) / static_cast<double>(gt_segments.size());
  return out;
}

double purity(const Partition& pred, const GroundTruth& gt) {
  const OverlapMatrix m = overlap(pred, gt);
  if (pred.size() == 0) return 0.0;
  std::int64_t sum = 0;
  for (std::size_t p = 0; p < m.num_pred; ++p) {
    std::int64_t best = 0;
    for (std::size_t g = 0; g < m.num_gt; ++g) best = std::max(best, m(p, g));
    sum += best;
  }
  return static_cast<double>(sum) / static_cast<double>(pred.size());
}

std::vector<std::size_t> background_keep_indices(const GroundTruth& gt, double tau,
                                                 std::uint64_t seed) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(Errc::InvalidArgument, "tau must lie in [0, 1]");
  }
  std::vector<std::size_t> background;
  if (const auto bg = gt.background_id()) {
    for (std::size_t i = 0; i < gt.size(); ++i) {
      if (gt.labels[i] == *bg) background.push_back(i);
    }
  }
  // The epsilon keeps e.g. 0.29 * 100 from flooring to 28.
  const auto remove = std::min(
      background.size(),
      static_cast<std::size_t>(std::floor(tau * static_cast<double>(background.size()) + 1e-9)));

  Rng rng = make_rng(seed);
  for (std::size_t i = 0; i < remove; ++i) {
    const std::size_t j = i + uniform_index(rng, background.size() - i);
    std::swap(background[i], background[j]);
  }
  std::vector<char> drop(gt.size(), 0);
  for (std::size_t i = 0; i < remove; ++i) drop[background[i]] = 1;

  std::vector<std::size_t> keep;
  keep.reserve(gt.size() - remove);
  for (std::size_t i = 0; i < gt.size(); ++i) {
    if (!drop[i]) keep.push_back(i);
  }
  return keep;
}

FilteredSequence filter_background(const FeatureSequence& seq, const GroundTruth& gt, double tau,
                                   std::uint64_t seed) {
  if (seq.num_frames() != gt.size()) {
    throw Error(Errc::LengthMismatch, "features and labels of '" + seq.video_id +
                                          "' differ in length");
  }
  FilteredSequence out;
  out.original_index = background_keep_indices(gt, tau, seed);
  const std::size_t d = seq.dims();
  out.sequence.video_id = seq.video_id;
  out.sequence.frames = Matrix<float>(out.original_index.size(), d);
  out.ground_truth.names = gt.names;
  out.ground_truth.background_label = gt.background_label;
  out.ground_truth.labels.reserve(out.original_index.size());
  for (std::size_t r = 0; r < out.original_index.size(); ++r) {
    const std::size_t src = out.original_index[r];
    std::copy_n(seq.frames.row(src).begin(), d, out.sequence.frames.row(r).begin());
    out.ground_truth.labels.push_back(gt.labels[src]);
  }
  return out;
}

Mapping match(const Partition& pred, const GroundTruth& gt) {
  check_lengths(pred, gt);
  const Partition canon_pred = relabel_dense(pred.labels());
  const Partition canon_gt = relabel_dense(gt.labels);
  std::vector<int> pred_to_canon(pred.num_clusters(), 0);
  std::vector<int> canon_to_gt(canon_gt.num_clusters(), 0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    pred_to_canon[static_cast<std::size_t>(pred[i])] = canon_pred[i];
    canon_to_gt[static_cast<std::size_t>(canon_gt[i])] = gt.labels[i];
  }
  const Mapping canon = hungarian_match(
      overlap(canon_pred.labels(), canon_pred.num_clusters(), canon_gt.labels(),
              canon_gt.num_clusters()));
  Mapping out;
  out.total_overlap = canon.total_overlap;
  out.pred_to_gt.assign(pred.num_clusters(), -1);
  for (std::size_t p = 0; p < pred.num_clusters(); ++p) {
    const int g = canon[static_cast<std::size_t>(pred_to_canon[p])];
    if (g >= 0) out.pred_to_gt[p] = canon_to_gt[static_cast<std::size_t>(g)];
  }
  return out;
}

EvalReport evaluate(const Partition& pred, const GroundTruth& gt, const Mapping& mapping,
                    F1Mode mode) {
  check_lengths(pred, gt);
  EvalReport r;
  r.num_frames = pred.size();
  r.mapping = mapping;
  r.mof = mof(pred, gt, mapping);
  r.iou = iou(pred, gt, mapping);
  r.f1 = f1(pred, gt, mapping, mode).f1;
  const auto hit = midpoint_hit(segments_from_labels(pred.labels()),
                                segments_from_labels(gt.labels), mapping);
  r.midpoint_precision = hit.precision;
  r.midpoint_recall = hit.recall;
  r.purity = purity(pred, gt);
  return r;
}

EvalReport evaluate(const Partition& pred, const GroundTruth& gt, F1Mode mode) {
  return evaluate(pred, gt, match(pred, gt), mode);
}

EvalReport aggregate(std::span<const EvalReport> reports, AggregateMode mode) {
  if (reports.empty()) throw Error(Errc::EmptyInput, "no reports to aggregate");
  EvalReport out;
  double weight_sum = 0.0;
  for (const auto& r : reports) {
    const double w = mode == AggregateMode::Video ? 1.0 : static_cast<double>(r.num_frames);
    weight_sum += w;
    out.mof += w * r.mof;
    out.iou += w * r.iou;
    out.f1 += w * r.f1;
    out.midpoint_precision += w * r.midpoint_precision;
    out.midpoint_recall += w * r.midpoint_recall;
    out.purity += w * r.purity;
    out.num_frames += r.num_frames;
  }
  if (weight_sum == 0.0) return out;
  out.mof /= weight_sum;
  out.iou /= weight_sum;
  out.f1 /= weight_sum;
  out.midpoint_precision /= weight_sum;
  out.midpoint_recall /= weight_sum;
  out.purity /= weight_sum;
  return out;
}

}  // namespace twseg::eval
