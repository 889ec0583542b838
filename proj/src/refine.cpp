#include "twseg/refine.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <tuple>

namespace twseg {

const Partition& select_level(const PartitionHierarchy& h, std::size_t k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "K must be at least 1");
  if (h.partitions.empty()) throw Error(Errc::EmptyInput, "empty hierarchy");
  const Partition* chosen = nullptr;
  for (const auto& p : h.partitions) {
    if (p.num_clusters() >= k) chosen = &p;
  }
  if (chosen == nullptr) throw KUnreachableError(h.partitions.front().num_clusters());
  return *chosen;
}

std::pair<Partition, RefinementTrace> refine_to_k(const FeatureSequence& seq,
                                                  const Partition& p, std::size_t k,
                                                  const GraphOptions& options) {
  if (k < 1) throw Error(Errc::InvalidArgument, "K must be at least 1");
  if (k > p.num_clusters()) {
    throw Error(Errc::KTooLarge, "K=" + std::to_string(k) + " exceeds " +
                                     std::to_string(p.num_clusters()) + " clusters");
  }
  const std::size_t n = seq.num_frames();
  RefinementTrace trace{p.num_clusters(), {}};
  Partition current = p;

  while (current.num_clusters() > k) {
    const LevelSummary s = summarize(seq, current);
    const Matrix<double> normalized = normalize_rows(s.means);
    const auto nn = nearest_neighbors(normalized, s.mean_times, n, options);

    MergeRecord best{-1, -1, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < nn.size(); ++i) {
      const auto j = static_cast<std::size_t>(nn[i]);
      const int a = static_cast<int>(std::min(i, j));
      const int b = static_cast<int>(std::max(i, j));
      const double w = pair_distance(normalized, s.mean_times, n, i, j, options);
      if (best.cluster_a < 0 || w < best.w ||
          (w == best.w && std::tie(a, b) < std::tie(best.cluster_a, best.cluster_b))) {
        best = {a, b, w};
      }
    }

    std::vector<int> merged(current.labels().begin(), current.labels().end());
    for (int& l : merged) {
      if (l == best.cluster_b) l = best.cluster_a;
    }
    current = relabel_dense(merged);
    trace.merges.push_back(best);
  }
  return {std::move(current), std::move(trace)};
}

SegmentResult segment_from_hierarchy(const FeatureSequence& seq, const PartitionHierarchy& h,
                                     std::size_t k, const GraphOptions& options) {
  if (k < 1) throw Error(Errc::InvalidArgument, "K must be at least 1");
  SegmentResult result;
  result.level_counts = h.cluster_counts();
  const Partition* start = nullptr;
  try {
    start = &select_level(h, k);
  } catch (const KUnreachableError&) {
    result.partition = h.partitions.front();
    result.k_unreachable = true;
    result.trace.start_level_clusters = result.partition.num_clusters();
    return result;
  }
  auto [partition, trace] = refine_to_k(seq, *start, k, options);
  result.partition = std::move(partition);
  result.trace = std::move(trace);
  return result;
}

SegmentResult segment(const FeatureSequence& seq, std::size_t k, const GraphOptions& options) {
  if (k < 1) throw Error(Errc::InvalidArgument, "K must be at least 1");
  return segment_from_hierarchy(seq, build_hierarchy(seq, options), k, options);
}

}  // namespace twseg
