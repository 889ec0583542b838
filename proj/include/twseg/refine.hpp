#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "twseg/graph.hpp"
#include "twseg/hierarchy.hpp"
#include "twseg/types.hpp"

namespace twseg {

struct MergeRecord {
  int cluster_a = 0;  // smaller id at the time of the merge
  int cluster_b = 0;
  double w = 0.0;
};

/// Audit trail of the one-merge-at-a-time refinement.
struct RefinementTrace {
  std::size_t start_level_clusters = 0;
  std::vector<MergeRecord> merges;
};

/// The level with the fewest clusters that still has at least k.
/// Throws KUnreachableError(finest count) when even the first level is short.
const Partition& select_level(const PartitionHierarchy& h, std::size_t k);

/// Merges the closest linked pair of clusters (by the weighted distance of
/// their means) until exactly k remain. Ties go to the lexicographically
/// smallest (a, b). Throws KTooLarge when k exceeds the cluster count.
std::pair<Partition, RefinementTrace> refine_to_k(const FeatureSequence& seq,
                                                  const Partition& p, std::size_t k,
                                                  const GraphOptions& options = {});

struct SegmentResult {
  Partition partition;
  /// Set when K exceeded the finest level; `partition` is then that level.
  bool k_unreachable = false;
  std::vector<std::size_t> level_counts;
  RefinementTrace trace;
};

/// Level selection plus refinement on an already built hierarchy.
SegmentResult segment_from_hierarchy(const FeatureSequence& seq, const PartitionHierarchy& h,
                                     std::size_t k, const GraphOptions& options = {});

/// Full pipeline: hierarchy, level selection, refinement to k.
SegmentResult segment(const FeatureSequence& seq, std::size_t k,
                      const GraphOptions& options = {});

}  // namespace twseg
