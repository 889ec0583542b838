#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "twseg/refine.hpp"
#include "twseg/types.hpp"

namespace twseg::baselines {

/// K contiguous blocks; the first n mod k blocks are one frame longer.
Partition equal_split(std::size_t n, std::size_t k);

struct KmeansConfig {
  std::size_t k = 1;
  std::size_t max_iters = 100;
  std::uint64_t seed = 0;
  std::size_t restarts = 10;
};

struct KmeansResult {
  Partition partition;
  double wcss = 0.0;
  std::size_t best_restart = 0;
  /// Objective after every assignment step of the winning restart.
  std::vector<double> objective_history;
};

/// Lloyd iterations from k-means++ seeds; best restart by within-cluster sum
/// of squares, ties to the lower restart index. Deterministic given the seed.
KmeansResult kmeans(const FeatureSequence& seq, const KmeansConfig& cfg);

struct FinchResult {
  PartitionHierarchy hierarchy;
  SegmentResult segmentation;
};

/// Plain first-neighbor clustering hierarchy: cosine distance only, with
/// shared-neighbor links, refined to k by merging the closest cluster means.
/// `options` overrides the linking rule for configuration comparisons.
FinchResult finch(const FeatureSequence& seq, std::size_t k,
                  const GraphOptions& options = {.temporal_weighting = false,
                                                 .shared_neighbor_links = true});

}  // namespace twseg::baselines
