#pragma once

#include <cstddef>
#include <vector>

#include "twseg/graph.hpp"
#include "twseg/types.hpp"

namespace twseg {

/// Per-cluster averages over the original frames of a sequence.
struct LevelSummary {
  Matrix<double> means;           // C x d
  std::vector<double> mean_times; // mean of 1-based frame timestamps
  std::vector<std::size_t> sizes;
};

LevelSummary summarize(const FeatureSequence& seq, const Partition& p);

/// Recursive first-neighbor partitioning. The first level comes from the
/// frame graph; every further level links cluster means (with averaged
/// timestamps, normalized by the original N) and is kept only while it has
/// more than one cluster. A one-cluster first level is kept as the sole
/// level. Throws TooFewFrames for N < 2.
PartitionHierarchy build_hierarchy(const FeatureSequence& seq,
                                   const GraphOptions& options = {});

}  // namespace twseg
