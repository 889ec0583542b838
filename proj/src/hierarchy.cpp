#include "twseg/hierarchy.hpp"

#include <string>

namespace twseg {

LevelSummary summarize(const FeatureSequence& seq, const Partition& p) {
  const std::size_t n = seq.num_frames();
  const std::size_t d = seq.dims();
  if (p.size() != n) {
    throw Error(Errc::LengthMismatch, "partition has " + std::to_string(p.size()) +
                                          " labels for " + std::to_string(n) + " frames");
  }
  const std::size_t c = p.num_clusters();
  LevelSummary s{Matrix<double>(c, d, 0.0), std::vector<double>(c, 0.0),
                 std::vector<std::size_t>(c, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    const auto label = static_cast<std::size_t>(p[i]);
    auto dst = s.means.row(label);
    auto src = seq.frames.row(i);
    for (std::size_t k = 0; k < d; ++k) dst[k] += static_cast<double>(src[k]);
    s.mean_times[label] += static_cast<double>(i + 1);
    ++s.sizes[label];
  }
  for (std::size_t l = 0; l < c; ++l) {
    const double inv = 1.0 / static_cast<double>(s.sizes[l]);
    for (double& v : s.means.row(l)) v *= inv;
    s.mean_times[l] *= inv;
  }
  return s;
}

PartitionHierarchy build_hierarchy(const FeatureSequence& seq, const GraphOptions& options) {
  const std::size_t n = seq.num_frames();
  if (n < 2) {
    throw Error(Errc::TooFewFrames,
                "sequence '" + seq.video_id + "' has " + std::to_string(n) + " frame(s)");
  }
  validate_sequence(seq);

  const auto frame_nn =
      nearest_neighbors(normalize_rows(seq.frames), frame_timestamps(n), n, options);
  Partition current = components_from_neighbors(frame_nn, options.shared_neighbor_links);

  PartitionHierarchy h;
  h.partitions.push_back(current);
  while (current.num_clusters() >= 2) {
    const LevelSummary s = summarize(seq, current);
    const auto cluster_nn = nearest_neighbors(normalize_rows(s.means), s.mean_times, n, options);
    const Partition merged =
        components_from_neighbors(cluster_nn, options.shared_neighbor_links);
    if (merged.num_clusters() == 1) break;

    std::vector<int> composed(n);
    for (std::size_t i = 0; i < n; ++i) composed[i] = merged[static_cast<std::size_t>(current[i])];
    current = relabel_dense(composed);
    h.partitions.push_back(current);
  }
  return h;
}

}  // namespace twseg
