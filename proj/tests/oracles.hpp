#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "twseg/graph.hpp"
#include "twseg/refine.hpp"
#include "twseg/types.hpp"

namespace oracle {

// Cluster means and mean timestamps, recomputed from scratch in long double.
struct Means {
  std::vector<std::vector<long double>> x;
  std::vector<long double> t;
};

inline Means cluster_means(const twseg::FeatureSequence& seq, std::span<const int> labels,
                           std::size_t clusters) {
  Means m;
  m.x.assign(clusters, std::vector<long double>(seq.dims(), 0.0L));
  m.t.assign(clusters, 0.0L);
  std::vector<std::size_t> count(clusters, 0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    for (std::size_t k = 0; k < seq.dims(); ++k) m.x[c][k] += seq.frames(i, k);
    m.t[c] += static_cast<long double>(i + 1);
    ++count[c];
  }
  for (std::size_t c = 0; c < clusters; ++c) {
    for (auto& v : m.x[c]) v /= static_cast<long double>(count[c]);
    m.t[c] /= static_cast<long double>(count[c]);
  }
  return m;
}

inline long double weighted(const Means& m, std::size_t i, std::size_t j, std::size_t n_total,
                            bool temporal) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t k = 0; k < m.x[i].size(); ++k) {
    ab += m.x[i][k] * m.x[j][k];
    aa += m.x[i][k] * m.x[i][k];
    bb += m.x[j][k] * m.x[j][k];
  }
  const long double gf = (aa == 0 || bb == 0) ? 1.0L : 1.0L - ab / std::sqrt(aa * bb);
  if (!temporal) return gf;
  return gf * std::fabs(m.t[i] - m.t[j]) / static_cast<long double>(n_total);
}

// Replays a refinement trace: at every step the recorded pair must be a
// first-neighbor link whose W is within `tol` of the smallest W over all
// links. Returns a description of the first violation.
inline std::optional<std::string> check_refinement(const twseg::FeatureSequence& seq,
                                                   const twseg::Partition& start,
                                                   const twseg::RefinementTrace& trace,
                                                   const twseg::Partition& result,
                                                   bool temporal, long double tol = 1e-9L) {
  const std::size_t n = seq.num_frames();
  std::vector<int> labels(start.labels().begin(), start.labels().end());
  std::size_t clusters = start.num_clusters();
  if (trace.start_level_clusters != clusters) return "start count mismatch";
  for (std::size_t step = 0; step < trace.merges.size(); ++step) {
    const auto& rec = trace.merges[step];
    const Means m = cluster_means(seq, labels, clusters);
    long double best = INFINITY;
    std::vector<std::pair<int, int>> links;
    for (std::size_t i = 0; i < clusters; ++i) {
      long double row_min = INFINITY;
      for (std::size_t j = 0; j < clusters; ++j) {
        if (j != i) row_min = std::min(row_min, weighted(m, i, j, n, temporal));
      }
      for (std::size_t j = 0; j < clusters; ++j) {
        // near-ties in long double may resolve either way in double
        if (j != i && weighted(m, i, j, n, temporal) <= row_min + tol) {
          links.emplace_back(static_cast<int>(std::min(i, j)), static_cast<int>(std::max(i, j)));
        }
      }
      best = std::min(best, row_min);
    }
    if (rec.cluster_a < 0 || rec.cluster_b <= rec.cluster_a ||
        static_cast<std::size_t>(rec.cluster_b) >= clusters) {
      return "step " + std::to_string(step) + ": bad cluster ids";
    }
    if (std::find(links.begin(), links.end(), std::pair{rec.cluster_a, rec.cluster_b}) ==
        links.end()) {
      return "step " + std::to_string(step) + ": merged pair is not a first-neighbor link";
    }
    const long double w = weighted(m, static_cast<std::size_t>(rec.cluster_a),
                                   static_cast<std::size_t>(rec.cluster_b), n, temporal);
    if (w > best + tol) return "step " + std::to_string(step) + ": merged pair is not minimal";
    if (std::fabs(w - static_cast<long double>(rec.w)) > tol) {
      return "step " + std::to_string(step) + ": recorded W differs from recomputed W";
    }
    for (int& l : labels) {
      if (l == rec.cluster_b) l = rec.cluster_a;
    }
    const twseg::Partition dense = twseg::relabel_dense(labels);
    labels.assign(dense.labels().begin(), dense.labels().end());
    --clusters;
  }
  if (!(twseg::Partition(labels) == result)) return "replayed partition differs from result";
  return std::nullopt;
}

}  // namespace oracle
