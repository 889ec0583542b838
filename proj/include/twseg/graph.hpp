#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "twseg/types.hpp"

namespace twseg {

/// Temporally modulated pairwise distances W = G_f * G_t with unit diagonal.
struct WeightedDistances {
  Matrix<double> w;
  std::size_t n_total = 0;
};

/// First-neighbor graph: `nn[i]` is node i's closest other node, `edges` the
/// symmetrized link set as sorted unique (i, j) pairs, both directions present.
struct OneNnGraph {
  std::vector<int> nn;
  std::vector<std::pair<int, int>> edges;

  /// Builds the symmetric edge set from an out-link array.
  static OneNnGraph from_neighbors(std::vector<int> nn);
  std::size_t num_nodes() const noexcept { return nn.size(); }
};

/// How the first-neighbor graph is built and linked.
struct GraphOptions {
  /// Multiply feature distances by normalized time gaps.
  bool temporal_weighting = true;
  /// Also link i and j when they share the same first neighbor.
  bool shared_neighbor_links = false;
};

/// L2-normalizes rows in double precision. Zero-norm rows stay zero.
Matrix<double> normalize_rows(const Matrix<double>& x);
Matrix<double> normalize_rows(const Matrix<float>& x);

/// G_f: 1 - <x_i, x_j> on L2-normalized rows, 1 on the diagonal. Distances
/// are not clamped; signed features may produce values above 1.
Matrix<double> feature_distances(const Matrix<float>& vectors);
Matrix<double> feature_distances(const Matrix<double>& vectors);

/// G_t: |t_i - t_j| / n_total off the diagonal, 1 on it.
Matrix<double> temporal_distances(std::span<const double> timestamps, std::size_t n_total);

WeightedDistances weighted_distances(const Matrix<double>& gf, const Matrix<double>& gt,
                                     std::size_t n_total);

/// Argmin over j != i of w[i][j], lowest j on ties.
OneNnGraph one_nn_graph(const WeightedDistances& w);

/// Union-find components; ids are ordered by each component's smallest node.
Partition connected_components(const OneNnGraph& g);

/// Components of the first-neighbor relation straight from the out-links,
/// optionally with shared-neighbor links.
Partition components_from_neighbors(std::span<const int> nn, bool shared_neighbor_links = false);

/// Fused row-blocked first-neighbor search. Produces exactly the `nn` of
/// one_nn_graph(weighted_distances(...)) without materializing N x N.
/// `normalized` must already be L2-normalized. With temporal weighting off
/// `timestamps` is ignored and W = G_f.
std::vector<int> nearest_neighbors(const Matrix<double>& normalized,
                                   std::span<const double> timestamps, std::size_t n_total,
                                   const GraphOptions& options = {});

/// Distance of one pair under the same arithmetic as the matrix builders.
double pair_distance(const Matrix<double>& normalized, std::span<const double> timestamps,
                     std::size_t n_total, std::size_t i, std::size_t j,
                     const GraphOptions& options = {});

/// Timestamps 1..n.
std::vector<double> frame_timestamps(std::size_t n);

}  // namespace twseg
