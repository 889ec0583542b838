#include "twseg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "union_find.hpp"

namespace twseg {
namespace {

constexpr std::size_t kRowBlock = 8;
constexpr std::size_t kColBlock = 128;

template <typename T>
Matrix<double> normalize_impl(const Matrix<T>& x) {
  Matrix<double> out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto src = x.row(r);
    auto dst = out.row(r);
    double sq = 0.0;
    for (std::size_t c = 0; c < src.size(); ++c) {
      const double v = static_cast<double>(src[c]);
      if (!std::isfinite(v)) throw NonFiniteError(r, c);
      sq += v * v;
    }
    if (sq == 0.0) continue;
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t c = 0; c < src.size(); ++c) dst[c] = static_cast<double>(src[c]) * inv;
  }
  return out;
}

Matrix<double> transpose(const Matrix<double>& x) {
  Matrix<double> t(x.cols(), x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) t(c, r) = x(r, c);
  }
  return t;
}

// acc[b * kColBlock + j] = sum over k (in order) of xn(i0 + b, k) * xt(k, j0 + j).
// Every entry is a plain sequential sum, so it is bit-identical to the scalar
// dot product and symmetric in (i, j).
void dot_block(const Matrix<double>& xn, const Matrix<double>& xt, std::size_t i0,
               std::size_t rows, std::size_t j0, std::size_t cols, double* acc) {
  std::fill(acc, acc + kRowBlock * kColBlock, 0.0);
  const std::size_t d = xn.cols();
  for (std::size_t k = 0; k < d; ++k) {
    const double* bt = &xt(k, j0);
    for (std::size_t b = 0; b < rows; ++b) {
      const double a = xn(i0 + b, k);
      double* out = acc + b * kColBlock;
      for (std::size_t j = 0; j < cols; ++j) out[j] += a * bt[j];
    }
  }
}

double scalar_dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

double temporal_gap(double ti, double tj, std::size_t n_total) {
  return std::abs(ti - tj) / static_cast<double>(n_total);
}

Matrix<double> cosine_distance_matrix(const Matrix<double>& xn) {
  const std::size_t n = xn.rows();
  Matrix<double> g(n, n, 1.0);
  if (n == 0) return g;
  const Matrix<double> xt = transpose(xn);
  std::vector<double> acc(kRowBlock * kColBlock);
  // Column chunks outermost so one d x kColBlock panel of xt stays in cache.
  for (std::size_t j0 = 0; j0 < n; j0 += kColBlock) {
    const std::size_t cols = std::min(kColBlock, n - j0);
    for (std::size_t i0 = 0; i0 < n; i0 += kRowBlock) {
      const std::size_t rows = std::min(kRowBlock, n - i0);
      dot_block(xn, xt, i0, rows, j0, cols, acc.data());
      for (std::size_t b = 0; b < rows; ++b) {
        for (std::size_t j = 0; j < cols; ++j) {
          if (i0 + b != j0 + j) g(i0 + b, j0 + j) = 1.0 - acc[b * kColBlock + j];
        }
      }
    }
  }
  return g;
}

}  // namespace

Matrix<double> normalize_rows(const Matrix<double>& x) { return normalize_impl(x); }
Matrix<double> normalize_rows(const Matrix<float>& x) { return normalize_impl(x); }

Matrix<double> feature_distances(const Matrix<float>& vectors) {
  return cosine_distance_matrix(normalize_rows(vectors));
}

Matrix<double> feature_distances(const Matrix<double>& vectors) {
  return cosine_distance_matrix(normalize_rows(vectors));
}

Matrix<double> temporal_distances(std::span<const double> timestamps, std::size_t n_total) {
  if (n_total == 0) throw Error(Errc::ZeroLength, "temporal normalizer is zero");
  const std::size_t n = timestamps.size();
  Matrix<double> g(n, n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) g(i, j) = temporal_gap(timestamps[i], timestamps[j], n_total);
    }
  }
  return g;
}

WeightedDistances weighted_distances(const Matrix<double>& gf, const Matrix<double>& gt,
                                     std::size_t n_total) {
  if (gf.rows() != gt.rows() || gf.cols() != gt.cols() || gf.rows() != gf.cols()) {
    throw Error(Errc::ShapeMismatch, "feature and temporal graphs differ in shape");
  }
  WeightedDistances out{Matrix<double>(gf.rows(), gf.cols(), 1.0), n_total};
  for (std::size_t i = 0; i < gf.rows(); ++i) {
    for (std::size_t j = 0; j < gf.cols(); ++j) {
      if (i != j) out.w(i, j) = gf(i, j) * gt(i, j);
    }
  }
  return out;
}

OneNnGraph OneNnGraph::from_neighbors(std::vector<int> nn) {
  OneNnGraph g;
  g.edges.reserve(2 * nn.size());
  for (std::size_t i = 0; i < nn.size(); ++i) {
    const int j = nn[i];
    if (j < 0 || static_cast<std::size_t>(j) >= nn.size() || static_cast<std::size_t>(j) == i) {
      throw Error(Errc::InvalidArgument, "invalid neighbor index at node " + std::to_string(i));
    }
    g.edges.emplace_back(static_cast<int>(i), j);
    g.edges.emplace_back(j, static_cast<int>(i));
  }
  std::sort(g.edges.begin(), g.edges.end());
  g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
  g.nn = std::move(nn);
  return g;
}

OneNnGraph one_nn_graph(const WeightedDistances& w) {
  const std::size_t n = w.w.rows();
  if (n < 2) throw Error(Errc::TooFewNodes, "first-neighbor graph needs at least 2 nodes");
  std::vector<int> nn(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      if (nn[i] < 0 || w.w(i, j) < best) {
        best = w.w(i, j);
        nn[i] = static_cast<int>(j);
      }
    }
  }
  return OneNnGraph::from_neighbors(std::move(nn));
}

Partition components_from_neighbors(std::span<const int> nn, bool shared_neighbor_links) {
  const std::size_t n = nn.size();
  detail::UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) uf.unite(i, static_cast<std::size_t>(nn[i]));
  if (shared_neighbor_links) {
    // i ~ j when nn(i) == nn(j): chain every node to the first one sharing its neighbor.
    std::vector<int> first_with(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
      int& first = first_with[static_cast<std::size_t>(nn[i])];
      if (first < 0) {
        first = static_cast<int>(i);
      } else {
        uf.unite(i, static_cast<std::size_t>(first));
      }
    }
  }
  std::vector<int> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = static_cast<int>(uf.find(i));
  return relabel_dense(roots);
}

Partition connected_components(const OneNnGraph& g) {
  const std::size_t n = g.num_nodes();
  detail::UnionFind uf(n);
  for (const auto& [a, b] : g.edges) {
    uf.unite(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  }
  std::vector<int> roots(n);
  for (std::size_t i = 0; i < n; ++i) roots[i] = static_cast<int>(uf.find(i));
  return relabel_dense(roots);
}

std::vector<int> nearest_neighbors(const Matrix<double>& normalized,
                                   std::span<const double> timestamps, std::size_t n_total,
                                   const GraphOptions& options) {
  const std::size_t n = normalized.rows();
  if (n < 2) throw Error(Errc::TooFewNodes, "first-neighbor graph needs at least 2 nodes");
  if (options.temporal_weighting) {
    if (timestamps.size() != n) {
      throw Error(Errc::ShapeMismatch, "timestamp count does not match node count");
    }
    if (n_total == 0) throw Error(Errc::ZeroLength, "temporal normalizer is zero");
  }

  const Matrix<double> xt = transpose(normalized);
  std::vector<double> acc(kRowBlock * kColBlock);
  std::vector<int> nn(n, -1);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());

  // Columns are visited in increasing order for every row, so the strict
  // comparison keeps the lowest index on ties.
  for (std::size_t j0 = 0; j0 < n; j0 += kColBlock) {
    const std::size_t cols = std::min(kColBlock, n - j0);
    for (std::size_t i0 = 0; i0 < n; i0 += kRowBlock) {
      const std::size_t rows = std::min(kRowBlock, n - i0);
      dot_block(normalized, xt, i0, rows, j0, cols, acc.data());
      for (std::size_t b = 0; b < rows; ++b) {
        const std::size_t i = i0 + b;
        const double* row = acc.data() + b * kColBlock;
        for (std::size_t jj = 0; jj < cols; ++jj) {
          const std::size_t j = j0 + jj;
          if (j == i) continue;
          double w = 1.0 - row[jj];
          if (options.temporal_weighting) {
            w = w * temporal_gap(timestamps[i], timestamps[j], n_total);
          }
          if (nn[i] < 0 || w < best[i]) {
            best[i] = w;
            nn[i] = static_cast<int>(j);
          }
        }
      }
    }
  }
  return nn;
}

double pair_distance(const Matrix<double>& normalized, std::span<const double> timestamps,
                     std::size_t n_total, std::size_t i, std::size_t j,
                     const GraphOptions& options) {
  if (i == j) return 1.0;
  double w = 1.0 - scalar_dot(normalized.row(i), normalized.row(j));
  if (options.temporal_weighting) w = w * temporal_gap(timestamps[i], timestamps[j], n_total);
  return w;
}

std::vector<double> frame_timestamps(std::size_t n) {
  std::vector<double> t(n);
  std::iota(t.begin(), t.end(), 1.0);
  return t;
}

}  // namespace twseg
