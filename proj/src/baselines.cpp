#include "twseg/baselines.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "twseg/random.hpp"

namespace twseg::baselines {
namespace {

double squared_distance(std::span<const float> x, std::span<const double> c) {
  double acc = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = static_cast<double>(x[k]) - c[k];
    acc += diff * diff;
  }
  return acc;
}

void set_center(Matrix<double>& centers, std::size_t c, std::span<const float> x) {
  auto dst = centers.row(c);
  for (std::size_t k = 0; k < x.size(); ++k) dst[k] = static_cast<double>(x[k]);
}

Matrix<double> seed_centers(const Matrix<float>& x, std::size_t k, Rng& rng) {
  const std::size_t n = x.rows();
  Matrix<double> centers(k, x.cols());
  std::vector<char> chosen(n, 0);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  std::size_t pick = uniform_index(rng, n);
  for (std::size_t c = 0; c < k; ++c) {
    if (c > 0) {
      double total = 0.0;
      for (double v : d2) total += v;
      if (total > 0.0) {
        double target = uniform01(rng) * total;
        pick = n;
        for (std::size_t i = 0; i < n; ++i) {
          if (d2[i] <= 0.0) continue;
          pick = i;
          target -= d2[i];
          if (target < 0.0) break;
        }
      } else {
        // Every point coincides with a center already.
        pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), 0) - chosen.begin());
      }
    }
    chosen[pick] = 1;
    set_center(centers, c, x.row(pick));
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x.row(i), centers.row(c)));
    }
  }
  return centers;
}

struct LloydRun {
  std::vector<int> assignment;
  double wcss = 0.0;
  std::vector<double> history;
};

LloydRun lloyd(const Matrix<float>& x, std::size_t k, std::size_t max_iters, Rng& rng) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  Matrix<double> centers = seed_centers(x, k, rng);
  LloydRun run{std::vector<int>(n, -1), 0.0, {}};
  std::vector<double> cost(n, 0.0);

  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double dist = squared_distance(x.row(i), centers.row(c));
        if (dist < best_d) {
          best_d = dist;
          best = static_cast<int>(c);
        }
      }
      if (run.assignment[i] != best) changed = true;
      run.assignment[i] = best;
      cost[i] = best_d;
      objective += best_d;
    }
    run.history.push_back(objective);
    if (!changed) break;

    // Empty clusters take the point currently farthest from its center.
    std::vector<std::size_t> counts(k, 0);
    for (int a : run.assignment) ++counts[static_cast<std::size_t>(a)];
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      std::size_t far = 0;
      for (std::size_t i = 1; i < n; ++i) {
        if (cost[i] > cost[far]) far = i;
      }
      --counts[static_cast<std::size_t>(run.assignment[far])];
      run.assignment[far] = static_cast<int>(c);
      counts[c] = 1;
      cost[far] = 0.0;
    }

    Matrix<double> sums(k, d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      auto dst = sums.row(static_cast<std::size_t>(run.assignment[i]));
      auto src = x.row(i);
      for (std::size_t j = 0; j < d; ++j) dst[j] += static_cast<double>(src[j]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double inv = 1.0 / static_cast<double>(counts[c]);
      auto dst = centers.row(c);
      auto src = sums.row(c);
      for (std::size_t j = 0; j < d; ++j) dst[j] = src[j] * inv;
    }
  }

  // Final objective against the means of the final assignment.
  Matrix<double> means(k, d, 0.0);
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(run.assignment[i]);
    ++counts[a];
    auto dst = means.row(a);
    auto src = x.row(i);
    for (std::size_t j = 0; j < d; ++j) dst[j] += static_cast<double>(src[j]);
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) continue;
    for (double& v : means.row(c)) v /= static_cast<double>(counts[c]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    run.wcss += squared_distance(x.row(i), means.row(static_cast<std::size_t>(run.assignment[i])));
  }
  return run;
}

}  // namespace

Partition equal_split(std::size_t n, std::size_t k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "K must be at least 1");
  if (k > n) {
    throw Error(Errc::KTooLarge,
                "K=" + std::to_string(k) + " exceeds " + std::to_string(n) + " frames");
  }
  const std::size_t base = n / k;
  const std::size_t extra = n % k;
  std::vector<int> labels;
  labels.reserve(n);
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    labels.insert(labels.end(), len, static_cast<int>(b));
  }
  return Partition(std::move(labels));
}

KmeansResult kmeans(const FeatureSequence& seq, const KmeansConfig& cfg) {
  if (cfg.k < 1 || cfg.max_iters < 1 || cfg.restarts < 1) {
    throw Error(Errc::InvalidArgument, "k, max_iters and restarts must be at least 1");
  }
  validate_sequence(seq);
  if (cfg.k > seq.num_frames()) {
    throw Error(Errc::KTooLarge, "K=" + std::to_string(cfg.k) + " exceeds " +
                                     std::to_string(seq.num_frames()) + " frames");
  }
  KmeansResult best;
  bool have = false;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    Rng rng = make_rng(cfg.seed, r);
    LloydRun run = lloyd(seq.frames, cfg.k, cfg.max_iters, rng);
    if (!have || run.wcss < best.wcss) {
      best.partition = relabel_dense(run.assignment);
      best.wcss = run.wcss;
      best.best_restart = r;
      best.objective_history = std::move(run.history);
      have = true;
    }
  }
  return best;
}

FinchResult finch(const FeatureSequence& seq, std::size_t k, const GraphOptions& options) {
  FinchResult r;
  r.hierarchy = build_hierarchy(seq, options);
  r.segmentation = segment_from_hierarchy(seq, r.hierarchy, k, options);
  return r;
}

}  // namespace twseg::baselines
