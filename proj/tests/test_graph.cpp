#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "twseg/graph.hpp"
#include "twseg/synth.hpp"

using namespace twseg;
using testutil::make_seq;

namespace {

// Plain textbook cosine distance, long double, no blocking.
long double naive_cosine(std::span<const float> a, std::span<const float> b) {
  long double ab = 0, aa = 0, bb = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    ab += static_cast<long double>(a[k]) * b[k];
    aa += static_cast<long double>(a[k]) * a[k];
    bb += static_cast<long double>(b[k]) * b[k];
  }
  if (aa == 0 || bb == 0) return 1.0L;
  return 1.0L - ab / (std::sqrt(aa) * std::sqrt(bb));
}

WeightedDistances materialize(const FeatureSequence& seq) {
  const std::size_t n = seq.num_frames();
  auto t = frame_timestamps(n);
  return weighted_distances(feature_distances(seq.frames), temporal_distances(t, n), n);
}

}  // namespace

TEST_CASE("feature_distances hand values") {
  auto same = feature_distances(make_seq(2, 2, {1, 0, 1, 0}).frames);
  CHECK(same(0, 1) == doctest::Approx(0.0));
  CHECK(same(0, 0) == 1.0);
  auto orth = feature_distances(make_seq(2, 2, {1, 0, 0, 1}).frames);
  CHECK(orth(0, 1) == doctest::Approx(1.0));
  auto diag = feature_distances(make_seq(2, 2, {1, 0, 1, 1}).frames);
  CHECK(diag(0, 1) == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(diag(0, 1) == doctest::Approx(0.29289).epsilon(1e-5));
}

TEST_CASE("feature_distances edge conventions") {
  // zero row: distance 1 to everything
  auto z = feature_distances(make_seq(3, 2, {0, 0, 1, 0, 0, 3}).frames);
  CHECK(z(0, 1) == 1.0);
  CHECK(z(2, 0) == 1.0);
  // signed features are not clamped
  auto neg = feature_distances(make_seq(2, 2, {1, 0, -1, 0}).frames);
  CHECK(neg(0, 1) == doctest::Approx(2.0));
  auto bad = make_seq(2, 1, {1, std::nanf("")});
  CHECK_THROWS_AS(feature_distances(bad.frames), NonFiniteError);
}

TEST_CASE("feature_distances against a naive oracle") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    auto seq = testutil::random_seq(37 + s, 3 + s % 9, s);
    auto g = feature_distances(seq.frames);
    for (std::size_t i = 0; i < seq.num_frames(); ++i) {
      CHECK(g(i, i) == 1.0);
      for (std::size_t j = 0; j < seq.num_frames(); ++j) {
        CHECK(g(i, j) == g(j, i));
        if (i != j) {
          CHECK(static_cast<long double>(g(i, j)) ==
                doctest::Approx(naive_cosine(seq.frames.row(i), seq.frames.row(j))).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("temporal_distances hand values") {
  std::vector<double> a{1, 3};
  CHECK(temporal_distances(a, 10)(0, 1) == doctest::Approx(0.2));
  std::vector<double> b{1, 1};
  CHECK(temporal_distances(b, 10)(0, 1) == 0.0);
  CHECK(temporal_distances(b, 10)(1, 1) == 1.0);
  std::vector<double> c{1, 10};
  CHECK(temporal_distances(c, 10)(1, 0) == doctest::Approx(0.9));
  CHECK_THROWS_AS(temporal_distances(c, 0), Error);
}

TEST_CASE("weighted_distances is the elementwise product") {
  Matrix<double> gf(2, 2, std::vector<double>{1, 0.5, 0.5, 1});
  Matrix<double> gt(2, 2, std::vector<double>{1, 0.2, 0.2, 1});
  auto w = weighted_distances(gf, gt, 10);
  CHECK(w.w(0, 1) == doctest::Approx(0.1));
  CHECK(w.w(0, 0) == 1.0);
  CHECK(w.n_total == 10);

  Matrix<double> gf0(2, 2, std::vector<double>{1, 0, 0, 1});
  CHECK(weighted_distances(gf0, gt, 10).w(0, 1) == 0.0);
  Matrix<double> gt0(2, 2, std::vector<double>{1, 0, 0, 1});
  CHECK(weighted_distances(gf, gt0, 10).w(1, 0) == 0.0);

  Matrix<double> small(1, 1, 1.0);
  CHECK_THROWS_AS(weighted_distances(gf, small, 10), Error);
}

TEST_CASE("weighted_distances symmetric with unit diagonal") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    auto seq = testutil::random_seq(50 + 13 * s, 8, 100 + s);
    auto w = materialize(seq);
    for (std::size_t i = 0; i < w.w.rows(); ++i) {
      CHECK(w.w(i, i) == 1.0);
      for (std::size_t j = 0; j < i; ++j) CHECK(w.w(i, j) == w.w(j, i));
    }
  }
}

TEST_CASE("one_nn_graph picks the row minimum") {
  Matrix<double> m(3, 3, std::vector<double>{1, 0.5, 0.2, 0.5, 1, 0.7, 0.2, 0.7, 1});
  auto g = one_nn_graph({m, 3});
  CHECK(g.nn == std::vector<int>{2, 0, 0});
  auto has = [&](int a, int b) {
    return std::find(g.edges.begin(), g.edges.end(), std::pair{a, b}) != g.edges.end();
  };
  CHECK(has(0, 2));
  CHECK(has(2, 0));

  Matrix<double> flat(4, 4, 0.3);
  for (std::size_t i = 0; i < 4; ++i) flat(i, i) = 1.0;
  CHECK(one_nn_graph({flat, 4}).nn == std::vector<int>{1, 0, 0, 0});

  CHECK_THROWS_AS(one_nn_graph({Matrix<double>(1, 1, 1.0), 1}), Error);
}

TEST_CASE("chained links form one component") {
  // A-B close, B-C close, A-C far
  Matrix<double> m(3, 3, std::vector<double>{1, 0.1, 0.9, 0.1, 1, 0.2, 0.9, 0.2, 1});
  auto p = connected_components(one_nn_graph({m, 3}));
  CHECK(p.num_clusters() == 1);
}

TEST_CASE("connected_components examples") {
  auto chain = connected_components(OneNnGraph::from_neighbors({1, 0, 1}));
  CHECK(chain == testutil::part_of({0, 0, 0}));
  auto pairs = connected_components(OneNnGraph::from_neighbors({1, 0, 3, 2}));
  CHECK(pairs == testutil::part_of({0, 0, 1, 1}));
  auto two = connected_components(OneNnGraph::from_neighbors({1, 0}));
  CHECK(two == testutil::part_of({0, 0}));
  CHECK_THROWS_AS(OneNnGraph::from_neighbors({0, 0}), Error);
  CHECK_THROWS_AS(OneNnGraph::from_neighbors({5, 0}), Error);
}

TEST_CASE("graph properties on random sequences") {
  for (std::uint64_t s = 0; s < 25; ++s) {
    const std::size_t n = 2 + (s * 37) % 300;
    auto seq = testutil::random_seq(n, 1 + s % 12, 500 + s);
    auto g = one_nn_graph(materialize(seq));
    REQUIRE(g.nn.size() == n);
    CHECK(g.edges.size() >= n);
    CHECK(g.edges.size() <= 2 * n);
    for (const auto& [a, b] : g.edges) {
      CHECK(std::find(g.edges.begin(), g.edges.end(), std::pair{b, a}) != g.edges.end());
    }
    auto p = connected_components(g);
    auto oracle = synth::brute_force_components(n, g.edges);
    CHECK(p == oracle);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(p[i] == p[static_cast<std::size_t>(g.nn[i])]);
    }
  }
}

TEST_CASE("fused nearest_neighbors equals the materialized graph") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const std::size_t n = 2 + (s * 71) % 700;
    const std::size_t d = 1 + (s * 5) % 40;
    auto seq = testutil::random_seq(n, d, 900 + s);
    auto t = frame_timestamps(n);
    auto normalized = normalize_rows(seq.frames);
    auto fused = nearest_neighbors(normalized, t, n);
    CHECK(fused == one_nn_graph(materialize(seq)).nn);

    GraphOptions plain{false, false};
    auto fused_plain = nearest_neighbors(normalized, t, n, plain);
    Matrix<double> ones(n, n, 1.0);
    auto gf = feature_distances(seq.frames);
    CHECK(fused_plain == one_nn_graph(weighted_distances(gf, ones, n)).nn);

    auto w = materialize(seq);
    for (std::size_t i = 0; i < n; i += 1 + n / 7) {
      for (std::size_t j = 0; j < n; j += 1 + n / 5) {
        CHECK(pair_distance(normalized, t, n, i, j) == w.w(i, j));
      }
    }
  }
}

TEST_CASE("fused nearest_neighbors on duplicated frames keeps lowest-index ties") {
  // every frame identical: W is 0 everywhere off the diagonal
  auto seq = make_seq(5, 2, {2, 0, 2, 0, 2, 0, 2, 0, 2, 0});
  auto normalized = normalize_rows(seq.frames);
  auto nn = nearest_neighbors(normalized, frame_timestamps(5), 5);
  CHECK(nn == std::vector<int>{1, 0, 0, 0, 0});
  CHECK(nn == one_nn_graph(materialize(seq)).nn);
}

TEST_CASE("shared-neighbor links do not change components") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto rng = make_rng(s, 5);
    const std::size_t n = 2 + uniform_index(rng, 200);
    std::vector<int> nn(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = uniform_index(rng, n - 1);
      nn[i] = static_cast<int>(j >= i ? j + 1 : j);
    }
    auto plain = components_from_neighbors(nn, false);
    auto shared = components_from_neighbors(nn, true);
    CHECK(plain == shared);
    CHECK(plain == connected_components(OneNnGraph::from_neighbors(nn)));
  }
}
