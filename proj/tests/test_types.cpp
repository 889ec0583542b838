#include <limits>

#include "doctest.h"
#include "helpers.hpp"
#include "twseg/types.hpp"

using namespace twseg;
using testutil::make_seq;

TEST_CASE("validate_sequence accepts finite input") {
  CHECK_NOTHROW(validate_sequence(make_seq(3, 2, {1, 2, 3, 4, 5, 6})));
}

TEST_CASE("validate_sequence rejects empty input") {
  FeatureSequence seq;
  seq.frames = Matrix<float>(0, 2);
  try {
    validate_sequence(seq);
    FAIL("expected EmptySequence");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EmptySequence);
  }
}

TEST_CASE("validate_sequence reports the first non-finite cell") {
  auto seq = make_seq(3, 2, {1, 2, std::numeric_limits<float>::quiet_NaN(), 4, 5, 6});
  try {
    validate_sequence(seq);
    FAIL("expected NonFinite");
  } catch (const NonFiniteError& e) {
    CHECK(e.code() == Errc::NonFinite);
    CHECK(e.row() == 1);
    CHECK(e.col() == 0);
  }
  auto inf = make_seq(1, 2, {0, std::numeric_limits<float>::infinity()});
  CHECK_THROWS_AS(validate_sequence(inf), NonFiniteError);
}

TEST_CASE("relabel_dense keeps first-occurrence order") {
  std::vector<int> a{5, 5, 9, 5, 2};
  auto p = relabel_dense(a);
  CHECK(std::vector<int>(p.labels().begin(), p.labels().end()) == std::vector<int>{0, 0, 1, 0, 2});
  CHECK(p.num_clusters() == 3);

  std::vector<int> b{0};
  CHECK(relabel_dense(b).num_clusters() == 1);

  std::vector<int> c{1, 0, 1};
  auto pc = relabel_dense(c);
  CHECK(std::vector<int>(pc.labels().begin(), pc.labels().end()) == std::vector<int>{0, 1, 0});
  CHECK(pc.num_clusters() == 2);

  std::vector<int> empty;
  CHECK_THROWS_AS(relabel_dense(empty), Error);
}

TEST_CASE("relabel_dense is idempotent") {
  auto rng = make_rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> raw(1 + uniform_index(rng, 40));
    for (auto& x : raw) x = static_cast<int>(uniform_index(rng, 1000)) - 500;
    auto once = relabel_dense(raw);
    auto twice = relabel_dense(once.labels());
    CHECK(once == twice);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      for (std::size_t j = 0; j < raw.size(); ++j) {
        CHECK((raw[i] == raw[j]) == (once[i] == once[j]));
      }
    }
  }
}

TEST_CASE("Partition requires dense ids") {
  CHECK_NOTHROW(Partition(std::vector<int>{1, 0, 2}));
  CHECK_THROWS_AS(Partition(std::vector<int>{0, 2}), Error);
  CHECK_THROWS_AS(Partition(std::vector<int>{-1, 0}), Error);
  auto p = testutil::part_of({0, 1, 1, 2, 1});
  CHECK(p.cluster_sizes() == std::vector<std::size_t>{1, 3, 1});
}

TEST_CASE("coarsening and run counting") {
  auto fine = testutil::part_of({0, 0, 1, 2, 2});
  auto coarse = testutil::part_of({0, 0, 0, 1, 1});
  CHECK(is_coarsening(fine, coarse));
  CHECK_FALSE(is_coarsening(coarse, fine));
  CHECK_FALSE(is_coarsening(fine, testutil::part_of({0, 1, 1, 1, 1})));
  std::vector<int> runs{0, 0, 1, 0, 0, 2};
  CHECK(count_runs(runs) == 4);
}

TEST_CASE("validate_hierarchy checks counts and nesting") {
  PartitionHierarchy ok{{testutil::part_of({0, 1, 2, 2}), testutil::part_of({0, 0, 1, 1})}};
  CHECK_NOTHROW(validate_hierarchy(ok));
  PartitionHierarchy flat{{testutil::part_of({0, 1, 1}), testutil::part_of({0, 0, 1})}};
  CHECK_THROWS_AS(validate_hierarchy(flat), Error);
  PartitionHierarchy crossing{{testutil::part_of({0, 1, 2, 2}), testutil::part_of({0, 1, 1, 0})}};
  CHECK_THROWS_AS(validate_hierarchy(crossing), Error);
}

TEST_CASE("GroundTruth interning and segments") {
  auto gt = testutil::gt_of({"SIL", "pour", "pour", "SIL"});
  CHECK(gt.labels == std::vector<int>{0, 1, 1, 0});
  CHECK(gt.background_id() == 0);
  CHECK(gt.num_distinct() == 2);
  CHECK(gt.tokens() == std::vector<std::string>{"SIL", "pour", "pour", "SIL"});
  auto segs = segments_from_labels(gt.labels);
  REQUIRE(segs.size() == 3);
  CHECK(segs[1] == Segment{1, 1, 2});
  CHECK(segs[2] == Segment{0, 3, 3});
  CHECK_FALSE(testutil::gt_of({"a", "b"}).background_id().has_value());
}
