#include <map>

#include "doctest.h"
#include "helpers.hpp"
#include "twseg/eval.hpp"
#include "twseg/synth.hpp"

using namespace twseg;
using namespace twseg::eval;
using testutil::gt_of;
using testutil::part_of;

namespace {

Mapping map_of(std::vector<int> pred_to_gt) { return Mapping{std::move(pred_to_gt), 0}; }

OverlapMatrix random_overlap(Rng& rng, std::size_t p, std::size_t g, std::int64_t max_count) {
  OverlapMatrix m(p, g);
  for (auto& c : m.counts) {
    c = static_cast<std::int64_t>(uniform_index(rng, static_cast<std::size_t>(max_count) + 1));
  }
  return m;
}

// pred/gt as random dense labelings with at least one frame per id
std::pair<Partition, GroundTruth> random_instance(Rng& rng, std::size_t n, std::size_t p,
                                                  std::size_t g) {
  std::vector<int> pr(n);
  std::vector<std::string> gt(n);
  for (std::size_t i = 0; i < n; ++i) {
    pr[i] = static_cast<int>(i < p ? i : uniform_index(rng, p));
    gt[i] = "g" + std::to_string(i < g ? i : uniform_index(rng, g));
  }
  return {relabel_dense(pr), GroundTruth::from_tokens(gt)};
}

}  // namespace

TEST_CASE("hungarian_match hand examples") {
  OverlapMatrix diag(2, 2);
  diag.counts = {5, 0, 0, 7};
  auto m = hungarian_match(diag);
  CHECK(m.pred_to_gt == std::vector<int>{0, 1});
  CHECK(m.total_overlap == 12);

  OverlapMatrix anti(2, 2);
  anti.counts = {0, 5, 7, 0};
  auto a = hungarian_match(anti);
  CHECK(a.pred_to_gt == std::vector<int>{1, 0});
  CHECK(a.total_overlap == 12);

  OverlapMatrix wide(1, 3);
  wide.counts = {2, 9, 4};
  CHECK(hungarian_match(wide).pred_to_gt == std::vector<int>{1});

  OverlapMatrix tall(3, 1);
  tall.counts = {2, 9, 4};
  auto t = hungarian_match(tall);
  CHECK(t.pred_to_gt == std::vector<int>{-1, 0, -1});
  CHECK(t.total_overlap == 9);
}

TEST_CASE("hungarian_match equals brute force on random 5x5 matrices") {
  auto rng = make_rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    auto m = random_overlap(rng, 5, 5, 50);
    auto h = hungarian_match(m);
    auto b = synth::brute_force_assignment(m);
    REQUIRE(h.total_overlap == b.total_overlap);
    std::int64_t recount = 0;
    std::vector<bool> used(5, false);
    for (std::size_t p = 0; p < 5; ++p) {
      const int g = h.pred_to_gt[p];
      REQUIRE(g >= 0);
      CHECK_FALSE(used[static_cast<std::size_t>(g)]);
      used[static_cast<std::size_t>(g)] = true;
      recount += m(p, static_cast<std::size_t>(g));
    }
    CHECK(recount == h.total_overlap);
  }
}

TEST_CASE("hungarian_match equals brute force on rectangular matrices") {
  auto rng = make_rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t p = 1 + uniform_index(rng, 6);
    const std::size_t g = 1 + uniform_index(rng, 6);
    auto m = random_overlap(rng, p, g, trial % 2 ? 3 : 1000);
    CHECK(hungarian_match(m).total_overlap == synth::brute_force_assignment(m).total_overlap);
  }
}

TEST_CASE("frame metric hand examples") {
  auto pred = part_of({0, 0, 1, 1});
  auto gt = gt_of({"a", "a", "a", "b"});
  auto mp = map_of({0, 1});
  CHECK(mof(pred, gt, mp) == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(std::abs(iou(pred, gt, mp) - (2.0 / 3.0 + 0.5) / 2.0) < 1e-9);
  CHECK(std::abs(iou(pred, gt, mp) - 0.5833) < 1e-4);
  auto f = f1(pred, gt, mp);
  CHECK(std::abs(f.precision - 0.75) < 1e-9);
  CHECK(std::abs(f.recall - 0.75) < 1e-9);
  CHECK(std::abs(f.f1 - 0.75) < 1e-9);

  auto perfect = evaluate(part_of({0, 0, 1, 2, 2}), gt_of({"x", "x", "y", "z", "z"}));
  CHECK(perfect.mof == 1.0);
  CHECK(perfect.iou == 1.0);
  CHECK(perfect.f1 == 1.0);
  CHECK(perfect.midpoint_precision == 1.0);
  CHECK(perfect.midpoint_recall == 1.0);
  CHECK(perfect.purity == 1.0);

  auto none = map_of({-1, -1});
  CHECK(mof(pred, gt, none) == 0.0);
  CHECK(iou(pred, gt, none) == 0.0);
  CHECK(f1(pred, gt, none).f1 == 0.0);

  // disjoint: every predicted cluster mapped to a label it never overlaps
  auto swapped = map_of({1, 0});
  CHECK(iou(part_of({0, 0, 1, 1}), gt_of({"a", "a", "b", "b"}), swapped) == 0.0);
  CHECK(f1(part_of({0, 0, 1, 1}), gt_of({"a", "a", "b", "b"}), swapped).f1 == 0.0);

  CHECK_THROWS_AS(mof(part_of({0, 1}), gt, mp), Error);
  CHECK_THROWS_AS(iou(part_of({0, 1}), gt, mp), Error);
  CHECK_THROWS_AS(f1(part_of({0, 1}), gt, mp), Error);
  CHECK_THROWS_AS(purity(part_of({0, 1}), gt), Error);
}

TEST_CASE("micro F1 leaves unmatched clusters out of precision") {
  // three predicted clusters, two labels: one b-cluster is left unmatched
  auto pred = part_of({0, 0, 1, 1, 2, 2});
  auto gt = gt_of({"a", "a", "b", "b", "b", "b"});
  auto m = match(pred, gt);
  auto f = f1(pred, gt, m);
  // 4 correct frames out of 4 matched predicted frames, 6 gt frames
  CHECK(std::abs(f.precision - 1.0) < 1e-12);
  CHECK(std::abs(f.recall - 4.0 / 6.0) < 1e-12);
  auto macro = f1(pred, gt, m, F1Mode::Macro);
  CHECK(macro.recall == doctest::Approx((1.0 + 0.5) / 2.0));
  CHECK(macro.precision == doctest::Approx(1.0));
}

TEST_CASE("iou averages over labels present in the video") {
  auto gt = gt_of({"a", "a", "b", "b", "c", "c"});
  auto pred = part_of({0, 0, 0, 0, 0, 0});
  auto m = hungarian_match(overlap(pred, gt));
  // one match with IoU 2/6, two unmatched labels contribute 0
  CHECK(std::abs(iou(pred, gt, m) - (2.0 / 6.0) / 3.0) < 1e-12);
}

TEST_CASE("midpoint_hit hand examples") {
  std::vector<Segment> gt_segs{{0, 5, 20}};
  std::vector<Segment> miss{{0, 0, 9}};
  auto mp = map_of({0});
  auto r1 = midpoint_hit(miss, gt_segs, mp);
  CHECK(r1.precision == 0.0);
  CHECK(r1.recall == 0.0);
  std::vector<Segment> hit{{0, 2, 11}};
  auto r2 = midpoint_hit(hit, gt_segs, mp);
  CHECK(r2.precision == 1.0);
  CHECK(r2.recall == 1.0);

  // midpoint inside background
  auto gt = gt_of({"SIL", "SIL", "SIL", "a", "a", "a"});
  auto pred = part_of({0, 0, 0, 0, 1, 1});
  auto m = map_of({1, 0});
  auto r3 = midpoint_hit(segments_from_labels(pred.labels()), segments_from_labels(gt.labels), m);
  CHECK(r3.precision == 0.0);

  // the same gt segment is claimed once
  std::vector<Segment> two{{0, 5, 8}, {0, 9, 20}};
  auto r4 = midpoint_hit(two, gt_segs, mp);
  CHECK(r4.precision == 0.5);
  CHECK(r4.recall == 1.0);
}

TEST_CASE("purity examples and recount oracle") {
  CHECK(purity(part_of({1, 1, 0}), gt_of({"a", "a", "b"})) == 1.0);
  CHECK(purity(part_of({0, 0, 0, 0}), gt_of({"a", "a", "b", "b"})) == 0.5);
  auto rng = make_rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    auto [pred, gt] = random_instance(rng, 20, 1 + uniform_index(rng, 6), 1 + uniform_index(rng, 6));
    std::map<int, std::map<int, int>> counts;
    for (std::size_t i = 0; i < 20; ++i) ++counts[pred[i]][gt.labels[i]];
    int majority = 0;
    for (const auto& [c, row] : counts) {
      int best = 0;
      for (const auto& [g, n] : row) best = std::max(best, n);
      majority += best;
    }
    CHECK(purity(pred, gt) == static_cast<double>(majority) / 20.0);
  }
}

TEST_CASE("metric identities on random instances") {
  auto rng = make_rng(5150);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 5 + uniform_index(rng, 60);
    auto [pred, gt] = random_instance(rng, n, 1 + uniform_index(rng, 5), 1 + uniform_index(rng, 5));
    auto base = evaluate(pred, gt);
    CHECK(base.purity >= base.mof - 1e-12);
    for (double v : {base.mof, base.iou, base.f1, base.midpoint_precision,
                     base.midpoint_recall, base.purity}) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
    // relabel predicted ids
    auto perm = testutil::random_permutation(pred.num_clusters(), rng);
    std::vector<int> relabeled(n);
    for (std::size_t i = 0; i < n; ++i) relabeled[i] = perm[static_cast<std::size_t>(pred[i])];
    auto r = evaluate(Partition(relabeled), gt);
    CHECK(std::abs(r.mof - base.mof) < 1e-9);
    CHECK(std::abs(r.iou - base.iou) < 1e-9);
    CHECK(std::abs(r.f1 - base.f1) < 1e-9);
    CHECK(std::abs(r.purity - base.purity) < 1e-9);
    // rename ground-truth tokens
    auto tokens = gt.tokens();
    for (auto& t : tokens) t = "renamed_" + t;
    auto rg = evaluate(pred, GroundTruth::from_tokens(tokens));
    CHECK(std::abs(rg.mof - base.mof) < 1e-9);
    CHECK(std::abs(rg.iou - base.iou) < 1e-9);
  }
}

TEST_CASE("overlap counts sum to the frame count") {
  auto pred = part_of({0, 1, 1, 2, 0});
  auto gt = gt_of({"a", "b", "b", "a", "c"});
  auto m = overlap(pred, gt);
  CHECK(m.total() == 5);
  CHECK(m(1, 1) == 2);
  OverlapMatrix pooled(0, 3);
  pooled.accumulate(m);
  GroundTruth shared = gt_of({"a", "b"});
  shared.names = gt.names;
  pooled.accumulate(overlap(part_of({0, 0}), shared));
  CHECK(pooled.num_pred == 3);
  CHECK(pooled.total() == 7);
}

TEST_CASE("filter_background removes the computed count deterministically") {
  std::vector<std::string> tokens;
  for (int i = 0; i < 100; ++i) tokens.push_back(i % 5 < 2 ? "SIL" : "act" + std::to_string(i / 25));
  auto gt = GroundTruth::from_tokens(tokens);
  auto seq = testutil::random_seq(100, 3, 4);

  auto keep0 = background_keep_indices(gt, 0.0, 1);
  CHECK(keep0.size() == 100);
  auto keep1 = background_keep_indices(gt, 1.0, 1);
  CHECK(keep1.size() == 60);
  auto keep75 = background_keep_indices(gt, 0.75, 9);
  CHECK(keep75.size() == 70);
  CHECK(keep75 == background_keep_indices(gt, 0.75, 9));
  CHECK(std::is_sorted(keep75.begin(), keep75.end()));

  auto f = filter_background(seq, gt, 0.75, 9);
  CHECK(f.original_index == keep75);
  REQUIRE(f.sequence.num_frames() == 70);
  CHECK(f.ground_truth.size() == 70);
  for (std::size_t i = 0; i < 70; ++i) {
    CHECK(f.ground_truth.tokens()[i] == tokens[keep75[i]]);
    CHECK(f.sequence.frames(i, 2) == seq.frames(keep75[i], 2));
  }
  for (std::size_t i = 0; i < 100; ++i) {
    if (tokens[i] != "SIL") CHECK(std::binary_search(keep75.begin(), keep75.end(), i));
  }
  CHECK_THROWS_AS(background_keep_indices(gt, 1.5, 0), Error);
}

TEST_CASE("aggregate modes") {
  EvalReport a;
  a.mof = 1.0;
  a.num_frames = 10;
  EvalReport b;
  b.mof = 0.0;
  b.num_frames = 30;
  std::vector<EvalReport> both{a, b};
  CHECK(aggregate(both, AggregateMode::Video).mof == doctest::Approx(0.5));
  CHECK(aggregate(both, AggregateMode::Frame).mof == doctest::Approx(0.25));
  std::vector<EvalReport> single{a};
  CHECK(aggregate(single, AggregateMode::Video).mof == 1.0);
  CHECK(aggregate(single, AggregateMode::Frame).mof == 1.0);
  b.mof = 1.0;
  std::vector<EvalReport> equal{a, b};
  CHECK(aggregate(equal, AggregateMode::Video).mof == aggregate(equal, AggregateMode::Frame).mof);
  std::vector<EvalReport> empty;
  CHECK_THROWS_AS(aggregate(empty, AggregateMode::Video), Error);
}
