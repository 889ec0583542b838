#include "twseg/synth.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "twseg/random.hpp"

namespace twseg::synth {
namespace {

constexpr unsigned kLengthShape = 4;

// Splits `total` into parts of at least `min_len` with gamma-distributed
// proportions; largest remainders absorb the rounding.
std::vector<std::size_t> random_lengths(std::size_t parts, std::size_t total, std::size_t min_len,
                                        Rng& rng) {
  std::vector<double> weights(parts);
  for (auto& w : weights) w = gamma_int(rng, kLengthShape);
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  const std::size_t free = total - parts * min_len;

  std::vector<std::size_t> lengths(parts, min_len);
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    const double exact = static_cast<double>(free) * weights[i] / sum;
    const auto whole = static_cast<std::size_t>(std::floor(exact));
    lengths[i] += whole;
    assigned += whole;
    remainders.emplace_back(exact - static_cast<double>(whole), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < free; ++r, ++assigned) ++lengths[remainders[r % parts].second];
  return lengths;
}

}  // namespace

SynthSample generate(const SynthSpec& spec) {
  if (spec.k < 1) throw Error(Errc::InfeasibleSpec, "k must be at least 1");
  if (spec.sep < 0.0 || spec.noise_sigma < 0.0) {
    throw Error(Errc::InfeasibleSpec, "sep and noise_sigma must be non-negative");
  }
  if (!(spec.background_frac >= 0.0 && spec.background_frac < 1.0)) {
    throw Error(Errc::InfeasibleSpec, "background_frac must lie in [0, 1)");
  }
  if (!spec.repeat_pattern.empty() && spec.repeat_pattern.size() != spec.k) {
    throw Error(Errc::InfeasibleSpec, "repeat_pattern length must equal k");
  }

  // Visual classes and action names per planted segment.
  std::vector<int> segment_class(spec.k);
  std::vector<std::string> segment_name(spec.k);
  std::size_t num_classes = 0;
  if (spec.repeat_pattern.empty()) {
    for (std::size_t s = 0; s < spec.k; ++s) {
      segment_class[s] = static_cast<int>(s);
      segment_name[s] = std::to_string(s + 1);
    }
    num_classes = spec.k;
  } else {
    std::map<std::string, int> class_of;
    std::map<std::string, int> occurrences;
    for (std::size_t s = 0; s < spec.k; ++s) {
      const auto& tok = spec.repeat_pattern[s];
      auto [it, inserted] = class_of.try_emplace(tok, static_cast<int>(class_of.size()));
      segment_class[s] = it->second;
      const int occ = ++occurrences[tok];
      segment_name[s] = occ == 1 ? tok : tok + "#" + std::to_string(occ);
    }
    num_classes = class_of.size();
  }

  const bool with_background = spec.background_frac > 0.0;
  const auto background_frames = static_cast<std::size_t>(
      std::llround(spec.background_frac * static_cast<double>(spec.n)));
  const std::size_t action_frames = spec.n - background_frames;
  if (action_frames < 2 * spec.k) {
    throw Error(Errc::InfeasibleSpec, "need at least 2 action frames per segment");
  }
  if (spec.d < num_classes + (with_background ? 1 : 0)) {
    throw Error(Errc::InfeasibleSpec, "d must be at least the number of visual classes");
  }

  Rng rng = make_rng(spec.seed);
  const auto lengths = random_lengths(spec.k, action_frames, 2, rng);
  std::vector<std::size_t> gaps(spec.k + 1, 0);
  if (background_frames > 0) gaps = random_lengths(spec.k + 1, background_frames, 0, rng);

  // Orthogonal centers: a * e_c has pairwise distance a * sqrt(2) = sep * sigma.
  const double a = spec.sep * spec.noise_sigma / std::sqrt(2.0);
  const int background_class = static_cast<int>(num_classes);

  SynthSample out;
  out.features.video_id = "synth_" + std::to_string(spec.seed);
  out.features.frames = Matrix<float>(spec.n, spec.d);
  std::vector<std::string> tokens;
  tokens.reserve(spec.n);
  out.visual_class.reserve(spec.n);

  auto emit = [&](int cls, const std::string& name, std::size_t count) {
    for (std::size_t f = 0; f < count; ++f) {
      const std::size_t row = tokens.size();
      auto x = out.features.frames.row(row);
      for (std::size_t j = 0; j < spec.d; ++j) {
        x[j] = static_cast<float>(spec.noise_sigma * standard_normal(rng));
      }
      const double center = cls == background_class ? 2.0 * a : a;
      x[static_cast<std::size_t>(cls)] += static_cast<float>(center);
      tokens.push_back(name);
      out.visual_class.push_back(cls);
    }
  };

  for (std::size_t s = 0; s < spec.k; ++s) {
    emit(background_class, spec.background_label, gaps[s]);
    emit(segment_class[s], segment_name[s], lengths[s]);
  }
  emit(background_class, spec.background_label, gaps[spec.k]);

  out.ground_truth = GroundTruth::from_tokens(tokens, spec.background_label);
  return out;
}

Mapping brute_force_assignment(const eval::OverlapMatrix& m) {
  const std::size_t n = std::max(m.num_pred, m.num_gt);
  if (n > 8) throw Error(Errc::TooLarge, "brute force assignment is limited to 8x8");
  if (m.num_pred == 0 || m.num_gt == 0) throw Error(Errc::EmptyInput, "empty overlap matrix");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  std::int64_t best = -1;
  do {
    std::int64_t total = 0;
    for (std::size_t p = 0; p < m.num_pred; ++p) {
      const auto g = static_cast<std::size_t>(perm[p]);
      if (g < m.num_gt) total += m(p, g);
    }
    if (total > best) {
      best = total;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  Mapping mapping;
  mapping.total_overlap = best;
  mapping.pred_to_gt.assign(m.num_pred, -1);
  for (std::size_t p = 0; p < m.num_pred; ++p) {
    if (static_cast<std::size_t>(best_perm[p]) < m.num_gt) mapping.pred_to_gt[p] = best_perm[p];
  }
  return mapping;
}

Partition brute_force_components(std::size_t num_nodes,
                                 std::span<const std::pair<int, int>> edges) {
  std::vector<std::vector<int>> adj(num_nodes);
  for (const auto& [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<int> label(num_nodes, -1);
  int next = 0;
  for (std::size_t s = 0; s < num_nodes; ++s) {
    if (label[s] >= 0) continue;
    std::deque<std::size_t> queue{s};
    label[s] = next;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (int v : adj[u]) {
        if (label[static_cast<std::size_t>(v)] < 0) {
          label[static_cast<std::size_t>(v)] = next;
          queue.push_back(static_cast<std::size_t>(v));
        }
      }
    }
    ++next;
  }
  return Partition(std::move(label));
}

}  // namespace twseg::synth
