#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "twseg/eval.hpp"
#include "twseg/types.hpp"

namespace twseg::synth {

struct SynthSpec {
  std::size_t k = 4;       // planted action segments
  std::size_t n = 400;     // frames
  std::size_t d = 16;      // feature dims
  double sep = 8.0;        // center separation in units of noise_sigma
  double noise_sigma = 1.0;
  double background_frac = 0.0;
  /// Visual class token per planted segment, e.g. {"A", "B", "A"}. Segments
  /// sharing a token share a feature center but keep distinct action labels.
  std::vector<std::string> repeat_pattern;
  std::uint64_t seed = 0;
  std::string background_label = "SIL";
};

struct SynthSample {
  FeatureSequence features;
  GroundTruth ground_truth;
  /// Visual class of every frame (background uses the last class id).
  std::vector<int> visual_class;
};

/// Contiguous planted segments (random lengths, at least 2 frames each) on
/// orthogonal centers `sep * noise_sigma` apart, isotropic Gaussian noise,
/// optional background runs on a separate far center between segments.
/// Throws InfeasibleSpec when the frames or dims cannot hold the spec.
SynthSample generate(const SynthSpec& spec);

/// Exhaustive permutation maximum of the total overlap. Throws TooLarge when
/// max(P, G) > 8.
Mapping brute_force_assignment(const eval::OverlapMatrix& overlap);

/// Repeated breadth-first labeling over an undirected edge list; ids follow
/// each component's smallest node.
Partition brute_force_components(std::size_t num_nodes,
                                 std::span<const std::pair<int, int>> edges);

}  // namespace twseg::synth
