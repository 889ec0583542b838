#pragma once

#include <cmath>
#include <filesystem>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include <unistd.h>

#include "twseg/random.hpp"
#include "twseg/types.hpp"

namespace testutil {

inline twseg::FeatureSequence make_seq(std::size_t rows, std::size_t cols,
                                       std::vector<float> values) {
  twseg::FeatureSequence seq;
  seq.frames = twseg::Matrix<float>(rows, cols, std::move(values));
  seq.video_id = "test";
  return seq;
}

inline twseg::FeatureSequence random_seq(std::size_t n, std::size_t d, std::uint64_t seed) {
  auto rng = twseg::make_rng(seed, 77);
  std::vector<float> v(n * d);
  for (auto& x : v) x = static_cast<float>(twseg::standard_normal(rng));
  return make_seq(n, d, std::move(v));
}

inline twseg::GroundTruth gt_of(std::initializer_list<const char*> tokens,
                                const std::string& background = "SIL") {
  std::vector<std::string> t(tokens.begin(), tokens.end());
  return twseg::GroundTruth::from_tokens(t, background);
}

inline twseg::Partition part_of(std::initializer_list<int> ids) {
  return twseg::Partition(std::vector<int>(ids));
}

// Same-block relation check: a and b induce the same set partition.
inline bool same_partition(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) return false;
  std::vector<int> fwd(a.size() + 1, -1);
  std::vector<int> bwd(a.size() + 1, -1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto x = static_cast<std::size_t>(a[i]);
    auto y = static_cast<std::size_t>(b[i]);
    if (x >= fwd.size() || y >= bwd.size()) return false;
    if (fwd[x] == -1) fwd[x] = b[i];
    if (bwd[y] == -1) bwd[y] = a[i];
    if (fwd[x] != b[i] || bwd[y] != a[i]) return false;
  }
  return true;
}

inline std::vector<int> random_permutation(std::size_t n, twseg::Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[twseg::uniform_index(rng, i)]);
  return p;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("twseg_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace testutil
