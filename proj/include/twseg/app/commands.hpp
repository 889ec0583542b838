#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "twseg/refine.hpp"
#include "twseg/types.hpp"

namespace twseg::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitOutputError = 3;
inline constexpr int kExitInternalError = 4;

enum class Method { TwFinch, Finch, Kmeans, EqualSplit };

Method parse_method(const std::string& name);
const char* to_string(Method m);

struct MethodConfig {
  Method method = Method::TwFinch;
  std::uint64_t seed = 0;
  std::size_t kmeans_restarts = 10;
  std::size_t kmeans_max_iters = 100;
};

/// Runs one segmentation method. Only the hierarchy-based methods can set
/// `k_unreachable`.
SegmentResult run_method(const FeatureSequence& seq, std::size_t k, const MethodConfig& config);

/// Calls `fn(i)` for i in [0, count) on up to `workers` threads. Exceptions
/// are rethrown after all tasks finish, lowest index first.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

/// Worker count from TWSEG_WORKERS, or 1.
std::size_t default_workers();

/// Entry point of the `twseg` command-line tool. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twseg::app
