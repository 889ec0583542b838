#pragma once

#include <string>
#include <vector>

#include "twseg/eval.hpp"
#include "twseg/types.hpp"

namespace twseg::app {

struct VideoEval {
  std::string video_id;
  std::string activity;
  EvalReport report;
  /// Names of the ground-truth label ids used by `report.mapping`.
  std::vector<std::string> label_names;
};

struct EvalRunConfig {
  double tau = 0.0;
  std::uint64_t seed = 0;
  bool match_per_activity = false;
  eval::AggregateMode aggregate = eval::AggregateMode::Video;
  eval::F1Mode f1_mode = eval::F1Mode::Micro;
  std::string background_label = "SIL";
};

/// JSON document: {"schema", "config", "videos": [...], "aggregate": {...}}.
/// Key order and number formatting are fixed so equal inputs give equal bytes.
std::string eval_report_json(const std::vector<VideoEval>& videos, const EvalReport& aggregate,
                             const EvalRunConfig& config);

/// One line per video plus an aggregate line.
std::string eval_report_text(const std::vector<VideoEval>& videos, const EvalReport& aggregate,
                             const EvalRunConfig& config);

const char* to_string(eval::AggregateMode mode);
const char* to_string(eval::F1Mode mode);

}  // namespace twseg::app
