#include "twseg/app/report.hpp"

#include <cstdio>

#include "json.hpp"

namespace twseg::app {
namespace {

using nlohmann::ordered_json;

ordered_json metrics_json(const EvalReport& r) {
  return ordered_json{{"num_frames", r.num_frames},
                      {"mof", r.mof},
                      {"iou", r.iou},
                      {"f1", r.f1},
                      {"midpoint_precision", r.midpoint_precision},
                      {"midpoint_recall", r.midpoint_recall},
                      {"purity", r.purity}};
}

std::string fmt_pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

}  // namespace

const char* to_string(eval::AggregateMode mode) {
  return mode == eval::AggregateMode::Video ? "video" : "frame";
}

const char* to_string(eval::F1Mode mode) {
  return mode == eval::F1Mode::Micro ? "micro" : "macro";
}

std::string eval_report_json(const std::vector<VideoEval>& videos, const EvalReport& aggregate,
                             const EvalRunConfig& config) {
  ordered_json doc;
  doc["schema"] = "twseg.eval/1";
  doc["config"] = ordered_json{{"tau", config.tau},
                               {"seed", config.seed},
                               {"match_scope", config.match_per_activity ? "activity" : "video"},
                               {"aggregate", to_string(config.aggregate)},
                               {"f1", to_string(config.f1_mode)},
                               {"background_label", config.background_label}};
  doc["videos"] = ordered_json::array();
  for (const auto& v : videos) {
    ordered_json j{{"video_id", v.video_id}, {"activity", v.activity}};
    j.update(metrics_json(v.report));
    ordered_json mapping = ordered_json::object();
    for (std::size_t p = 0; p < v.report.mapping.pred_to_gt.size(); ++p) {
      const int g = v.report.mapping.pred_to_gt[p];
      if (g < 0) {
        mapping[std::to_string(p)] = nullptr;
      } else {
        mapping[std::to_string(p)] = v.label_names[static_cast<std::size_t>(g)];
      }
    }
    j["mapping"] = std::move(mapping);
    doc["videos"].push_back(std::move(j));
  }
  ordered_json agg = metrics_json(aggregate);
  agg["num_videos"] = videos.size();
  agg["mode"] = to_string(config.aggregate);
  doc["aggregate"] = std::move(agg);
  return doc.dump(2) + "\n";
}

std::string eval_report_text(const std::vector<VideoEval>& videos, const EvalReport& aggregate,
                             const EvalRunConfig& config) {
  std::string out;
  for (const auto& v : videos) {
    out += "video " + v.video_id + " [" + v.activity + "] frames=" +
           std::to_string(v.report.num_frames) + " MoF=" + fmt_pct(v.report.mof) +
           " IoU=" + fmt_pct(v.report.iou) + " F1=" + fmt_pct(v.report.f1) +
           " MidP=" + fmt_pct(v.report.midpoint_precision) +
           " MidR=" + fmt_pct(v.report.midpoint_recall) + " Purity=" + fmt_pct(v.report.purity) +
           "\n";
  }
  out += std::string("aggregate (") + to_string(config.aggregate) + ", " +
         std::to_string(videos.size()) + " videos, match=" +
         (config.match_per_activity ? "activity" : "video") + ", f1=" +
         to_string(config.f1_mode) + ") MoF=" + fmt_pct(aggregate.mof) +
         " IoU=" + fmt_pct(aggregate.iou) + " F1=" + fmt_pct(aggregate.f1) +
         " MidP=" + fmt_pct(aggregate.midpoint_precision) +
         " MidR=" + fmt_pct(aggregate.midpoint_recall) + " Purity=" + fmt_pct(aggregate.purity) +
         "\n";
  return out;
}

}  // namespace twseg::app
