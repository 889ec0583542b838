#include "twseg/app/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "twseg/app/report.hpp"
#include "twseg/app/svg_plot.hpp"
#include "twseg/baselines.hpp"
#include "twseg/eval.hpp"
#include "twseg/io.hpp"
#include "twseg/synth.hpp"

namespace twseg::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Failures writing results map to exit code 3.
class OutputFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal contracts map to exit code 4.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

void write_output(const fs::path& path, const std::string& contents) {
  try {
    io::write_file(path, contents);
  } catch (const Error& e) {
    throw OutputFailure(e.what());
  }
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw OutputFailure("cannot create directory " + dir.string() + ": " + ec.message());
}

// Prefixes library errors with the video they came from.
[[noreturn]] void rethrow_for(const std::string& video_id) {
  try {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), "video '" + video_id + "': " + e.what());
  }
}

struct VideoJob {
  std::string video_id;
  std::string activity = "default";
  fs::path features;
  fs::path labels;
  std::optional<std::size_t> k_override;
};

enum class KPolicy { Fixed, ActivityAvg, PerVideoGt };

// ---------------------------------------------------------------- segment

struct SegmentArgs {
  std::string features;
  std::string labels;
  std::string manifest;
  std::size_t k = 0;
  bool k_activity_avg = false;
  bool k_per_video_gt = false;
  std::string method = "twfinch";
  std::string out_dir = "twseg_out";
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  double tau = 0.0;
  std::size_t kmeans_restarts = 10;
  std::size_t kmeans_iters = 100;
};

struct SegmentOutput {
  std::string video_id;
  std::string activity;
  std::size_t k = 0;
  std::size_t num_frames = 0;
  SegmentResult result;
  std::vector<std::size_t> kept;
};

int cmd_segment(const SegmentArgs& a, std::ostream& out, std::ostream& err) {
  MethodConfig method{parse_method(a.method), a.seed, a.kmeans_restarts, a.kmeans_iters};
  KPolicy policy = KPolicy::Fixed;
  if (a.k_activity_avg) policy = KPolicy::ActivityAvg;
  if (a.k_per_video_gt) policy = KPolicy::PerVideoGt;

  std::vector<VideoJob> jobs;
  std::optional<io::DatasetManifest> manifest;
  std::string background = "SIL";
  if (!a.manifest.empty()) {
    manifest = io::load_manifest(a.manifest);
    background = manifest->background_label;
    if (a.k == 0 && !a.k_per_video_gt) policy = KPolicy::ActivityAvg;
    for (const auto& e : manifest->entries) {
      jobs.push_back({e.video_id, e.activity, e.feature_path, e.label_path, e.k_override});
    }
  } else {
    if (a.k == 0 && policy == KPolicy::Fixed) {
      throw Error(Errc::InvalidArgument, "single-file mode needs --k or a K policy with --labels");
    }
    jobs.push_back({fs::path(a.features).stem().string(), "default", a.features, a.labels, {}});
  }
  if (a.k > 0) policy = KPolicy::Fixed;

  const bool needs_labels = policy != KPolicy::Fixed || a.tau > 0.0;
  if (needs_labels) {
    for (const auto& j : jobs) {
      if (j.labels.empty()) {
        throw Error(Errc::InvalidArgument, "video '" + j.video_id + "' needs ground-truth labels");
      }
    }
  }

  std::map<std::string, std::size_t> activity_k;
  if (policy == KPolicy::ActivityAvg) {
    if (manifest) {
      activity_k = io::compute_activity_k(*manifest);
    } else {
      activity_k["default"] = io::load_labels(jobs.front().labels, background).num_distinct();
    }
  }

  auto load_gt = [&](std::size_t i) {
    return manifest ? io::load_entry_labels(*manifest, manifest->entries[i])
                    : io::load_labels(jobs[i].labels, background);
  };

  std::vector<SegmentOutput> results(jobs.size());
  parallel_for(jobs.size(), a.workers, [&](std::size_t i) {
    const VideoJob& job = jobs[i];
    try {
      FeatureSequence seq = io::load_features(job.features);
      seq.video_id = job.video_id;
      std::optional<GroundTruth> gt;
      if (needs_labels) {
        gt = load_gt(i);
        if (gt->size() != seq.num_frames()) {
          throw Error(Errc::LengthMismatch, std::to_string(seq.num_frames()) + " frames but " +
                                                std::to_string(gt->size()) + " labels");
        }
      }
      SegmentOutput& r = results[i];
      if (a.tau > 0.0) {
        auto filtered = eval::filter_background(seq, *gt, a.tau, a.seed);
        seq = std::move(filtered.sequence);
        gt = std::move(filtered.ground_truth);
        r.kept = std::move(filtered.original_index);
      }
      std::size_t k = a.k;
      if (policy != KPolicy::Fixed) {
        if (job.k_override) {
          k = *job.k_override;
        } else if (policy == KPolicy::PerVideoGt) {
          k = gt->num_distinct();
        } else {
          k = activity_k.at(job.activity);
        }
      }
      r.video_id = job.video_id;
      r.activity = job.activity;
      r.k = k;
      r.num_frames = seq.num_frames();
      r.result = run_method(seq, k, method);
      if (r.result.partition.size() != seq.num_frames() ||
          (!r.result.k_unreachable && r.result.partition.num_clusters() != k)) {
        throw InvariantViolation("segmentation of '" + job.video_id +
                                 "' returned a partition of the wrong shape");
      }
    } catch (const Error&) {
      rethrow_for(job.video_id);
    }
  });

  ensure_dir(a.out_dir);
  ordered_json summary;
  summary["schema"] = "twseg.segment/1";
  summary["config"] = ordered_json{{"method", to_string(method.method)},
                                   {"k_policy", policy == KPolicy::Fixed        ? "fixed"
                                                : policy == KPolicy::ActivityAvg ? "activity_avg"
                                                                                 : "per_video_gt"},
                                   {"seed", a.seed},
                                   {"tau", a.tau}};
  summary["videos"] = ordered_json::array();
  for (const auto& r : results) {
    const fs::path part_path = fs::path(a.out_dir) / (r.video_id + ".txt");
    write_output(part_path, io::format_partition(r.result.partition));
    if (!r.kept.empty() || a.tau > 0.0) {
      std::string kept;
      for (auto idx : r.kept) kept += std::to_string(idx) + "\n";
      write_output(fs::path(a.out_dir) / (r.video_id + ".kept.txt"), kept);
    }
    if (r.result.k_unreachable) {
      err << "warning: video '" << r.video_id << "': K=" << r.k << " exceeds the finest level ("
          << r.result.partition.num_clusters() << " clusters); wrote that level instead\n";
    }
    summary["videos"].push_back(ordered_json{{"video_id", r.video_id},
                                             {"activity", r.activity},
                                             {"k", r.k},
                                             {"num_frames", r.num_frames},
                                             {"num_clusters", r.result.partition.num_clusters()},
                                             {"k_unreachable", r.result.k_unreachable},
                                             {"level_counts", r.result.level_counts},
                                             {"partition", part_path.filename().string()}});
    out << r.video_id << ": " << r.result.partition.num_clusters() << " clusters over "
        << r.num_frames << " frames -> " << part_path.string() << "\n";
  }
  write_output(fs::path(a.out_dir) / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string manifest;
  std::string pred_dir;
  std::string labels;
  std::string pred;
  std::string background = "SIL";
  double tau = 0.0;
  std::uint64_t seed = 0;
  bool match_per_activity = false;
  std::string aggregate = "video";
  std::string f1 = "micro";
  std::string json_path;
  std::size_t workers = 1;
};

struct LoadedPair {
  std::string video_id;
  std::string activity;
  Partition pred;
  GroundTruth gt;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  EvalRunConfig cfg;
  cfg.tau = a.tau;
  cfg.seed = a.seed;
  cfg.match_per_activity = a.match_per_activity;
  cfg.aggregate = a.aggregate == "frame" ? eval::AggregateMode::Frame : eval::AggregateMode::Video;
  cfg.f1_mode = a.f1 == "macro" ? eval::F1Mode::Macro : eval::F1Mode::Micro;
  cfg.background_label = a.background;

  std::vector<VideoJob> jobs;
  std::vector<fs::path> pred_paths;
  std::optional<io::DatasetManifest> manifest;
  if (!a.manifest.empty()) {
    manifest = io::load_manifest(a.manifest);
    cfg.background_label = manifest->background_label;
    for (const auto& e : manifest->entries) {
      jobs.push_back({e.video_id, e.activity, e.feature_path, e.label_path, e.k_override});
      pred_paths.push_back(fs::path(a.pred_dir) / (e.video_id + ".txt"));
    }
  } else {
    jobs.push_back({fs::path(a.pred).stem().string(), "default", {}, a.labels, {}});
    pred_paths.push_back(a.pred);
  }

  std::vector<LoadedPair> pairs(jobs.size());
  parallel_for(jobs.size(), a.workers, [&](std::size_t i) {
    const VideoJob& job = jobs[i];
    try {
      GroundTruth gt = manifest ? io::load_entry_labels(*manifest, manifest->entries[i])
                                : io::load_labels(job.labels, cfg.background_label);
      Partition pred = io::load_partition(pred_paths[i]);
      if (cfg.tau > 0.0) {
        const auto keep = eval::background_keep_indices(gt, cfg.tau, cfg.seed);
        GroundTruth kept_gt;
        kept_gt.names = gt.names;
        kept_gt.background_label = gt.background_label;
        for (auto idx : keep) kept_gt.labels.push_back(gt.labels[idx]);
        if (pred.size() == gt.size()) {
          std::vector<int> sub;
          sub.reserve(keep.size());
          for (auto idx : keep) sub.push_back(pred[idx]);
          pred = relabel_dense(sub);
        } else if (pred.size() != keep.size()) {
          throw Error(Errc::LengthMismatch,
                      "prediction has " + std::to_string(pred.size()) + " frames, expected " +
                          std::to_string(gt.size()) + " or " + std::to_string(keep.size()) +
                          " after background filtering");
        }
        gt = std::move(kept_gt);
      }
      if (pred.size() != gt.size()) {
        throw Error(Errc::LengthMismatch, "prediction has " + std::to_string(pred.size()) +
                                              " frames, ground truth " + std::to_string(gt.size()));
      }
      pairs[i] = {job.video_id, job.activity, std::move(pred), std::move(gt)};
    } catch (const Error&) {
      rethrow_for(job.video_id);
    }
  });

  std::vector<VideoEval> videos(pairs.size());
  if (!cfg.match_per_activity) {
    parallel_for(pairs.size(), a.workers, [&](std::size_t i) {
      const auto& p = pairs[i];
      videos[i] = {p.video_id, p.activity, eval::evaluate(p.pred, p.gt, cfg.f1_mode), p.gt.names};
    });
  } else {
    // One Hungarian mapping per activity over pooled overlaps, in a shared label space.
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < pairs.size(); ++i) groups[pairs[i].activity].push_back(i);
    for (const auto& [activity, members] : groups) {
      std::vector<std::string> names;
      std::map<std::string, int> ids;
      std::vector<GroundTruth> shared(members.size());
      for (std::size_t m = 0; m < members.size(); ++m) {
        auto tokens = pairs[members[m]].gt.tokens();
        for (const auto& t : tokens) {
          if (ids.try_emplace(t, static_cast<int>(names.size())).second) names.push_back(t);
        }
        GroundTruth& g = shared[m];
        g.names = names;  // completed below
        g.background_label = cfg.background_label;
        for (const auto& t : tokens) g.labels.push_back(ids.at(t));
      }
      eval::OverlapMatrix pooled(0, names.size());
      for (std::size_t m = 0; m < members.size(); ++m) {
        shared[m].names = names;
        pooled.accumulate(eval::overlap(pairs[members[m]].pred, shared[m]));
      }
      const Mapping mapping = eval::hungarian_match(pooled);
      for (std::size_t m = 0; m < members.size(); ++m) {
        const auto& p = pairs[members[m]];
        videos[members[m]] = {p.video_id, p.activity,
                              eval::evaluate(p.pred, shared[m], mapping, cfg.f1_mode), names};
      }
    }
  }

  std::vector<EvalReport> reports;
  reports.reserve(videos.size());
  for (const auto& v : videos) reports.push_back(v.report);
  const EvalReport agg = eval::aggregate(reports, cfg.aggregate);
  out << eval_report_text(videos, agg, cfg);
  if (!a.json_path.empty()) write_output(a.json_path, eval_report_json(videos, agg, cfg));
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::vector<std::size_t> sizes{500, 1000, 2000, 4000, 8000};
  std::size_t dim = 64;
  std::size_t k = 8;
  std::size_t reps = 3;
  std::uint64_t seed = 0;
  std::string method = "twfinch";
  std::string json_path;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const MethodConfig method{parse_method(a.method), a.seed, 10, 100};
  ordered_json doc;
  doc["schema"] = "twseg.bench/1";
  doc["config"] = ordered_json{{"method", to_string(method.method)},
                               {"dim", a.dim},
                               {"k", a.k},
                               {"reps", a.reps}};
  doc["runs"] = ordered_json::array();
  std::vector<double> log_n;
  std::vector<double> log_t;
  bool deterministic = true;
  for (std::size_t n : a.sizes) {
    synth::SynthSpec spec;
    spec.k = a.k;
    spec.n = n;
    spec.d = a.dim;
    spec.seed = a.seed;
    const auto sample = synth::generate(spec);
    std::vector<double> times;
    std::optional<Partition> first;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, a.reps); ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      auto result = run_method(sample.features, a.k, method);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      if (!first) {
        first = result.partition;
      } else if (!(*first == result.partition)) {
        deterministic = false;
      }
    }
    std::sort(times.begin(), times.end());
    const double median = times[times.size() / 2];
    log_n.push_back(std::log(static_cast<double>(n)));
    log_t.push_back(std::log(median));
    char line[128];
    std::snprintf(line, sizeof(line), "N=%zu d=%zu median=%.4fs", n, a.dim, median);
    out << line << "\n";
    doc["runs"].push_back(ordered_json{{"n", n}, {"median_seconds", median}});
  }

  double slope = std::nan("");
  if (log_n.size() >= 2) {
    const double mx = std::accumulate(log_n.begin(), log_n.end(), 0.0) / static_cast<double>(log_n.size());
    const double my = std::accumulate(log_t.begin(), log_t.end(), 0.0) / static_cast<double>(log_t.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < log_n.size(); ++i) {
      sxy += (log_n[i] - mx) * (log_t[i] - my);
      sxx += (log_n[i] - mx) * (log_n[i] - mx);
    }
    slope = sxy / sxx;
  }
  char line[96];
  std::snprintf(line, sizeof(line), "log-log slope=%.3f deterministic=%s", slope,
                deterministic ? "yes" : "no");
  out << line << "\n";
  doc["slope"] = slope;
  doc["deterministic"] = deterministic;
  if (!a.json_path.empty()) write_output(a.json_path, doc.dump(2) + "\n");
  return deterministic ? kExitOk : kExitInternalError;
}

// ---------------------------------------------------------------- plot

struct PlotArgs {
  std::string labels;
  std::vector<std::string> preds;
  std::vector<std::string> names;
  std::string out_path = "segmentation.svg";
  std::string background = "SIL";
  std::string title;
};

int cmd_plot(const PlotArgs& a, std::ostream& out) {
  const GroundTruth gt = io::load_labels(a.labels, a.background);
  std::vector<PlotRow> rows;
  for (std::size_t i = 0; i < a.preds.size(); ++i) {
    const std::string name =
        i < a.names.size() ? a.names[i] : fs::path(a.preds[i]).stem().string();
    rows.push_back({name, io::load_partition(a.preds[i])});
  }
  PlotOptions opt;
  opt.title = a.title;
  const std::string svg = render_segmentation_svg(gt, rows, opt);
  write_output(a.out_path, svg);
  out << "wrote " << a.out_path << " (" << rows.size() + 1 << " bars)\n";
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string out_dir = "twseg_synth";
  std::size_t count = 1;
  synth::SynthSpec spec;
  std::string pattern;
  std::string format = "bin";
  std::string activity = "synthetic";
};

int cmd_synth(SynthArgs a, std::ostream& out) {
  if (!a.pattern.empty()) {
    std::stringstream ss(a.pattern);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) a.spec.repeat_pattern.push_back(tok);
    }
    a.spec.k = a.spec.repeat_pattern.size();
  }
  ensure_dir(a.out_dir);
  io::DatasetManifest manifest;
  manifest.background_label = a.spec.background_label;
  for (std::size_t i = 0; i < a.count; ++i) {
    synth::SynthSpec spec = a.spec;
    spec.seed = a.spec.seed + i;
    const auto sample = synth::generate(spec);
    const std::string id = sample.features.video_id;
    const std::string feat_name = id + (a.format == "csv" ? ".csv" : ".bin");
    const std::string label_name = id + ".labels.txt";
    try {
      if (a.format == "csv") {
        io::save_features_csv(sample.features, fs::path(a.out_dir) / feat_name);
      } else {
        io::save_features_binary(sample.features, fs::path(a.out_dir) / feat_name);
      }
      io::save_labels(sample.ground_truth, fs::path(a.out_dir) / label_name);
    } catch (const Error& e) {
      throw OutputFailure(e.what());
    }
    manifest.entries.push_back({id, a.activity, feat_name, label_name, {}});
    out << id << ": " << spec.n << " frames, " << sample.ground_truth.num_distinct()
        << " labels\n";
  }
  try {
    io::save_manifest(manifest, fs::path(a.out_dir) / "manifest.json");
  } catch (const Error& e) {
    throw OutputFailure(e.what());
  }
  return kExitOk;
}

// ---------------------------------------------------------------- convert

int cmd_convert(const std::string& in_path, const std::string& out_path, std::ostream& out) {
  const FeatureSequence seq = io::load_features(in_path);
  const auto ext = fs::path(out_path).extension().string();
  try {
    if (ext == ".csv" || ext == ".txt") {
      io::save_features_csv(seq, out_path);
    } else {
      io::save_features_binary(seq, out_path);
    }
  } catch (const Error& e) {
    throw OutputFailure(e.what());
  }
  out << "converted " << seq.num_frames() << "x" << seq.dims() << " -> " << out_path << "\n";
  return kExitOk;
}

}  // namespace

Method parse_method(const std::string& name) {
  if (name == "twfinch") return Method::TwFinch;
  if (name == "finch") return Method::Finch;
  if (name == "kmeans") return Method::Kmeans;
  if (name == "equalsplit") return Method::EqualSplit;
  throw Error(Errc::InvalidArgument, "unknown method '" + name + "'");
}

const char* to_string(Method m) {
  switch (m) {
    case Method::TwFinch: return "twfinch";
    case Method::Finch: return "finch";
    case Method::Kmeans: return "kmeans";
    case Method::EqualSplit: return "equalsplit";
  }
  return "unknown";
}

SegmentResult run_method(const FeatureSequence& seq, std::size_t k, const MethodConfig& config) {
  switch (config.method) {
    case Method::TwFinch:
      return segment(seq, k);
    case Method::Finch:
      return baselines::finch(seq, k).segmentation;
    case Method::Kmeans: {
      SegmentResult r;
      r.partition = baselines::kmeans(
                        seq, {k, config.kmeans_max_iters, config.seed, config.kmeans_restarts})
                        .partition;
      return r;
    }
    case Method::EqualSplit: {
      validate_sequence(seq);
      SegmentResult r;
      r.partition = baselines::equal_split(seq.num_frames(), k);
      return r;
    }
  }
  throw Error(Errc::InvalidArgument, "unknown method");
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  const std::size_t threads = std::min(std::max<std::size_t>(workers, 1), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t default_workers() {
  if (const char* env = std::getenv("TWSEG_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return 1;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Temporally weighted first-neighbor action segmentation", "twseg"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "twseg 0.1.0");

  const std::size_t env_workers = default_workers();

  SegmentArgs seg;
  seg.workers = env_workers;
  auto* s = app.add_subcommand("segment", "Segment videos into K actions");
  auto* s_features = s->add_option("--features", seg.features, "Feature file (.bin or .csv)");
  auto* s_manifest = s->add_option("--manifest", seg.manifest, "Dataset manifest (JSON)");
  s_features->excludes(s_manifest);
  s->add_option("--labels", seg.labels, "Ground-truth labels for single-file mode");
  auto* s_k = s->add_option("--k", seg.k, "Fixed number of actions")->check(CLI::PositiveNumber);
  auto* s_avg = s->add_flag("--k-activity-avg", seg.k_activity_avg,
                            "K = rounded mean distinct-label count of the activity");
  auto* s_gt = s->add_flag("--k-per-video-gt", seg.k_per_video_gt,
                           "K = distinct-label count of each video");
  s_k->excludes(s_avg)->excludes(s_gt);
  s_avg->excludes(s_gt);
  s->add_option("--method", seg.method, "twfinch | finch | kmeans | equalsplit")
      ->check(CLI::IsMember({"twfinch", "finch", "kmeans", "equalsplit"}));
  s->add_option("--out", seg.out_dir, "Output directory");
  s->add_option("--workers", seg.workers, "Parallel videos (default: $TWSEG_WORKERS or 1)")
      ->check(CLI::PositiveNumber);
  s->add_option("--seed", seg.seed, "Seed for kmeans and background filtering");
  s->add_option("--tau", seg.tau, "Fraction of background frames removed before segmenting")
      ->check(CLI::Range(0.0, 1.0));
  s->add_option("--kmeans-restarts", seg.kmeans_restarts)->check(CLI::PositiveNumber);
  s->add_option("--kmeans-iters", seg.kmeans_iters)->check(CLI::PositiveNumber);

  EvalArgs ev;
  ev.workers = env_workers;
  auto* e = app.add_subcommand("eval", "Evaluate predicted partitions against ground truth");
  auto* e_manifest = e->add_option("--manifest", ev.manifest, "Dataset manifest (JSON)");
  auto* e_pred_dir = e->add_option("--pred-dir", ev.pred_dir, "Directory of <video_id>.txt");
  auto* e_labels = e->add_option("--labels", ev.labels, "Ground-truth labels (single video)");
  auto* e_pred = e->add_option("--pred", ev.pred, "Predicted partition (single video)");
  e_manifest->needs(e_pred_dir)->excludes(e_labels)->excludes(e_pred);
  e_labels->needs(e_pred);
  e->add_option("--background", ev.background, "Background label (single-video mode)");
  e->add_option("--tau", ev.tau, "Fraction of background frames removed")
      ->check(CLI::Range(0.0, 1.0));
  e->add_option("--seed", ev.seed, "Seed for background filtering");
  e->add_flag("--match-per-activity", ev.match_per_activity,
              "One Hungarian mapping over all videos of an activity");
  e->add_option("--aggregate", ev.aggregate, "video | frame")
      ->check(CLI::IsMember({"video", "frame"}));
  e->add_option("--f1", ev.f1, "micro | macro")->check(CLI::IsMember({"micro", "macro"}));
  e->add_option("--json", ev.json_path, "Write the JSON report here");
  e->add_option("--workers", ev.workers)->check(CLI::PositiveNumber);

  BenchArgs bn;
  auto* b = app.add_subcommand("bench", "Time segmentation over a sweep of sequence lengths");
  b->add_option("--sizes", bn.sizes, "Sequence lengths")->delimiter(',');
  b->add_option("--dim", bn.dim)->check(CLI::PositiveNumber);
  b->add_option("--k", bn.k)->check(CLI::PositiveNumber);
  b->add_option("--reps", bn.reps)->check(CLI::PositiveNumber);
  b->add_option("--seed", bn.seed);
  b->add_option("--method", bn.method)
      ->check(CLI::IsMember({"twfinch", "finch", "kmeans", "equalsplit"}));
  b->add_option("--json", bn.json_path, "Write timings as JSON");

  PlotArgs pl;
  auto* p = app.add_subcommand("plot", "Render segmentation color bars as SVG");
  p->add_option("--labels", pl.labels, "Ground-truth labels")->required();
  p->add_option("--pred", pl.preds, "Predicted partition (repeatable)")->required();
  p->add_option("--name", pl.names, "Display name per --pred");
  p->add_option("--out", pl.out_path, "SVG output path");
  p->add_option("--background", pl.background, "Background label (drawn white)");
  p->add_option("--title", pl.title);

  SynthArgs sy;
  auto* y = app.add_subcommand("synth", "Generate synthetic feature and label files");
  y->add_option("--out-dir", sy.out_dir);
  y->add_option("--count", sy.count)->check(CLI::PositiveNumber);
  y->add_option("--k", sy.spec.k)->check(CLI::PositiveNumber);
  y->add_option("--n", sy.spec.n)->check(CLI::PositiveNumber);
  y->add_option("--d", sy.spec.d)->check(CLI::PositiveNumber);
  y->add_option("--sep", sy.spec.sep);
  y->add_option("--sigma", sy.spec.noise_sigma);
  y->add_option("--background-frac", sy.spec.background_frac)->check(CLI::Range(0.0, 1.0));
  y->add_option("--pattern", sy.pattern, "Comma-separated visual classes, e.g. A,B,A");
  y->add_option("--seed", sy.spec.seed);
  y->add_option("--format", sy.format)->check(CLI::IsMember({"bin", "csv"}));
  y->add_option("--activity", sy.activity);

  std::string conv_in;
  std::string conv_out;
  auto* c = app.add_subcommand("convert", "Convert between CSV and binary feature files");
  c->add_option("--in", conv_in)->required();
  c->add_option("--out", conv_out)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int rc = app.exit(ex, out, err);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*s) {
      if (seg.features.empty() && seg.manifest.empty()) {
        throw Error(Errc::InvalidArgument, "segment needs --features or --manifest");
      }
      return cmd_segment(seg, out, err);
    }
    if (*e) {
      if (ev.manifest.empty() && (ev.labels.empty() || ev.pred.empty())) {
        throw Error(Errc::InvalidArgument, "eval needs --manifest/--pred-dir or --labels/--pred");
      }
      return cmd_eval(ev, out);
    }
    if (*b) return cmd_bench(bn, out);
    if (*p) return cmd_plot(pl, out);
    if (*y) return cmd_synth(sy, out);
    if (*c) return cmd_convert(conv_in, conv_out, out);
  } catch (const OutputFailure& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitOutputError;
  } catch (const InvariantViolation& ex) {
    err << "internal error: " << ex.what() << "\n";
    return kExitInternalError;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return kExitInternalError;
  }
  return kExitInputError;
}

}  // namespace twseg::app
