#include "twseg/types.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

namespace twseg {

const char* to_string(Errc code) {
  switch (code) {
    case Errc::EmptySequence: return "EmptySequence";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NonFinite: return "NonFinite";
    case Errc::ZeroLength: return "ZeroLength";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::TooFewNodes: return "TooFewNodes";
    case Errc::TooFewFrames: return "TooFewFrames";
    case Errc::KUnreachable: return "KUnreachable";
    case Errc::KTooLarge: return "KTooLarge";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::BadMagic: return "BadMagic";
    case Errc::TruncatedFile: return "TruncatedFile";
    case Errc::ParseError: return "ParseError";
    case Errc::InfeasibleSpec: return "InfeasibleSpec";
    case Errc::TooLarge: return "TooLarge";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

NonFiniteError::NonFiniteError(std::size_t row, std::size_t col)
    : Error(Errc::NonFinite,
            "non-finite value at (" + std::to_string(row) + "," + std::to_string(col) + ")"),
      row_(row),
      col_(col) {}

KUnreachableError::KUnreachableError(std::size_t max_available)
    : Error(Errc::KUnreachable,
            "requested K exceeds the finest partition (" + std::to_string(max_available) +
                " clusters)"),
      max_available_(max_available) {}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& detail)
    : Error(Errc::ParseError, source + ":" + std::to_string(line) + ": " + detail), line_(line) {}

void validate_sequence(const FeatureSequence& seq) {
  const auto& m = seq.frames;
  if (m.rows() == 0 || m.cols() == 0) {
    throw Error(Errc::EmptySequence,
                "sequence '" + seq.video_id + "' has " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + " frames");
  }
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) throw NonFiniteError(r, c);
    }
  }
}

Partition::Partition(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    num_clusters_ = 0;
    return;
  }
  int max_id = -1;
  for (int l : labels_) {
    if (l < 0) throw Error(Errc::InvalidArgument, "negative cluster id");
    max_id = std::max(max_id, l);
  }
  if (static_cast<std::size_t>(max_id) >= labels_.size()) {
    throw Error(Errc::InvalidArgument, "cluster ids are not dense");
  }
  std::vector<char> seen(static_cast<std::size_t>(max_id) + 1, 0);
  for (int l : labels_) seen[static_cast<std::size_t>(l)] = 1;
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw Error(Errc::InvalidArgument, "cluster ids are not dense");
  }
  num_clusters_ = seen.size();
}

std::vector<std::size_t> Partition::cluster_sizes() const {
  std::vector<std::size_t> sizes(num_clusters_, 0);
  for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

Partition relabel_dense(std::span<const int> raw) {
  if (raw.empty()) throw Error(Errc::EmptyInput, "relabel_dense on empty input");
  std::unordered_map<int, int> remap;
  std::vector<int> out;
  out.reserve(raw.size());
  for (int id : raw) {
    auto [it, inserted] = remap.try_emplace(id, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return Partition(std::move(out));
}

bool is_coarsening(const Partition& finer, const Partition& coarser) {
  if (finer.size() != coarser.size()) return false;
  std::vector<int> image(finer.num_clusters(), -1);
  for (std::size_t i = 0; i < finer.size(); ++i) {
    int& target = image[static_cast<std::size_t>(finer[i])];
    if (target == -1) {
      target = coarser[i];
    } else if (target != coarser[i]) {
      return false;
    }
  }
  return true;
}

std::size_t count_runs(std::span<const int> labels) {
  if (labels.empty()) return 0;
  std::size_t runs = 1;
  for (std::size_t i = 1; i < labels.size(); ++i) {
    if (labels[i] != labels[i - 1]) ++runs;
  }
  return runs;
}

std::vector<std::size_t> PartitionHierarchy::cluster_counts() const {
  std::vector<std::size_t> counts;
  counts.reserve(partitions.size());
  for (const auto& p : partitions) counts.push_back(p.num_clusters());
  return counts;
}

void validate_hierarchy(const PartitionHierarchy& h) {
  for (std::size_t i = 1; i < h.partitions.size(); ++i) {
    const auto& prev = h.partitions[i - 1];
    const auto& next = h.partitions[i];
    if (next.num_clusters() >= prev.num_clusters()) {
      throw Error(Errc::InvalidArgument,
                  "hierarchy level " + std::to_string(i) + " does not reduce the cluster count");
    }
    if (!is_coarsening(prev, next)) {
      throw Error(Errc::InvalidArgument,
                  "hierarchy level " + std::to_string(i) + " is not a coarsening");
    }
  }
}

GroundTruth GroundTruth::from_tokens(std::span<const std::string> tokens,
                                     std::string background_label) {
  GroundTruth gt;
  gt.background_label = std::move(background_label);
  std::unordered_map<std::string, int> ids;
  gt.labels.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto [it, inserted] = ids.try_emplace(tok, static_cast<int>(gt.names.size()));
    if (inserted) gt.names.push_back(tok);
    gt.labels.push_back(it->second);
  }
  return gt;
}

std::optional<int> GroundTruth::background_id() const {
  auto it = std::find(names.begin(), names.end(), background_label);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

std::size_t GroundTruth::num_distinct() const {
  std::vector<char> seen(names.size(), 0);
  for (int l : labels) seen[static_cast<std::size_t>(l)] = 1;
  return static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
}

std::vector<std::string> GroundTruth::tokens() const {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (int l : labels) out.push_back(names[static_cast<std::size_t>(l)]);
  return out;
}

std::vector<Segment> segments_from_labels(std::span<const int> labels) {
  std::vector<Segment> segs;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= labels.size(); ++i) {
    if (i == labels.size() || labels[i] != labels[start]) {
      segs.push_back({labels[start], start, i - 1});
      start = i;
    }
  }
  return segs;
}

}  // namespace twseg
