#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twseg {

enum class Errc {
  EmptySequence,
  EmptyInput,
  NonFinite,
  ZeroLength,
  ShapeMismatch,
  TooFewNodes,
  TooFewFrames,
  KUnreachable,
  KTooLarge,
  LengthMismatch,
  BadMagic,
  TruncatedFile,
  ParseError,
  InfeasibleSpec,
  TooLarge,
  InvalidArgument,
  IoError,
};

const char* to_string(Errc code);

/// Base of every error raised by the library. `code()` identifies the
/// failure class; the message carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

class NonFiniteError : public Error {
 public:
  NonFiniteError(std::size_t row, std::size_t col);
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

class KUnreachableError : public Error {
 public:
  explicit KUnreachableError(std::size_t max_available);
  std::size_t max_available() const noexcept { return max_available_; }

 private:
  std::size_t max_available_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& detail);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Row-major dense matrix.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw Error(Errc::ShapeMismatch, "matrix data size does not match rows*cols");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Per-video frame features: N frames (rows) by d dims. Frame timestamps
/// are implicitly 1..N.
struct FeatureSequence {
  Matrix<float> frames;
  std::string video_id;

  std::size_t num_frames() const noexcept { return frames.rows(); }
  std::size_t dims() const noexcept { return frames.cols(); }
};

/// Throws EmptySequence for N == 0 or d == 0 and NonFiniteError on the first
/// NaN/Inf in row-major order.
void validate_sequence(const FeatureSequence& seq);

/// Cluster assignment of N frames with dense ids 0..num_clusters-1.
class Partition {
 public:
  Partition() = default;
  /// Throws InvalidArgument unless the ids are exactly {0..C-1}.
  explicit Partition(std::vector<int> labels);

  std::span<const int> labels() const noexcept { return labels_; }
  int operator[](std::size_t i) const { return labels_[i]; }
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t num_clusters() const noexcept { return num_clusters_; }

  /// Frame counts per cluster id.
  std::vector<std::size_t> cluster_sizes() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<int> labels_;
  std::size_t num_clusters_ = 0;
};

/// Maps arbitrary ids to 0..C-1 in first-occurrence order.
Partition relabel_dense(std::span<const int> raw);

/// True when every pair of frames that shares a label in `finer` also shares
/// one in `coarser`.
bool is_coarsening(const Partition& finer, const Partition& coarser);

/// Number of maximal runs of equal labels.
std::size_t count_runs(std::span<const int> labels);

/// Nested partitions, finest first, with strictly decreasing cluster counts.
struct PartitionHierarchy {
  std::vector<Partition> partitions;

  std::size_t size() const noexcept { return partitions.size(); }
  std::vector<std::size_t> cluster_counts() const;
};

/// Throws InvalidArgument if counts do not strictly decrease or a level is
/// not a coarsening of its predecessor.
void validate_hierarchy(const PartitionHierarchy& h);

/// Frame-aligned ground-truth labels interned to ids in first-occurrence
/// order; `names[id]` is the original token.
struct GroundTruth {
  std::vector<int> labels;
  std::vector<std::string> names;
  std::string background_label = "SIL";

  static GroundTruth from_tokens(std::span<const std::string> tokens,
                                 std::string background_label = "SIL");

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t num_labels() const noexcept { return names.size(); }
  std::optional<int> background_id() const;
  std::size_t num_distinct() const;
  std::vector<std::string> tokens() const;
};

struct Segment {
  int label = 0;
  std::size_t start = 0;  // inclusive
  std::size_t end = 0;    // inclusive

  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Maximal runs of equal labels, in temporal order.
std::vector<Segment> segments_from_labels(std::span<const int> labels);

/// One-to-one assignment of predicted cluster ids to ground-truth label ids.
/// `pred_to_gt[p] == -1` marks an unmatched predicted cluster.
struct Mapping {
  std::vector<int> pred_to_gt;
  std::int64_t total_overlap = 0;

  int operator[](std::size_t p) const {
    return p < pred_to_gt.size() ? pred_to_gt[p] : -1;
  }
};

struct EvalReport {
  double mof = 0.0;
  double iou = 0.0;
  double f1 = 0.0;
  double midpoint_precision = 0.0;
  double midpoint_recall = 0.0;
  double purity = 0.0;
  std::size_t num_frames = 0;
  Mapping mapping;
};

}  // namespace twseg
