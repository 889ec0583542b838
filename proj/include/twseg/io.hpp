#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "twseg/types.hpp"

namespace twseg::io {

/// 8-byte magic of the binary feature format. Layout after the magic:
/// u32 LE rows, u32 LE cols, rows*cols f32 LE row-major.
inline constexpr char kFeatureMagic[8] = {'T', 'W', 'S', 'E', 'G', 'F', '0', '1'};

/// `.csv` / `.txt` files are read as CSV (one frame per line), anything
/// else as the binary format. Values are validated finite.
FeatureSequence load_features(const std::filesystem::path& path);
FeatureSequence parse_features_csv(const std::string& text, const std::string& source = "<csv>");

void save_features_binary(const FeatureSequence& seq, const std::filesystem::path& path);
void save_features_csv(const FeatureSequence& seq, const std::filesystem::path& path);

/// Reads `<id> <name>` lines (Breakfast-style mapping files).
std::map<std::string, std::string> load_label_map(const std::filesystem::path& path);

/// One whitespace-trimmed label token per line. Label tokens found as keys of
/// `label_map` are replaced by the mapped name.
GroundTruth load_labels(const std::filesystem::path& path, const std::string& background_label = "SIL",
                        const std::map<std::string, std::string>* label_map = nullptr);
GroundTruth parse_labels(const std::string& text, const std::string& background_label = "SIL",
                         const std::string& source = "<labels>");
void save_labels(const GroundTruth& gt, const std::filesystem::path& path);

struct ManifestEntry {
  std::string video_id;
  std::string activity;
  std::filesystem::path feature_path;
  std::filesystem::path label_path;
  std::optional<std::size_t> k_override;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::optional<std::filesystem::path> label_map_path;
  std::string background_label = "SIL";
  /// Leave the background label out of per-activity K.
  bool exclude_background_from_k = false;
};

/// JSON manifest; relative paths resolve against the manifest's directory.
/// Validation errors name the offending entry.
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(const std::string& json_text, const std::filesystem::path& base_dir);
void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);

GroundTruth load_entry_labels(const DatasetManifest& m, const ManifestEntry& e);

/// Round-half-up mean over an activity's videos of the distinct label count.
std::map<std::string, std::size_t> compute_activity_k(const DatasetManifest& m);
/// Same rule on precomputed per-video distinct counts.
std::size_t rounded_mean_k(const std::vector<std::size_t>& counts);

/// One integer per line.
void save_partition(const Partition& p, const std::filesystem::path& path);
Partition load_partition(const std::filesystem::path& path);
std::string format_partition(const Partition& p);
Partition parse_partition(const std::string& text, const std::string& source = "<partition>");

std::string read_file(const std::filesystem::path& path);
/// Throws Error(IoError) if the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace twseg::io
