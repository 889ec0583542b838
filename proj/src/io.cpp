#include "twseg/io.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace twseg::io {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\v\f");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\v\f");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  // Trailing blank lines are not frames.
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

std::uint32_t read_u32_le(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

FeatureSequence parse_features_binary(const std::string& bytes, const std::string& source) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kFeatureMagic, 8) != 0) {
    throw Error(Errc::BadMagic, source + ": not a TWSEGF01 feature file");
  }
  if (bytes.size() < 16) throw Error(Errc::TruncatedFile, source + ": header is truncated");
  const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t rows = read_u32_le(raw + 8);
  const std::uint32_t cols = read_u32_le(raw + 12);
  const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
  if (bytes.size() - 16 < count * 4) {
    throw Error(Errc::TruncatedFile, source + ": expected " + std::to_string(count) +
                                         " floats, file holds " +
                                         std::to_string((bytes.size() - 16) / 4));
  }
  FeatureSequence seq;
  seq.video_id = fs::path(source).stem().string();
  seq.frames = Matrix<float>(rows, cols);
  auto data = seq.frames.data();
  for (std::uint64_t i = 0; i < count; ++i) {
    data[i] = std::bit_cast<float>(read_u32_le(raw + 16 + 4 * i));
  }
  return seq;
}

std::size_t parse_count(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw Error(Errc::InvalidArgument, what + " must be a positive integer");
  }
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

}  // namespace

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw Error(Errc::IoError, "failed writing " + path.string());
}

FeatureSequence parse_features_csv(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "no frames");
  std::vector<float> values;
  std::size_t cols = 0;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::string_view line = lines[li];
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      auto end = line.find(',', start);
      const bool last = end == std::string_view::npos;
      if (last) end = line.size();
      const auto tok = trim(line.substr(start, end - start));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw ParseError(source, li + 1, "bad value '" + std::string(tok) + "'");
      }
      values.push_back(static_cast<float>(v));
      ++count;
      if (last) break;
      start = end + 1;
    }
    if (li == 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError(source, li + 1,
                       "expected " + std::to_string(cols) + " values, got " + std::to_string(count));
    }
  }
  FeatureSequence seq;
  seq.video_id = fs::path(source).stem().string();
  seq.frames = Matrix<float>(lines.size(), cols, std::move(values));
  validate_sequence(seq);
  return seq;
}

FeatureSequence load_features(const fs::path& path) {
  const std::string bytes = read_file(path);
  const auto ext = path.extension().string();
  FeatureSequence seq = (ext == ".csv" || ext == ".txt")
                            ? parse_features_csv(bytes, path.string())
                            : parse_features_binary(bytes, path.string());
  seq.video_id = path.stem().string();
  validate_sequence(seq);
  return seq;
}

void save_features_binary(const FeatureSequence& seq, const fs::path& path) {
  std::string out(kFeatureMagic, 8);
  write_u32_le(out, static_cast<std::uint32_t>(seq.frames.rows()));
  write_u32_le(out, static_cast<std::uint32_t>(seq.frames.cols()));
  out.reserve(out.size() + 4 * seq.frames.data().size());
  for (float v : seq.frames.data()) write_u32_le(out, std::bit_cast<std::uint32_t>(v));
  write_file(path, out);
}

void save_features_csv(const FeatureSequence& seq, const fs::path& path) {
  std::string out;
  char buf[64];
  for (std::size_t r = 0; r < seq.frames.rows(); ++r) {
    auto row = seq.frames.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out.push_back(',');
      // Shortest representation that round-trips the float exactly.
      const auto res = std::to_chars(buf, buf + sizeof(buf), row[c]);
      out.append(buf, res.ptr);
    }
    out.push_back('\n');
  }
  write_file(path, out);
}

std::map<std::string, std::string> load_label_map(const fs::path& path) {
  const std::string text = read_file(path);
  std::map<std::string, std::string> map;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = trim(lines[i]);
    if (line.empty()) continue;
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) throw ParseError(path.string(), i + 1, "expected '<id> <name>'");
    map.emplace(std::string(line.substr(0, sep)), std::string(trim(line.substr(sep + 1))));
  }
  return map;
}

GroundTruth parse_labels(const std::string& text, const std::string& background_label,
                         const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "no labels");
  std::vector<std::string> tokens;
  tokens.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tok = trim(lines[i]);
    if (tok.empty()) throw ParseError(source, i + 1, "empty label");
    tokens.emplace_back(tok);
  }
  return GroundTruth::from_tokens(tokens, background_label);
}

GroundTruth load_labels(const fs::path& path, const std::string& background_label,
                        const std::map<std::string, std::string>* label_map) {
  GroundTruth gt = parse_labels(read_file(path), background_label, path.string());
  if (label_map != nullptr) {
    auto tokens = gt.tokens();
    for (auto& t : tokens) {
      if (auto it = label_map->find(t); it != label_map->end()) t = it->second;
    }
    gt = GroundTruth::from_tokens(tokens, background_label);
  }
  return gt;
}

void save_labels(const GroundTruth& gt, const fs::path& path) {
  std::string out;
  for (int l : gt.labels) {
    out += gt.names[static_cast<std::size_t>(l)];
    out.push_back('\n');
  }
  write_file(path, out);
}

DatasetManifest parse_manifest(const std::string& json_text, const fs::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
    throw Error(Errc::ParseError, "manifest needs an 'entries' array");
  }
  auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  DatasetManifest m;
  m.background_label = doc.value("background_label", std::string("SIL"));
  m.exclude_background_from_k = doc.value("exclude_background_from_k", false);
  if (doc.contains("label_map_path") && !doc["label_map_path"].is_null()) {
    m.label_map_path = resolve(doc["label_map_path"].get<std::string>());
  }

  std::set<std::string> seen;
  const auto& entries = doc["entries"];
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    std::string named = "manifest entry " + std::to_string(i);
    try {
      ManifestEntry entry;
      entry.video_id = e.at("video_id").get<std::string>();
      named += " ('" + entry.video_id + "')";
      if (!seen.insert(entry.video_id).second) {
        throw Error(Errc::InvalidArgument, named + ": duplicate video_id");
      }
      entry.activity = e.value("activity", std::string("default"));
      entry.feature_path = resolve(e.at("feature_path").get<std::string>());
      if (e.contains("label_path") && !e["label_path"].is_null()) {
        entry.label_path = resolve(e["label_path"].get<std::string>());
      }
      if (e.contains("k_override") && !e["k_override"].is_null()) {
        entry.k_override = parse_count(e["k_override"], named + ": k_override");
      }
      for (const auto* path : {&entry.feature_path, &entry.label_path}) {
        if (!path->empty() && !fs::exists(*path)) {
          throw Error(Errc::IoError, named + ": cannot find " + path->string());
        }
      }
      m.entries.push_back(std::move(entry));
    } catch (const json::exception& ex) {
      throw Error(Errc::ParseError, named + ": " + ex.what());
    }
  }
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

void save_manifest(const DatasetManifest& m, const fs::path& path) {
  json doc;
  doc["background_label"] = m.background_label;
  doc["exclude_background_from_k"] = m.exclude_background_from_k;
  if (m.label_map_path) doc["label_map_path"] = m.label_map_path->string();
  doc["entries"] = json::array();
  for (const auto& e : m.entries) {
    json j{{"video_id", e.video_id},
           {"activity", e.activity},
           {"feature_path", e.feature_path.string()}};
    if (!e.label_path.empty()) j["label_path"] = e.label_path.string();
    if (e.k_override) j["k_override"] = *e.k_override;
    doc["entries"].push_back(std::move(j));
  }
  write_file(path, doc.dump(2) + "\n");
}

GroundTruth load_entry_labels(const DatasetManifest& m, const ManifestEntry& e) {
  if (e.label_path.empty()) {
    throw Error(Errc::InvalidArgument, "video '" + e.video_id + "' has no label_path");
  }
  if (m.label_map_path) {
    const auto map = load_label_map(*m.label_map_path);
    return load_labels(e.label_path, m.background_label, &map);
  }
  return load_labels(e.label_path, m.background_label);
}

std::size_t rounded_mean_k(const std::vector<std::size_t>& counts) {
  if (counts.empty()) throw Error(Errc::EmptyInput, "no videos to average");
  std::size_t sum = 0;
  for (auto c : counts) sum += c;
  // floor(sum / n + 1/2) in integers.
  return (2 * sum + counts.size()) / (2 * counts.size());
}

std::map<std::string, std::size_t> compute_activity_k(const DatasetManifest& m) {
  std::map<std::string, std::vector<std::size_t>> per_activity;
  for (const auto& e : m.entries) {
    const GroundTruth gt = load_entry_labels(m, e);
    std::size_t distinct = gt.num_distinct();
    if (m.exclude_background_from_k && gt.background_id() && distinct > 1) --distinct;
    per_activity[e.activity].push_back(distinct);
  }
  std::map<std::string, std::size_t> out;
  for (const auto& [activity, counts] : per_activity) out[activity] = rounded_mean_k(counts);
  return out;
}

std::string format_partition(const Partition& p) {
  std::string out;
  out.reserve(p.size() * 3);
  for (int l : p.labels()) {
    out += std::to_string(l);
    out.push_back('\n');
  }
  return out;
}

Partition parse_partition(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "empty partition");
  std::vector<int> labels;
  labels.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto tok = trim(lines[i]);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size() || v < 0) {
      throw ParseError(source, i + 1, "expected a non-negative integer, got '" + std::string(tok) + "'");
    }
    labels.push_back(v);
  }
  try {
    return Partition(labels);
  } catch (const Error&) {
    // Sparse ids from other tools are accepted and compacted.
    return relabel_dense(labels);
  }
}

void save_partition(const Partition& p, const fs::path& path) { write_file(path, format_partition(p)); }

Partition load_partition(const fs::path& path) { return parse_partition(read_file(path), path.string()); }

}  // namespace twseg::io
