// Copyright 2026 The lapshot Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lapshot/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace lapshot {

namespace {

// ---- little-endian primitives ----

void append_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(static_cast<unsigned char>(v & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 8) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 16) & 0xFF));
  out.push_back(static_cast<unsigned char>((v >> 24) & 0xFF));
}

void append_i32(std::vector<unsigned char>& out, std::int32_t v) {
  append_u32(out, static_cast<std::uint32_t>(v));
}

void append_f32(std::vector<unsigned char>& out, float v) {
  append_u32(out, std::bit_cast<std::uint32_t>(v));
}

std::uint32_t read_u32(const std::vector<unsigned char>& buf,
                       std::size_t offset) {
  return static_cast<std::uint32_t>(buf[offset]) |
         (static_cast<std::uint32_t>(buf[offset + 1]) << 8) |
         (static_cast<std::uint32_t>(buf[offset + 2]) << 16) |
         (static_cast<std::uint32_t>(buf[offset + 3]) << 24);
}

std::int32_t read_i32(const std::vector<unsigned char>& buf,
                      std::size_t offset) {
  return static_cast<std::int32_t>(read_u32(buf, offset));
}

float read_f32(const std::vector<unsigned char>& buf, std::size_t offset) {
  return std::bit_cast<float>(read_u32(buf, offset));
}

// ---- string helpers ----

std::string trim(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  std::size_t end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string str_printf(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[64];
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

std::string str_g(double v) { return str_printf("%g", v); }
std::string str_g17(double v) { return str_printf("%.17g", v); }

std::string join_i32(const std::vector<std::int32_t>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += std::to_string(values[i]);
  }
  return out;
}

// ---- strict numeric parsing ----

double parse_double(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("invalid " + what + " value '" + raw + "'");
  }
  return value;
}

long long parse_i64(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("invalid " + what + " value '" + raw + "'");
  }
  return value;
}

int parse_int(const std::string& raw, const std::string& what) {
  const long long v = parse_i64(raw, what);
  if (v < INT32_MIN || v > INT32_MAX) {
    throw ParseError(what + " value out of range: '" + raw + "'");
  }
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError("invalid " + what + " value '" + raw + "'");
  }
  return value;
}

bool parse_bool(const std::string& raw, const std::string& what) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ParseError("invalid " + what + " value '" + raw +
                   "' (expected true/false)");
}

std::vector<double> parse_double_list(const std::string& raw,
                                      const std::string& what) {
  std::vector<double> out;
  for (const std::string& part : split(raw, ',')) {
    out.push_back(parse_double(part, what));
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& raw,
                                const std::string& what) {
  std::vector<int> out;
  for (const std::string& part : split(raw, ',')) {
    out.push_back(parse_int(part, what));
  }
  return out;
}

std::vector<unsigned char> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::vector<unsigned char> bytes(
      (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw IoError("read failure on '" + path + "'");
  }
  return bytes;
}

void append_inference_config(std::string& out, const InferenceConfig& c) {
  out += "lambda: " + str_g(c.lambda) + "\n";
  out += "knn: " + std::to_string(c.knn) + "\n";
  out += std::string("distance: ") + to_string(c.distance) + "\n";
  out += std::string("normalization: ") + to_string(c.normalization) + "\n";
  out += std::string("rectify_prototypes: ") +
         (c.rectify_prototypes ? "true" : "false") + "\n";
  out += std::string("shift_correction: ") +
         (c.shift_correction ? "true" : "false") + "\n";
  out += std::string("symmetrize_affinity: ") +
         (c.symmetrize_affinity ? "true" : "false") + "\n";
  out += "max_iterations: " + std::to_string(c.max_iterations) + "\n";
  out += "rel_tolerance: " + str_g(c.rel_tolerance) + "\n";
}

}  // namespace

// ---------------------------------------------------------------------------
// Binary feature format
// ---------------------------------------------------------------------------

FeatureMatrix read_features_binary(const std::string& path) {
  const std::vector<unsigned char> buf = read_file_bytes(path);
  constexpr std::size_t kHeaderSize = 20;
  if (buf.size() < kHeaderSize) {
    throw ParseError("'" + path + "': truncated header, file has " +
                     std::to_string(buf.size()) + " bytes, header needs " +
                     std::to_string(kHeaderSize));
  }
  if (std::memcmp(buf.data(), kFeatureMagic, 4) != 0) {
    throw ParseError("'" + path + "': bad magic at byte 0 (expected LSFT)");
  }
  const std::uint32_t version = read_u32(buf, 4);
  if (version != kFeatureVersion) {
    throw ParseError("'" + path + "': unsupported version " +
                     std::to_string(version) + " at byte 4 (expected " +
                     std::to_string(kFeatureVersion) + ")");
  }
  const std::uint32_t n_rows = read_u32(buf, 8);
  const std::uint32_t dim = read_u32(buf, 12);
  const std::uint32_t flags = read_u32(buf, 16);
  if ((flags & ~0x3u) != 0) {
    throw ParseError("'" + path + "': unknown flag bits at byte 16: " +
                     std::to_string(flags));
  }
  if (dim == 0) {
    throw ParseError("'" + path + "': zero dimension at byte 12");
  }
  const bool has_labels = (flags & 0x1u) != 0;
  const bool has_base_mean = (flags & 0x2u) != 0;

  const std::uint64_t record_size =
      (has_labels ? 4u : 0u) + 4ull * dim;
  const std::uint64_t expected = kHeaderSize + record_size * n_rows +
                                 (has_base_mean ? 4ull * dim : 0ull);
  if (buf.size() != expected) {
    throw ParseError("'" + path + "': declared sizes need " +
                     std::to_string(expected) + " bytes but file has " +
                     std::to_string(buf.size()));
  }

  FeatureMatrix out;
  out.data = Matrix(n_rows, dim);
  std::vector<std::int32_t> labels;
  if (has_labels) labels.resize(n_rows);

  std::size_t offset = kHeaderSize;
  for (std::uint32_t r = 0; r < n_rows; ++r) {
    if (has_labels) {
      labels[r] = read_i32(buf, offset);
      offset += 4;
    }
    auto row = out.data.row(r);
    for (std::uint32_t c = 0; c < dim; ++c) {
      const float v = read_f32(buf, offset);
      if (!std::isfinite(v)) {
        throw ParseError("'" + path + "': non-finite value at byte " +
                         std::to_string(offset) + " (row " +
                         std::to_string(r) + ", col " + std::to_string(c) +
                         ")");
      }
      row[c] = static_cast<double>(v);
      offset += 4;
    }
  }
  if (has_labels) out.labels = std::move(labels);
  if (has_base_mean) {
    std::vector<double> mean(dim);
    for (std::uint32_t c = 0; c < dim; ++c) {
      const float v = read_f32(buf, offset);
      if (!std::isfinite(v)) {
        throw ParseError("'" + path + "': non-finite base-mean value at byte " +
                         std::to_string(offset));
      }
      mean[c] = static_cast<double>(v);
      offset += 4;
    }
    out.base_mean = std::move(mean);
  }
  return out;
}

void write_features_binary(const FeatureMatrix& features,
                           const std::string& path) {
  features.validate("write_features_binary");
  const auto n_rows = static_cast<std::uint32_t>(features.rows());
  const auto dim = static_cast<std::uint32_t>(features.dim());
  std::uint32_t flags = 0;
  if (features.has_labels()) flags |= 0x1u;
  if (features.base_mean) flags |= 0x2u;

  std::vector<unsigned char> buf;
  buf.reserve(20 + (4ull + 4ull * dim) * n_rows);
  buf.insert(buf.end(), kFeatureMagic, kFeatureMagic + 4);
  append_u32(buf, kFeatureVersion);
  append_u32(buf, n_rows);
  append_u32(buf, dim);
  append_u32(buf, flags);

  for (std::uint32_t r = 0; r < n_rows; ++r) {
    if (features.has_labels()) {
      append_i32(buf, (*features.labels)[r]);
    }
    const auto row = features.row(r);
    for (std::uint32_t c = 0; c < dim; ++c) {
      append_f32(buf, static_cast<float>(row[c]));
    }
  }
  if (features.base_mean) {
    for (double v : *features.base_mean) {
      append_f32(buf, static_cast<float>(v));
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(reinterpret_cast<const char*>(buf.data()),
            static_cast<std::streamsize>(buf.size()));
  if (!out) {
    throw IoError("write failure on '" + path + "'");
  }
}

// ---------------------------------------------------------------------------
// CSV feature format
// ---------------------------------------------------------------------------

FeatureMatrix read_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("'" + path + "': empty file, expected a header row");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split(line, ',');
  if (header.empty() || header[0] != "id") {
    throw ParseError("'" + path + "' line 1: header must start with 'id'");
  }
  const bool has_labels = header.size() > 1 && header[1] == "label";
  const std::size_t feature_start = has_labels ? 2 : 1;
  if (header.size() <= feature_start) {
    throw ParseError("'" + path + "' line 1: no feature columns");
  }
  const std::size_t dim = header.size() - feature_start;
  for (std::size_t i = 0; i < dim; ++i) {
    if (header[feature_start + i] != "f" + std::to_string(i)) {
      throw ParseError("'" + path + "' line 1: expected column 'f" +
                       std::to_string(i) + "', got '" +
                       header[feature_start + i] + "'");
    }
  }

  std::vector<double> values;
  std::vector<std::int32_t> labels;
  std::vector<std::string> ids;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                       ": expected " + std::to_string(header.size()) +
                       " fields, got " + std::to_string(cells.size()));
    }
    ids.push_back(cells[0]);
    if (has_labels) {
      try {
        labels.push_back(
            static_cast<std::int32_t>(parse_int(cells[1], "label")));
      } catch (const ParseError& e) {
        throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                         ": " + e.what());
      }
    }
    for (std::size_t i = 0; i < dim; ++i) {
      double v;
      try {
        v = parse_double(cells[feature_start + i], "feature");
      } catch (const ParseError& e) {
        throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                         " column " + std::to_string(feature_start + i + 1) +
                         ": " + e.what());
      }
      if (!std::isfinite(v)) {
        throw ParseError("'" + path + "' line " + std::to_string(line_no) +
                         ": non-finite feature value");
      }
      values.push_back(v);
    }
  }

  FeatureMatrix out;
  const std::size_t rows = ids.size();
  out.data = Matrix(rows, dim);
  std::copy(values.begin(), values.end(), out.data.values().begin());
  out.ids = std::move(ids);
  if (has_labels) out.labels = std::move(labels);
  return out;
}

void write_features_csv(const FeatureMatrix& features,
                        const std::string& path) {
  features.validate("write_features_csv");
  std::string text = "id";
  if (features.has_labels()) text += ",label";
  for (std::size_t i = 0; i < features.dim(); ++i) {
    text += ",f" + std::to_string(i);
  }
  text += "\n";
  for (std::size_t r = 0; r < features.rows(); ++r) {
    text += features.ids.empty() ? std::to_string(r) : features.ids[r];
    if (features.has_labels()) {
      text += "," + std::to_string((*features.labels)[r]);
    }
    const auto row = features.row(r);
    for (std::size_t i = 0; i < features.dim(); ++i) {
      text += "," + str_printf("%.9g", row[i]);
    }
    text += "\n";
  }
  write_text_file(text, path);
}

FeatureMatrix read_features(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return read_features_csv(path);
  }
  return read_features_binary(path);
}

void write_features(const FeatureMatrix& features, const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    write_features_csv(features, path);
  } else {
    write_features_binary(features, path);
  }
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

void apply_config_entry(RunConfig& config, const std::string& key,
                        const std::string& value) {
  InferenceConfig& inf = config.inference;
  EpisodeSpec& ep = config.episode;
  if (key == "lambda") {
    inf.lambda = parse_double(value, key);
  } else if (key == "knn") {
    inf.knn = parse_int(value, key);
  } else if (key == "distance") {
    inf.distance = distance_from_string(trim(value));
  } else if (key == "normalization") {
    inf.normalization = normalization_from_string(trim(value));
  } else if (key == "rectify_prototypes") {
    inf.rectify_prototypes = parse_bool(value, key);
  } else if (key == "shift_correction") {
    inf.shift_correction = parse_bool(value, key);
  } else if (key == "symmetrize_affinity") {
    inf.symmetrize_affinity = parse_bool(value, key);
  } else if (key == "max_iterations") {
    inf.max_iterations = parse_int(value, key);
  } else if (key == "rel_tolerance") {
    inf.rel_tolerance = parse_double(value, key);
  } else if (key == "ways") {
    ep.ways = parse_int(value, key);
  } else if (key == "shots") {
    ep.shots = parse_int_list(value, key);
  } else if (key == "queries_per_class") {
    ep.queries_per_class = parse_int(value, key);
  } else if (key == "num_episodes") {
    ep.num_episodes = parse_int(value, key);
  } else if (key == "seed") {
    ep.seed = parse_u64(value, key);
  } else if (key == "pool") {
    config.pool = trim(value);
  } else if (key == "support") {
    config.support = trim(value);
  } else if (key == "query") {
    config.query = trim(value);
  } else if (key == "output") {
    config.output = trim(value);
  } else if (key == "report") {
    config.report = trim(value);
  } else if (key == "episodes_csv") {
    config.episodes_csv = trim(value);
  } else if (key == "threads") {
    config.threads = parse_int(value, key);
  } else if (key == "per_episode") {
    config.per_episode = parse_bool(value, key);
  } else if (key == "lambda_grid") {
    config.lambda_grid = parse_double_list(value, key);
  } else if (key == "knn_grid") {
    config.knn_grid = parse_int_list(value, key);
  } else {
    throw ParseError("unknown config key '" + key + "'");
  }
}

RunConfig parse_run_config_text(const std::string& text,
                                const std::string& origin) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(origin + " line " + std::to_string(line_no) +
                       ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_config_entry(config, key, value);
    } catch (const ParseError& e) {
      throw ParseError(origin + " line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return config;
}

RunConfig parse_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open config '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_config_text(buffer.str(), path);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

std::string format_accuracy(double accuracy, double ci_half_width) {
  return str_printf("%.2f", accuracy * 100.0) + " ± " +
         str_printf("%.2f", ci_half_width * 100.0);
}

std::string render_report(const EpisodeReport& report, bool include_episodes) {
  std::string out = "# lapshot bench report\n";
  out += std::string("method: ") +
         (report.method == Method::kLaplacian ? "laplacian"
                                              : "nearest_prototype") +
         "\n";
  append_inference_config(out, report.config);
  out += "ways: " + std::to_string(report.spec.ways) + "\n";
  out += "shots: ";
  for (std::size_t i = 0; i < report.spec.shots.size(); ++i) {
    if (i > 0) out += ",";
    out += std::to_string(report.spec.shots[i]);
  }
  out += "\n";
  out += "queries_per_class: " + std::to_string(report.spec.queries_per_class) +
         "\n";
  out += "num_episodes: " + std::to_string(report.spec.num_episodes) + "\n";
  out += "seed: " + std::to_string(report.spec.seed) + "\n";
  out += "accuracy: " +
         format_accuracy(report.mean_accuracy, report.ci95_half_width) + "\n";
  out += "per_class_accuracy: " +
         format_accuracy(report.mean_per_class_accuracy,
                         report.per_class_ci95_half_width) +
         "\n";
  out += "iterations_mean: " + str_printf("%.2f", report.mean_iterations) +
         "\n";
  out += "iterations_median: " + str_g(report.median_iterations) + "\n";
  const std::string total = std::to_string(report.per_episode.size());
  out += "converged: " + std::to_string(report.converged_episodes) + "/" +
         total + "\n";
  out += "monotone: " + std::to_string(report.monotone_episodes) + "/" +
         total + "\n";
  out += "knn_clamped: " + std::to_string(report.knn_clamped_episodes) + "/" +
         total + "\n";
  out += "wall_seconds_mean: " + str_g(report.mean_wall_seconds) + "\n";
  out += "wall_seconds_total: " + str_g(report.total_wall_seconds) + "\n";

  if (include_episodes) {
    out += "\nper_episode:\n";
    out +=
        "index seed accuracy per_class_accuracy iterations converged "
        "monotone label_map\n";
    for (std::size_t i = 0; i < report.per_episode.size(); ++i) {
      const EpisodeResult& e = report.per_episode[i];
      out += std::to_string(i) + " " + std::to_string(e.seed) + " " +
             str_printf("%.6f", e.accuracy) + " " +
             str_printf("%.6f", e.per_class_accuracy) + " " +
             std::to_string(e.iterations) + " " +
             std::string(e.converged ? "1" : "0") + " " +
             std::string(e.monotone ? "1" : "0") + " " +
             join_i32(e.label_map, ';') + "\n";
    }
  }
  return out;
}

std::string render_episodes_csv(const EpisodeReport& report) {
  std::string out =
      "episode,seed,accuracy,per_class_accuracy,iterations,converged,"
      "monotone,wall_seconds,label_map\n";
  for (std::size_t i = 0; i < report.per_episode.size(); ++i) {
    const EpisodeResult& e = report.per_episode[i];
    out += std::to_string(i) + "," + std::to_string(e.seed) + "," +
           str_g17(e.accuracy) + "," + str_g17(e.per_class_accuracy) + "," +
           std::to_string(e.iterations) + "," +
           std::string(e.converged ? "1" : "0") + "," +
           std::string(e.monotone ? "1" : "0") + "," +
           str_printf("%.9g", e.wall_seconds) + "," +
           join_i32(e.label_map, ';') + "\n";
  }
  return out;
}

std::string render_tune_report(const TuneResult& tune) {
  std::string out = "# lapshot tune report\n";
  out += "best_lambda: " + str_g(tune.best_lambda) + "\n";
  out += "lambda accuracy ci95\n";
  for (const TuneEntry& entry : tune.table) {
    out += str_g(entry.lambda) + " " +
           str_printf("%.2f", entry.mean_accuracy * 100.0) + " " +
           str_printf("%.2f", entry.ci95_half_width * 100.0) + "\n";
  }
  return out;
}

std::string render_infer_report(const PipelineResult& result,
                                const InferenceConfig& config,
                                double wall_seconds) {
  std::string out = "# lapshot infer report\n";
  append_inference_config(out, config);
  out += "n_query: " + std::to_string(result.predicted_labels.size()) + "\n";
  out += "classes: " + std::to_string(result.label_map.size()) + "\n";
  out += "label_map: " + join_i32(result.label_map, ';') + "\n";
  out += "iterations: " + std::to_string(result.result.trace.iterations) +
         "\n";
  out += std::string("converged: ") +
         (result.result.trace.converged ? "true" : "false") + "\n";
  out += std::string("monotone: ") +
         (result.result.trace.monotone ? "true" : "false") + "\n";
  const auto& objectives = result.result.trace.objective_values;
  if (!objectives.empty()) {
    out += "objective_initial: " + str_printf("%.9g", objectives.front()) +
           "\n";
    out += "objective_final: " + str_printf("%.9g", objectives.back()) + "\n";
  }
  out += "zero_norm_rows: " + std::to_string(result.zero_norm_rows) + "\n";
  out += std::string("knn_clamped: ") +
         (result.knn_clamped ? "true" : "false") + "\n";
  out += std::string("shift_applied: ") +
         (result.shift_delta.has_value() ? "true" : "false") + "\n";
  if (result.accuracy >= 0.0) {
    out += "accuracy: " + str_printf("%.2f", result.accuracy * 100.0) + "\n";
    out += "per_class_accuracy: " +
           str_printf("%.2f", result.per_class_accuracy * 100.0) + "\n";
  }
  out += "wall_seconds: " + str_g(wall_seconds) + "\n";
  return out;
}

std::string render_labels_csv(const PipelineResult& result,
                              const std::vector<std::string>& query_ids) {
  std::string out = "id,predicted_label\n";
  for (std::size_t q = 0; q < result.predicted_labels.size(); ++q) {
    out += (q < query_ids.size() ? query_ids[q] : std::to_string(q)) + "," +
           std::to_string(result.predicted_labels[q]) + "\n";
  }
  return out;
}

void write_report(const EpisodeReport& report, const std::string& path,
                  bool include_episodes) {
  write_text_file(render_report(report, include_episodes), path);
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw IoError("write failure on '" + path + "'");
  }
}

}  // namespace lapshot
