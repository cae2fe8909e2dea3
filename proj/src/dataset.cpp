// Copyright 2026 The nasg Authors
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

#include "nasg/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "nasg/error.hpp"

namespace nasg {

Dataset::Dataset(std::size_t dim, std::vector<std::size_t> row_offsets,
                 std::vector<Feature> entries, std::vector<double> labels,
                 LabelMode mode, std::size_t classes)
    : dim_(dim),
      offsets_(std::move(row_offsets)),
      entries_(std::move(entries)),
      labels_(std::move(labels)),
      mode_(mode),
      classes_(classes) {
  if (labels_.empty()) throw InvalidArgument("dataset must contain at least one sample");
  if (offsets_.size() != labels_.size() + 1 || offsets_.front() != 0 ||
      offsets_.back() != entries_.size()) {
    throw InvalidArgument("row offsets do not match entries and labels");
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (offsets_[i] > offsets_[i + 1]) throw InvalidArgument("row offsets must be non-decreasing");
    const auto r = row(i);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (r[k].index >= dim_) throw InvalidArgument("feature index out of range");
      if (k > 0 && r[k].index <= r[k - 1].index) {
        throw InvalidArgument("feature indices must be strictly increasing within a row");
      }
    }
    const double y = labels_[i];
    switch (mode_) {
      case LabelMode::kBinary:
        if (y != 1.0 && y != -1.0) throw InvalidArgument("binary labels must be -1 or +1");
        break;
      case LabelMode::kMulticlass:
        if (y < 0.0 || y != std::floor(y) || y >= static_cast<double>(classes_)) {
          throw InvalidArgument("multiclass labels must be integers in [0, classes)");
        }
        break;
      case LabelMode::kRegression:
        if (!std::isfinite(y)) throw InvalidArgument("labels must be finite");
        break;
    }
  }
  if (mode_ != LabelMode::kMulticlass && classes_ != 1) {
    throw InvalidArgument("binary and regression datasets have exactly one class slot");
  }
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.dim_ != b.dim_ || a.mode_ != b.mode_ || a.classes_ != b.classes_ ||
      a.offsets_ != b.offsets_ || a.labels_ != b.labels_ ||
      a.entries_.size() != b.entries_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < a.entries_.size(); ++k) {
    if (a.entries_[k].index != b.entries_[k].index ||
        a.entries_[k].value != b.entries_[k].value) {
      return false;
    }
  }
  return true;
}

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

// from_chars rejects a leading '+', LIBSVM files use it freely.
bool parse_double(std::string_view tok, double& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  if (tok.empty() || tok.front() == '+') return false;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size() && std::isfinite(out);
}

bool parse_index(std::string_view tok, std::uint64_t& out) {
  if (tok.empty()) return false;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<double> map_labels(const std::vector<double>& raw, LabelMode mode,
                               const std::vector<std::size_t>& lines, std::size_t& classes) {
  classes = 1;
  if (mode == LabelMode::kRegression) return raw;
  if (mode == LabelMode::kBinary) {
    bool has_zero = false;
    bool has_minus = false;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double y = raw[i];
      if (y == 0.0) {
        has_zero = true;
      } else if (y == -1.0) {
        has_minus = true;
      } else if (y != 1.0) {
        throw ParseError(lines[i], "label " + format_double(y) + " is not a binary label");
      }
      if (has_zero && has_minus) {
        throw ParseError(lines[i], "binary labels mix {0,1} and {-1,+1} conventions");
      }
    }
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] == 1.0 ? 1.0 : -1.0;
    return out;
  }
  std::map<double, std::size_t> ids;
  for (double y : raw) ids.emplace(y, 0);
  std::size_t next = 0;
  for (auto& [value, id] : ids) id = next++;
  classes = ids.size();
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = static_cast<double>(ids.at(raw[i]));
  return out;
}

}  // namespace

Dataset parse_libsvm(std::string_view text, const LoadOptions& options) {
  std::vector<std::size_t> offsets{0};
  std::vector<Feature> entries;
  std::vector<double> raw_labels;
  std::vector<std::size_t> label_lines;
  std::uint64_t max_index = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    const auto tokens = split_tokens(line);
    if (tokens.empty()) continue;

    double label = 0.0;
    if (!parse_double(tokens[0], label)) {
      throw ParseError(line_no, "malformed label '" + std::string(tokens[0]) + "'");
    }
    std::uint64_t prev = 0;
    for (std::size_t k = 1; k < tokens.size(); ++k) {
      const std::string_view tok = tokens[k];
      const std::size_t colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "malformed feature token '" + std::string(tok) + "'");
      }
      std::uint64_t index = 0;
      double value = 0.0;
      if (!parse_index(tok.substr(0, colon), index)) {
        throw ParseError(line_no, "malformed feature index in '" + std::string(tok) + "'");
      }
      if (!parse_double(tok.substr(colon + 1), value)) {
        throw ParseError(line_no, "malformed feature value in '" + std::string(tok) + "'");
      }
      if (index < 1) throw ParseError(line_no, "feature index < 1");
      if (index > std::numeric_limits<std::uint32_t>::max()) {
        throw ParseError(line_no, "feature index too large");
      }
      if (index <= prev) throw ParseError(line_no, "non-increasing feature index");
      prev = index;
      max_index = std::max(max_index, index);
      entries.push_back({static_cast<std::uint32_t>(index - 1), value});
    }
    offsets.push_back(entries.size());
    raw_labels.push_back(label);
    label_lines.push_back(line_no);
  }
  if (raw_labels.empty()) throw ParseError(0, "empty input: no samples");

  std::size_t dim = static_cast<std::size_t>(max_index);
  if (options.dimension != 0) {
    if (options.dimension < dim) {
      throw InvalidArgument("dimension override " + std::to_string(options.dimension) +
                            " is smaller than the largest feature index " + std::to_string(dim));
    }
    dim = options.dimension;
  }

  if (options.scale_max_abs) {
    std::vector<double> scale(dim, 0.0);
    for (const Feature& f : entries) scale[f.index] = std::max(scale[f.index], std::abs(f.value));
    for (Feature& f : entries) {
      if (scale[f.index] > 0.0) f.value /= scale[f.index];
    }
  }

  if (options.append_bias) {
    std::vector<Feature> with_bias;
    with_bias.reserve(entries.size() + raw_labels.size());
    std::vector<std::size_t> new_offsets{0};
    for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) with_bias.push_back(entries[k]);
      with_bias.push_back({static_cast<std::uint32_t>(dim), 1.0});
      new_offsets.push_back(with_bias.size());
    }
    entries = std::move(with_bias);
    offsets = std::move(new_offsets);
    ++dim;
  }

  std::size_t classes = 1;
  auto labels = map_labels(raw_labels, options.mode, label_lines, classes);
  return Dataset(dim, std::move(offsets), std::move(entries), std::move(labels), options.mode,
                 classes);
}

Dataset load_libsvm_file(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("failed reading dataset file '" + path.string() + "'");
  return parse_libsvm(buf.str(), options);
}

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error(ErrorCode::kInternal, "double formatting failed");
  return std::string(buf, ptr);
}

std::string serialize_libsvm(const Dataset& dataset) {
  std::string out;
  for (std::size_t i = 0; i < dataset.num_samples(); ++i) {
    const double y = dataset.label(i);
    if (dataset.label_mode() == LabelMode::kBinary) {
      out += y > 0 ? "+1" : "-1";
    } else {
      out += format_double(y);
    }
    for (const Feature& f : dataset.row(i)) {
      out += ' ';
      out += std::to_string(static_cast<std::uint64_t>(f.index) + 1);
      out += ':';
      out += format_double(f.value);
    }
    out += '\n';
  }
  return out;
}

}  // namespace nasg
