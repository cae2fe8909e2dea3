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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nasg {

/// How the first token of each LIBSVM line is interpreted.
enum class LabelMode {
  /// {0,1} or {-1,+1} mapped to {-1,+1}.
  kBinary,
  /// Arbitrary numeric ids re-indexed densely from 0 in ascending order.
  kMulticlass,
  /// Labels kept verbatim.
  kRegression,
};

struct Feature {
  std::uint32_t index;  // 0-based
  double value;
};

/// Immutable sparse sample matrix in CSR layout plus labels.
///
/// Invariants (checked on construction): n >= 1, every row's indices are
/// strictly increasing and < dim, labels.size() == n, binary labels are
/// exactly -1 or +1, multiclass labels are integers in [0, classes).
class Dataset {
 public:
  Dataset(std::size_t dim, std::vector<std::size_t> row_offsets,
          std::vector<Feature> entries, std::vector<double> labels,
          LabelMode mode, std::size_t classes);

  std::size_t num_samples() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  /// 1 for binary and regression data.
  std::size_t num_classes() const noexcept { return classes_; }
  LabelMode label_mode() const noexcept { return mode_; }

  std::span<const Feature> row(std::size_t i) const {
    return {entries_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  double label(std::size_t i) const { return labels_[i]; }
  std::span<const double> labels() const noexcept { return labels_; }
  std::size_t num_entries() const noexcept { return entries_.size(); }

  /// x_i^T w[offset, offset + dim)
  double row_dot(std::size_t i, std::span<const double> w, std::size_t offset = 0) const {
    double s = 0.0;
    for (const Feature& f : row(i)) s += f.value * w[offset + f.index];
    return s;
  }

  /// out[offset + j] += alpha * x_ij
  void row_axpy(std::size_t i, double alpha, std::span<double> out,
                std::size_t offset = 0) const {
    for (const Feature& f : row(i)) out[offset + f.index] += alpha * f.value;
  }

  double row_squared_norm(std::size_t i) const {
    double s = 0.0;
    for (const Feature& f : row(i)) s += f.value * f.value;
    return s;
  }

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::size_t dim_;
  std::vector<std::size_t> offsets_;
  std::vector<Feature> entries_;
  std::vector<double> labels_;
  LabelMode mode_;
  std::size_t classes_;
};

struct LoadOptions {
  LabelMode mode = LabelMode::kBinary;
  /// 0 means "max index seen". Otherwise must be >= max index seen.
  std::size_t dimension = 0;
  /// Append a constant 1 feature at index dim (after scaling).
  bool append_bias = false;
  /// Divide every feature column by its max absolute value (nonzero columns).
  bool scale_max_abs = false;
};

/// Parses LIBSVM text: `<label> (<idx>:<val>)*` per line, 1-based indices
/// stored 0-based, blank lines skipped. Throws ParseError with the 1-based
/// line number on malformed input, or InvalidArgument for a bad override.
Dataset parse_libsvm(std::string_view text, const LoadOptions& options = {});

/// Reads and parses a file. Throws IoError if it cannot be read.
Dataset load_libsvm_file(const std::filesystem::path& path, const LoadOptions& options = {});

/// Writes LIBSVM text that parses back (with the dataset's own label mode and
/// dimension) to an identical Dataset. Values use shortest round-trip form.
std::string serialize_libsvm(const Dataset& dataset);

/// Shortest decimal form of `value` that parses back to the same double.
std::string format_double(double value);

}  // namespace nasg
