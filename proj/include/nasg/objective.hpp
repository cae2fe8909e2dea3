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
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nasg/dataset.hpp"
#include "nasg/error.hpp"
#include "nasg/linalg.hpp"

namespace nasg {

/// Finite-sum problem F(w) = (1/n) sum_i f(w; i).
///
/// Implementations are immutable after construction; every member is a pure
/// function of its arguments and safe to call concurrently.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t num_components() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::string_view name() const = 0;

  virtual double component_value(std::span<const double> w, std::size_t i) const = 0;

  /// out += scale * grad f(w; i). The accumulating form lets minibatch and
  /// full-gradient sums avoid temporaries.
  virtual void add_component_gradient(std::span<const double> w, std::size_t i, double scale,
                                      std::span<double> out) const = 0;

  /// Certified L such that every component gradient is L-Lipschitz.
  virtual double smoothness_bound() const = 0;

  /// Training accuracy in [0, 1] for classification objectives.
  virtual std::optional<double> accuracy(std::span<const double> /*w*/) const {
    return std::nullopt;
  }

  /// Exact minimizer, when the family admits one in closed form.
  virtual std::optional<Point> closed_form_minimizer() const { return std::nullopt; }

  Point component_gradient(std::span<const double> w, std::size_t i) const;
  double full_value(std::span<const double> w) const;
  Point full_gradient(std::span<const double> w) const;
  void full_gradient(std::span<const double> w, std::span<double> out) const;

 protected:
  void check_index(std::size_t i) const {
    if (i >= num_components()) throw InvalidArgument("component index out of range");
  }
};

/// f(w; i) = log(1 + exp(-y_i x_i^T w)), y_i in {-1, +1}.
class LogisticObjective final : public Objective {
 public:
  explicit LogisticObjective(std::shared_ptr<const Dataset> data);

  std::size_t num_components() const override { return data_->num_samples(); }
  std::size_t dim() const override { return data_->dim(); }
  std::string_view name() const override { return "logistic"; }
  double component_value(std::span<const double> w, std::size_t i) const override;
  void add_component_gradient(std::span<const double> w, std::size_t i, double scale,
                              std::span<double> out) const override;
  double smoothness_bound() const override { return smoothness_; }
  /// Fraction of samples with sign(x_i^T w) == y_i, where sign(0) = -1.
  std::optional<double> accuracy(std::span<const double> w) const override;

  const Dataset& data() const noexcept { return *data_; }

 private:
  std::shared_ptr<const Dataset> data_;
  double smoothness_;
};

/// L = max_i ||x_i||^2 / 4. Throws InvalidArgument "degenerate objective,
/// L=0" when every row is zero.
double logistic_smoothness(const Dataset& data);

/// Cross-entropy of softmax(W x_i + b) against class y_i.
///
/// Parameters are flattened as W (c rows of d, row-major) followed by b (c),
/// so dim() == c * d + c.
class SoftmaxObjective final : public Objective {
 public:
  explicit SoftmaxObjective(std::shared_ptr<const Dataset> data);

  std::size_t num_components() const override { return data_->num_samples(); }
  std::size_t dim() const override { return classes_ * (features_ + 1); }
  std::string_view name() const override { return "softmax"; }
  double component_value(std::span<const double> w, std::size_t i) const override;
  void add_component_gradient(std::span<const double> w, std::size_t i, double scale,
                              std::span<double> out) const override;
  /// max_i (||x_i||^2 + 1) / 2; the +1 accounts for the bias input.
  double smoothness_bound() const override { return smoothness_; }
  /// argmax match rate, ties resolved toward the lower class index.
  std::optional<double> accuracy(std::span<const double> w) const override;

  std::size_t num_classes() const noexcept { return classes_; }
  std::size_t num_features() const noexcept { return features_; }
  std::size_t bias_offset() const noexcept { return classes_ * features_; }

 private:
  void logits(std::span<const double> w, std::size_t i, std::span<double> z) const;

  std::shared_ptr<const Dataset> data_;
  std::size_t classes_;
  std::size_t features_;
  double smoothness_;
};

/// f(w; i) = 0.5 ||w - c_i||^2. L = 1 and the minimizer is the mean center.
class QuadraticObjective final : public Objective {
 public:
  /// `centers` holds n rows of `dim` values, row-major.
  QuadraticObjective(std::size_t dim, std::vector<double> centers);

  std::size_t num_components() const override { return centers_.size() / dim_; }
  std::size_t dim() const override { return dim_; }
  std::string_view name() const override { return "quadratic"; }
  double component_value(std::span<const double> w, std::size_t i) const override;
  void add_component_gradient(std::span<const double> w, std::size_t i, double scale,
                              std::span<double> out) const override;
  double smoothness_bound() const override { return 1.0; }
  std::optional<Point> closed_form_minimizer() const override;

  std::span<const double> center(std::size_t i) const {
    return {centers_.data() + i * dim_, dim_};
  }

 private:
  std::size_t dim_;
  std::vector<double> centers_;
};

/// (1/n) sum_i ||grad f(w; i)||^2. At a minimizer this is sigma_*^2.
double variance_at_point(const Objective& objective, std::span<const double> w);

struct ReferenceSolution {
  Point minimizer;
  double value = 0.0;
  double gradient_norm = 0.0;
  long iterations = 0;
};

/// Thrown by solve_reference when the cap is hit. Carries the last iterate
/// so callers can tell a slow solve from an unattained infimum.
class ReferenceSolveError : public ConvergenceError {
 public:
  ReferenceSolveError(Point last, double value, double gradient_norm, long iterations);

  const Point& last_iterate() const noexcept { return last_; }
  double last_value() const noexcept { return value_; }
  double last_gradient_norm() const noexcept { return gradient_norm_; }
  long iterations() const noexcept { return iterations_; }

 private:
  Point last_;
  double value_;
  double gradient_norm_;
  long iterations_;
};

struct ReferenceOptions {
  double tolerance = 1e-10;
  long max_iterations = 1'000'000;
  /// Empty means the origin.
  Point start;
};

/// High-accuracy minimizer of F. Closed-form families return their exact
/// minimizer; everything else runs deterministic NAG with step 1/L until
/// ||grad F|| <= tolerance.
ReferenceSolution solve_reference(const Objective& objective, const ReferenceOptions& options = {});

}  // namespace nasg
