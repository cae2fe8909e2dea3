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

#include "nasg/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nasg/dataset.hpp"

namespace nasg {

Point Objective::component_gradient(std::span<const double> w, std::size_t i) const {
  Point g(dim(), 0.0);
  add_component_gradient(w, i, 1.0, g);
  return g;
}

double Objective::full_value(std::span<const double> w) const {
  const std::size_t n = num_components();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += component_value(w, i);
  return s / static_cast<double>(n);
}

Point Objective::full_gradient(std::span<const double> w) const {
  Point g(dim(), 0.0);
  full_gradient(w, g);
  return g;
}

void Objective::full_gradient(std::span<const double> w, std::span<double> out) const {
  fill_zero(out);
  const std::size_t n = num_components();
  for (std::size_t i = 0; i < n; ++i) add_component_gradient(w, i, 1.0, out);
  const double inv = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= inv;
}

// ---------------------------------------------------------------------------
// Logistic regression

double logistic_smoothness(const Dataset& data) {
  double max_sq = 0.0;
  for (std::size_t i = 0; i < data.num_samples(); ++i) {
    max_sq = std::max(max_sq, data.row_squared_norm(i));
  }
  if (max_sq == 0.0) throw InvalidArgument("degenerate objective, L=0");
  return max_sq / 4.0;
}

LogisticObjective::LogisticObjective(std::shared_ptr<const Dataset> data)
    : data_(std::move(data)) {
  if (!data_) throw InvalidArgument("logistic objective needs a dataset");
  if (data_->label_mode() != LabelMode::kBinary) {
    throw InvalidArgument("logistic objective needs binary labels");
  }
  smoothness_ = logistic_smoothness(*data_);
}

namespace {

// log(1 + exp(-m)) without overflow for either sign of m.
double log1p_exp_neg(double m) {
  return m > 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

// 1 / (1 + exp(m))
double sigmoid_neg(double m) {
  if (m >= 0.0) {
    const double e = std::exp(-m);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(m));
}

}  // namespace

double LogisticObjective::component_value(std::span<const double> w, std::size_t i) const {
  check_index(i);
  const double margin = data_->label(i) * data_->row_dot(i, w);
  return log1p_exp_neg(margin);
}

void LogisticObjective::add_component_gradient(std::span<const double> w, std::size_t i,
                                               double scale, std::span<double> out) const {
  check_index(i);
  const double y = data_->label(i);
  const double s = sigmoid_neg(y * data_->row_dot(i, w));
  data_->row_axpy(i, -scale * y * s, out);
}

std::optional<double> LogisticObjective::accuracy(std::span<const double> w) const {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data_->num_samples(); ++i) {
    const double predicted = data_->row_dot(i, w) > 0.0 ? 1.0 : -1.0;
    if (predicted == data_->label(i)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data_->num_samples());
}

// ---------------------------------------------------------------------------
// Softmax linear classifier

SoftmaxObjective::SoftmaxObjective(std::shared_ptr<const Dataset> data)
    : data_(std::move(data)) {
  if (!data_) throw InvalidArgument("softmax objective needs a dataset");
  if (data_->label_mode() != LabelMode::kMulticlass || data_->num_classes() < 2) {
    throw InvalidArgument("softmax objective needs a multiclass dataset with at least 2 classes");
  }
  classes_ = data_->num_classes();
  features_ = data_->dim();
  double max_sq = 0.0;
  for (std::size_t i = 0; i < data_->num_samples(); ++i) {
    max_sq = std::max(max_sq, data_->row_squared_norm(i) + 1.0);
  }
  smoothness_ = max_sq / 2.0;
}

void SoftmaxObjective::logits(std::span<const double> w, std::size_t i,
                              std::span<double> z) const {
  const std::size_t b = bias_offset();
  for (std::size_t k = 0; k < classes_; ++k) {
    z[k] = data_->row_dot(i, w, k * features_) + w[b + k];
  }
}

double SoftmaxObjective::component_value(std::span<const double> w, std::size_t i) const {
  check_index(i);
  std::vector<double> z(classes_);
  logits(w, i, z);
  const auto top = static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
  double rest = 0.0;
  for (std::size_t k = 0; k < classes_; ++k) {
    if (k != top) rest += std::exp(z[k] - z[top]);
  }
  const auto y = static_cast<std::size_t>(data_->label(i));
  return std::log1p(rest) + (z[top] - z[y]);
}

void SoftmaxObjective::add_component_gradient(std::span<const double> w, std::size_t i,
                                              double scale, std::span<double> out) const {
  check_index(i);
  std::vector<double> p(classes_);
  logits(w, i, p);
  const double zmax = *std::max_element(p.begin(), p.end());
  double sum = 0.0;
  for (double& v : p) {
    v = std::exp(v - zmax);
    sum += v;
  }
  const auto y = static_cast<std::size_t>(data_->label(i));
  const std::size_t b = bias_offset();
  for (std::size_t k = 0; k < classes_; ++k) {
    const double r = p[k] / sum - (k == y ? 1.0 : 0.0);
    data_->row_axpy(i, scale * r, out, k * features_);
    out[b + k] += scale * r;
  }
}

std::optional<double> SoftmaxObjective::accuracy(std::span<const double> w) const {
  std::vector<double> z(classes_);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < data_->num_samples(); ++i) {
    logits(w, i, z);
    const auto best = static_cast<std::size_t>(std::max_element(z.begin(), z.end()) - z.begin());
    if (best == static_cast<std::size_t>(data_->label(i))) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(data_->num_samples());
}

// ---------------------------------------------------------------------------
// Quadratic family

QuadraticObjective::QuadraticObjective(std::size_t dim, std::vector<double> centers)
    : dim_(dim), centers_(std::move(centers)) {
  if (dim_ == 0) throw InvalidArgument("quadratic objective needs dim >= 1");
  if (centers_.empty() || centers_.size() % dim_ != 0) {
    throw InvalidArgument("centers must hold n >= 1 rows of dim values");
  }
  if (!all_finite(centers_)) throw InvalidArgument("centers must be finite");
}

double QuadraticObjective::component_value(std::span<const double> w, std::size_t i) const {
  check_index(i);
  return 0.5 * squared_distance(w, center(i));
}

void QuadraticObjective::add_component_gradient(std::span<const double> w, std::size_t i,
                                                double scale, std::span<double> out) const {
  check_index(i);
  const auto c = center(i);
  for (std::size_t j = 0; j < dim_; ++j) out[j] += scale * (w[j] - c[j]);
}

std::optional<Point> QuadraticObjective::closed_form_minimizer() const {
  const std::size_t n = num_components();
  Point mean(dim_, 0.0);
  for (std::size_t i = 0; i < n; ++i) axpy(1.0, center(i), mean);
  for (double& v : mean) v /= static_cast<double>(n);
  return mean;
}

// ---------------------------------------------------------------------------

double variance_at_point(const Objective& objective, std::span<const double> w) {
  const std::size_t n = objective.num_components();
  Point g(objective.dim());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fill_zero(g);
    objective.add_component_gradient(w, i, 1.0, g);
    s += squared_norm(g);
  }
  return s / static_cast<double>(n);
}

ReferenceSolveError::ReferenceSolveError(Point last, double value, double gradient_norm,
                                         long iterations)
    : ConvergenceError("reference solve did not converge: ||grad F|| = " +
                       format_double(gradient_norm) + " after " + std::to_string(iterations) +
                       " iterations (F = " + format_double(value) + ")"),
      last_(std::move(last)),
      value_(value),
      gradient_norm_(gradient_norm),
      iterations_(iterations) {}

ReferenceSolution solve_reference(const Objective& objective, const ReferenceOptions& options) {
  if (!(options.tolerance > 0.0)) throw InvalidArgument("reference tolerance must be positive");
  if (options.max_iterations < 0) throw InvalidArgument("iteration cap must be non-negative");
  const std::size_t dim = objective.dim();

  if (auto closed = objective.closed_form_minimizer()) {
    ReferenceSolution sol;
    sol.value = objective.full_value(*closed);
    sol.gradient_norm = std::sqrt(squared_norm(objective.full_gradient(*closed)));
    sol.minimizer = std::move(*closed);
    return sol;
  }

  Point x = options.start.empty() ? Point(dim, 0.0) : options.start;
  if (x.size() != dim) throw InvalidArgument("reference start has the wrong dimension");

  // Deterministic NAG with alpha = 1/L, momentum (t-1)/(t+2).
  const double step = 1.0 / objective.smoothness_bound();
  Point x_prev = x;
  Point y = x;
  Point g(dim);
  objective.full_gradient(x, g);
  double gnorm = std::sqrt(squared_norm(g));
  long t = 0;
  while (gnorm > options.tolerance) {
    if (t == options.max_iterations) {
      throw ReferenceSolveError(x, objective.full_value(x), gnorm, t);
    }
    ++t;
    objective.full_gradient(y, g);
    x_prev.swap(x);
    for (std::size_t j = 0; j < dim; ++j) x[j] = y[j] - step * g[j];
    const double momentum = static_cast<double>(t - 1) / static_cast<double>(t + 2);
    for (std::size_t j = 0; j < dim; ++j) y[j] = x[j] + momentum * (x[j] - x_prev[j]);
    if (!all_finite(x)) throw ConvergenceError("reference solve produced a non-finite iterate");
    objective.full_gradient(x, g);
    gnorm = std::sqrt(squared_norm(g));
  }
  return {x, objective.full_value(x), gnorm, t};
}

}  // namespace nasg
