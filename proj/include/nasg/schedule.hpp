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
#include <string_view>

namespace nasg {

enum class ScheduleKind {
  kConstant,
  kTheoremUnified,      // convex components, any permutation
  kTheoremVariance,     // generalized bounded variance (Theta, sigma)
  kTheoremRandomized,   // convex components, RR / SS
  kInitialCondition,    // start within E / sqrt(n) of a minimizer
};

/// Epoch step sizes eta_t. Theoretical kinds use
///
///   eta_t = k * alpha^t / (L * T),  alpha = 1 + 1/T,
///
/// with k = 1 / (e * alpha * c) and c = cbrt(12) (unified, randomized),
/// cbrt(2 (6 Theta + 7)) (variance) or n^(1/4) cbrt(12) (initial condition).
/// Optimizers apply eta_t / n per component inside the epoch.
class Schedule {
 public:
  static Schedule constant(double lr);
  static Schedule theorem_unified(int horizon, double smoothness);
  static Schedule theorem_variance(int horizon, double smoothness, double theta);
  static Schedule theorem_randomized(int horizon, double smoothness);
  static Schedule initial_condition(int horizon, double smoothness, std::size_t n);

  /// eta_t for 1 <= t (<= T for theoretical kinds).
  double step_size(int epoch) const;

  ScheduleKind kind() const noexcept { return kind_; }
  bool is_theoretical() const noexcept { return kind_ != ScheduleKind::kConstant; }
  int horizon() const noexcept { return horizon_; }
  double smoothness() const noexcept { return smoothness_; }
  double alpha() const noexcept { return alpha_; }
  double k() const noexcept { return k_; }
  double theta() const noexcept { return theta_; }
  double learning_rate() const noexcept { return lr_; }

 private:
  Schedule() = default;
  static Schedule theoretical(ScheduleKind kind, int horizon, double smoothness, double root);

  ScheduleKind kind_ = ScheduleKind::kConstant;
  int horizon_ = 0;
  double smoothness_ = 0.0;
  double alpha_ = 1.0;
  double k_ = 0.0;
  double theta_ = 0.0;
  double lr_ = 0.0;
};

std::string_view to_string(ScheduleKind kind);
/// Accepts "constant", "thm1", "thm2", "thm3", "init-cond".
ScheduleKind parse_schedule_kind(std::string_view name);

}  // namespace nasg
