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

#include "nasg/schedule.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nasg/error.hpp"

namespace nasg {

Schedule Schedule::constant(double lr) {
  if (!(lr > 0.0) || !std::isfinite(lr)) throw InvalidArgument("learning rate must be positive");
  Schedule s;
  s.kind_ = ScheduleKind::kConstant;
  s.lr_ = lr;
  return s;
}

Schedule Schedule::theoretical(ScheduleKind kind, int horizon, double smoothness, double root) {
  if (horizon < 2) throw PreconditionError("theory requires T >= 2");
  if (!(smoothness > 0.0) || !std::isfinite(smoothness)) {
    throw InvalidArgument("smoothness bound L must be positive");
  }
  Schedule s;
  s.kind_ = kind;
  s.horizon_ = horizon;
  s.smoothness_ = smoothness;
  s.alpha_ = 1.0 + 1.0 / horizon;
  s.k_ = 1.0 / (std::numbers::e * s.alpha_ * root);
  // eta_T = alpha^(T-1) / (e * root * L * T) <= 1 / (root * L * T); root >= cbrt(12) > 2.
  const double last = s.step_size(horizon);
  if (!(last <= 0.5 / smoothness)) {
    throw PreconditionError("theoretical schedule violates eta_t <= 1/(2L)");
  }
  return s;
}

Schedule Schedule::theorem_unified(int horizon, double smoothness) {
  return theoretical(ScheduleKind::kTheoremUnified, horizon, smoothness, std::cbrt(12.0));
}

Schedule Schedule::theorem_randomized(int horizon, double smoothness) {
  return theoretical(ScheduleKind::kTheoremRandomized, horizon, smoothness, std::cbrt(12.0));
}

Schedule Schedule::theorem_variance(int horizon, double smoothness, double theta) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw InvalidArgument("Theta must be >= 0");
  Schedule s = theoretical(ScheduleKind::kTheoremVariance, horizon, smoothness,
                           std::cbrt(2.0 * (6.0 * theta + 7.0)));
  s.theta_ = theta;
  return s;
}

Schedule Schedule::initial_condition(int horizon, double smoothness, std::size_t n) {
  if (n == 0) throw InvalidArgument("component count must be >= 1");
  return theoretical(ScheduleKind::kInitialCondition, horizon, smoothness,
                     std::pow(static_cast<double>(n), 0.25) * std::cbrt(12.0));
}

double Schedule::step_size(int epoch) const {
  if (epoch < 1) throw InvalidArgument("epoch index must be >= 1");
  if (kind_ == ScheduleKind::kConstant) return lr_;
  if (epoch > horizon_) {
    throw InvalidArgument("epoch " + std::to_string(epoch) + " beyond schedule horizon " +
                          std::to_string(horizon_));
  }
  return k_ * std::pow(alpha_, epoch) / (smoothness_ * horizon_);
}

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kConstant: return "constant";
    case ScheduleKind::kTheoremUnified: return "thm1";
    case ScheduleKind::kTheoremVariance: return "thm2";
    case ScheduleKind::kTheoremRandomized: return "thm3";
    case ScheduleKind::kInitialCondition: return "init-cond";
  }
  return "?";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "constant") return ScheduleKind::kConstant;
  if (name == "thm1") return ScheduleKind::kTheoremUnified;
  if (name == "thm2") return ScheduleKind::kTheoremVariance;
  if (name == "thm3") return ScheduleKind::kTheoremRandomized;
  if (name == "init-cond") return ScheduleKind::kInitialCondition;
  throw InvalidArgument("unknown schedule '" + std::string(name) +
                        "' (expected constant, thm1, thm2, thm3 or init-cond)");
}

}  // namespace nasg
