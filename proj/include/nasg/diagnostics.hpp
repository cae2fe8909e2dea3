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
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "nasg/linalg.hpp"
#include "nasg/objective.hpp"

namespace nasg {

struct RunResult;

// ---------------------------------------------------------------------------
// Within-epoch dispersion

/// K_t = (1/m) sum_{i=1..m} ||y_i - y_0||^2 and
/// I_t = (1/m) sum_{i=1..m} ||y_m - y_i||^2 over inner iterates y_0..y_m.
struct DispersionRecord {
  double k = 0.0;
  double i = 0.0;
};

/// Requires at least two iterates.
DispersionRecord epoch_dispersion(std::span<const Point> inner);

struct LemmaCheck {
  bool satisfied = false;
  double lhs = 0.0;     // K_t
  double rhs = 0.0;     // 8 eta^2 (3 L gap + sigma_*^2)
  double margin = 0.0;  // rhs - lhs
};

/// K_t <= 8 eta_t^2 (3 L (F(x~_t) - F*) + sigma_*^2), valid when
/// eta_t <= 1/(2L). Throws PreconditionError otherwise.
LemmaCheck check_lemma_kt(double k_t, double eta, double smoothness, double gap,
                          double sigma_star_sq);

// ---------------------------------------------------------------------------
// Convergence bounds

enum class Theorem {
  kUnified,                     // convex components, any permutation
  kVariance,                    // generalized bounded variance
  kRandomized,                  // convex components, RR / SS, in expectation
  kInitialConditionUnified,     // ||x~_0 - x*|| <= E / sqrt(n), any permutation
  kInitialConditionRandomized,  // same, RR / SS
};

std::string_view to_string(Theorem theorem);
Theorem parse_theorem(std::string_view name);

/// Problem constants for the bounds. Each theorem reads only what it needs
/// and throws InvalidArgument when one of those is absent.
struct BoundConstants {
  double smoothness = 0.0;                   // L
  std::optional<double> sigma_star_sq;       // sigma_*^2
  std::optional<double> delta;               // ||x~_0 - x*||^2
  std::optional<double> theta;               // Theta
  std::optional<double> sigma_sq;            // sigma^2
  std::optional<std::size_t> n;              // component count
  std::optional<double> e_sq;                // E^2 (initial-condition radius)
};

/// Right-hand side of the last-iterate bound for horizon T >= 2.
double theorem_bound(Theorem theorem, const BoundConstants& constants, int horizon);

struct BoundRow {
  int horizon = 0;
  double gap = 0.0;
  double bound = 0.0;
  bool satisfied = false;
};

struct BoundReport {
  Theorem theorem = Theorem::kUnified;
  BoundConstants constants;
  std::vector<BoundRow> rows;

  void add(int horizon, double gap);
  bool all_satisfied() const;
};

/// Epochs and individual gradient evaluations (n T) sufficient for the
/// bound to fall below epsilon, splitting epsilon evenly across its two terms.
struct ComplexityEstimate {
  long epochs = 0;
  double gradient_evaluations = 0.0;
};

ComplexityEstimate required_epochs(Theorem theorem, const BoundConstants& constants,
                                   double epsilon);

// ---------------------------------------------------------------------------
// Empirical rates

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares line through (log T, log gap). Needs >= 3 points with
/// distinct T > 0 and gap > 0.
RateFit fit_rate(std::span<const std::pair<double, double>> points);

// ---------------------------------------------------------------------------
// Auxiliary-sequence identities for NASG traces

/// Largest relative residuals over all epochs of
///   x~_t = theta^(t-1) v^(t) + (1 - theta^(t-1)) x~_{t-1}
///   y~_t = theta^(t) v^(t) + (1 - theta^(t)) x~_t
///   v^(t+1) = v^(t) - (eta_{t+1} / theta^(t)) (1/n) sum_j grad f(y_{j-1}; pi(j))
/// with theta^(t) = 2/(t+2), v^(t) = ((t+1)/2) x~_t - ((t-1)/2) x~_{t-1},
/// theta^(0) = 1, v^(0) = x~_0. The v-update needs inner iterates; it is
/// absent otherwise.
struct IdentityResiduals {
  double x_reconstruction = 0.0;
  double y_reconstruction = 0.0;
  std::optional<double> v_update;
};

/// Requires a run with TraceOptions::keep_iterates (and keep_inner for the
/// v-update) and y~_0 = x~_0.
IdentityResiduals auxiliary_identity_residuals(const RunResult& run, const Objective& objective,
                                               std::size_t batch_size = 1);

/// ||a - b|| / max(||a||, ||b||), 0 when both vanish.
double relative_difference(std::span<const double> a, std::span<const double> b);

}  // namespace nasg
