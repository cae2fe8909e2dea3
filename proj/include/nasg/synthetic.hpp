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

#include <cstdint>
#include <memory>
#include <vector>

#include "nasg/objective.hpp"

namespace nasg {

/// A quadratic finite-sum problem together with its exact solution.
///
/// For f(w; i) = 0.5 ||w - c_i||^2 the minimizer is the mean center c_bar,
/// sigma_*^2 = (1/n) sum ||c_bar - c_i||^2, and the generalized variance
/// condition holds with Theta = 0, sigma^2 = sigma_*^2.
struct QuadraticProblem {
  std::shared_ptr<const QuadraticObjective> objective;
  Point minimizer;
  double optimal_value = 0.0;
  double variance_at_optimum = 0.0;
};

/// Centers c_ij = m_j + spread * z_ij with m_j ~ U[-1, 1) and z_ij standard
/// normal, all drawn from Rng(seed). Requires n >= 1, d >= 1, spread >= 0.
QuadraticProblem make_quadratic(std::size_t n, std::size_t d, std::uint64_t seed, double spread);

/// Same, from explicit centers (n rows of d values, row-major).
QuadraticProblem make_quadratic_from_centers(std::size_t d, std::vector<double> centers);

}  // namespace nasg
