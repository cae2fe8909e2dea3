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

#include "nasg/synthetic.hpp"

#include "nasg/error.hpp"
#include "nasg/rng.hpp"

namespace nasg {

QuadraticProblem make_quadratic_from_centers(std::size_t d, std::vector<double> centers) {
  auto objective = std::make_shared<const QuadraticObjective>(d, std::move(centers));
  QuadraticProblem p;
  p.minimizer = *objective->closed_form_minimizer();
  p.optimal_value = objective->full_value(p.minimizer);
  const std::size_t n = objective->num_components();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += squared_distance(p.minimizer, objective->center(i));
  p.variance_at_optimum = s / static_cast<double>(n);
  p.objective = std::move(objective);
  return p;
}

QuadraticProblem make_quadratic(std::size_t n, std::size_t d, std::uint64_t seed, double spread) {
  if (n == 0 || d == 0) throw InvalidArgument("quadratic problem needs n >= 1 and d >= 1");
  if (!(spread >= 0.0)) throw InvalidArgument("spread must be non-negative");
  Rng rng(seed);
  std::vector<double> location(d);
  for (double& m : location) m = 2.0 * rng.uniform() - 1.0;
  std::vector<double> centers(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) centers[i * d + j] = location[j] + spread * rng.normal();
  }
  return make_quadratic_from_centers(d, std::move(centers));
}

}  // namespace nasg
