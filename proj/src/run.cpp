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

#include "nasg/run.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "nasg/diagnostics.hpp"
#include "nasg/error.hpp"
#include "nasg/rng.hpp"

namespace nasg {

RunResult run(const Objective& objective, const RunSpec& spec) {
  if (spec.epochs < 1) throw InvalidArgument("number of epochs must be >= 1");
  if (spec.batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  if (spec.schedule.is_theoretical() && spec.schedule.horizon() < spec.epochs) {
    throw InvalidArgument("schedule horizon is shorter than the number of epochs");
  }
  const std::size_t n = objective.num_components();
  const std::size_t batch = std::min(spec.batch_size, n);

  RunResult result;
  result.x0 = spec.x0.empty() ? Point(objective.dim(), 0.0) : spec.x0;
  if (result.x0.size() != objective.dim()) throw InvalidArgument("x0 has the wrong dimension");
  result.y0 = spec.options.initial_y.empty() ? result.x0 : spec.options.initial_y;

  auto optimizer = make_optimizer(spec.method, result.x0, spec.options);
  const bool want_inner =
      optimizer->has_inner_sweep() && (spec.trace.dispersion || spec.trace.keep_inner);
  InnerIterates inner;
  Point grad(objective.dim());

  result.trace.reserve(static_cast<std::size_t>(spec.epochs));
  for (int t = 1; t <= spec.epochs; ++t) {
    EpochRecord rec;
    rec.epoch = t;
    rec.step_size = spec.schedule.step_size(t);
    Permutation order = generate_permutation(spec.scheme, n, t);
    const auto started = std::chrono::steady_clock::now();
    try {
      optimizer->run_epoch(objective, order, rec.step_size, batch,
                           hash_seed(spec.scheme.base_seed, static_cast<std::uint64_t>(t)),
                           want_inner ? &inner : nullptr);
    } catch (const DivergenceError& e) {
      result.diverged = true;
      result.error = e.what();
      break;
    }
    rec.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    const Point& x = optimizer->iterate();
    rec.value = objective.full_value(x);
    objective.full_gradient(x, grad);
    rec.grad_sq_norm = squared_norm(grad);
    if (!std::isfinite(rec.value) || !std::isfinite(rec.grad_sq_norm)) {
      result.diverged = true;
      result.error = "non-finite iterate in epoch " + std::to_string(t) +
                     ": objective or gradient overflowed";
      break;
    }
    if (spec.trace.accuracy) rec.accuracy = objective.accuracy(x);
    if (want_inner && spec.trace.dispersion) {
      const DispersionRecord d = epoch_dispersion(inner);
      rec.dispersion_k = d.k;
      rec.dispersion_i = d.i;
    }
    if (spec.trace.keep_iterates) {
      rec.x_tilde = x;
      rec.y_tilde = optimizer->secondary();
    }
    if (want_inner && spec.trace.keep_inner) {
      rec.inner = inner;
      rec.order = std::move(order);
    }
    result.trace.push_back(std::move(rec));
  }
  result.final_iterate = optimizer->iterate();
  return result;
}

}  // namespace nasg
