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
#include <optional>
#include <string>
#include <vector>

#include "nasg/objective.hpp"
#include "nasg/optimizers.hpp"
#include "nasg/schedule.hpp"
#include "nasg/shuffling.hpp"

namespace nasg {

struct TraceOptions {
  /// K_t and I_t from each epoch's inner iterates.
  bool dispersion = false;
  /// Keep x~_t and y~_t in every record.
  bool keep_iterates = false;
  /// Keep every epoch's inner iterates and permutation (memory: T * n * d).
  bool keep_inner = false;
  bool accuracy = false;
};

/// One row of the per-epoch trace.
struct EpochRecord {
  int epoch = 0;
  double value = 0.0;         // F(x~_t)
  double grad_sq_norm = 0.0;  // ||grad F(x~_t)||^2
  double step_size = 0.0;     // eta_t
  std::optional<double> dispersion_k;
  std::optional<double> dispersion_i;
  std::optional<double> accuracy;
  double wall_seconds = 0.0;  // epoch compute time, excluding evaluation

  Point x_tilde;
  Point y_tilde;
  InnerIterates inner;
  Permutation order;
};

struct RunSpec {
  Method method = Method::kNasg;
  ShufflingScheme scheme;
  Schedule schedule = Schedule::constant(0.1);
  int epochs = 1;
  std::size_t batch_size = 1;
  OptimizerOptions options;
  /// Empty means the origin.
  Point x0;
  TraceOptions trace;
};

struct RunResult {
  std::vector<EpochRecord> trace;
  Point x0;
  Point y0;
  Point final_iterate;
  bool diverged = false;
  std::string error;
};

/// Runs `spec.epochs` epochs and evaluates the last iterate after each.
/// Deterministic in all arguments. Divergence is reported through
/// `RunResult::diverged` with the trace of the completed epochs; invalid
/// arguments throw.
RunResult run(const Objective& objective, const RunSpec& spec);

}  // namespace nasg
