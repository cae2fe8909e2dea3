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
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nasg/linalg.hpp"
#include "nasg/objective.hpp"

namespace nasg {

/// Inner iterates of one epoch: the start point followed by the iterate
/// after every minibatch step (n + 1 points when batch_size == 1).
using InnerIterates = std::vector<Point>;

// Every epoch routine below walks `order` in contiguous blocks of
// `batch_size`. Gradients inside a block are evaluated at the same inner
// iterate. NASG and NASG-PI scale the block sum by eta/n (the per-component
// step), the baselines use eta times the block mean. A non-finite iterate
// throws DivergenceError naming the epoch.

/// x_prev = x~_{t-1}, x_curr = x~_t, y_curr = y~_t after `epoch` epochs.
struct NasgState {
  Point x_prev;
  Point x_curr;
  Point y_curr;
  int epoch = 0;

  /// x~_0 = x0 and y~_0 = y0 (defaults to x0).
  static NasgState start(Point x0, std::optional<Point> y0 = std::nullopt);
};

/// gamma_t = (t - 1) / (t + 2)
inline double nesterov_coefficient(int t) {
  return static_cast<double>(t - 1) / static_cast<double>(t + 2);
}

/// One NASG epoch: inner shuffled sweep from y~_{t-1}, x~_t = y_n, then
/// y~_t = x~_t + gamma_t (x~_t - x~_{t-1}).
void nasg_epoch(NasgState& state, const Objective& objective, std::span<const std::size_t> order,
                double eta, std::size_t batch_size, InnerIterates* inner = nullptr);

/// One NASG-PI epoch: momentum gamma_t between consecutive inner x iterates.
/// Inner iterates recorded are the y sequence.
void nasg_pi_epoch(NasgState& state, const Objective& objective,
                   std::span<const std::size_t> order, double eta, std::size_t batch_size,
                   InnerIterates* inner = nullptr);

/// x^(t) = y^(t-1) - alpha grad F(y^(t-1)); y^(t) = x^(t) + gamma_t (x^(t) - x^(t-1)).
/// Uses the same state layout as NASG with `epoch` counting steps.
void nag_step(NasgState& state, const Objective& objective, double alpha);

struct SgdState {
  Point w;
  int epoch = 0;
};

void sgd_epoch(SgdState& state, const Objective& objective, std::span<const std::size_t> order,
               double eta, std::size_t batch_size, InnerIterates* inner = nullptr);

/// n / batch_size steps with indices drawn uniformly with replacement from
/// Rng(seed).
void sgd_epoch_with_replacement(SgdState& state, const Objective& objective, std::uint64_t seed,
                                double eta, std::size_t batch_size,
                                InnerIterates* inner = nullptr);

/// Heavy ball: m <- beta m + g, w <- w - eta m. No dampening.
struct MomentumState {
  Point w;
  Point velocity;
  double beta = 0.9;
  int epoch = 0;

  static MomentumState start(Point x0, double beta);
};

void sgdm_epoch(MomentumState& state, const Objective& objective,
                std::span<const std::size_t> order, double eta, std::size_t batch_size,
                InnerIterates* inner = nullptr);

/// Bias-corrected Adam: w <- w - eta m_hat / (sqrt(v_hat) + eps).
struct AdamState {
  Point w;
  Point m;
  Point v;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  long step = 0;
  int epoch = 0;

  static AdamState start(Point x0, double beta1 = 0.9, double beta2 = 0.999,
                         double epsilon = 1e-8);
};

void adam_epoch(AdamState& state, const Objective& objective, std::span<const std::size_t> order,
                double eta, std::size_t batch_size, InnerIterates* inner = nullptr);

// ---------------------------------------------------------------------------
// Uniform interface used by the run loop.

enum class Method { kNasg, kNasgPi, kNag, kSgd, kSgdMomentum, kAdam };

std::string_view to_string(Method method);
/// Accepts "nasg", "nasg-pi", "nag", "sgd", "sgdm", "adam".
Method parse_method(std::string_view name);

struct OptimizerOptions {
  double momentum = 0.9;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Plain SGD only: sample indices with replacement instead of shuffling.
  bool with_replacement = false;
  /// NASG / NASG-PI / NAG: y~_0 override. Empty means y~_0 = x~_0.
  Point initial_y;
};

class Optimizer {
 public:
  virtual ~Optimizer() = default;

  /// Advances one epoch. `sample_seed` feeds the with-replacement sampler.
  virtual void run_epoch(const Objective& objective, std::span<const std::size_t> order,
                         double eta, std::size_t batch_size, std::uint64_t sample_seed,
                         InnerIterates* inner) = 0;

  /// The iterate whose quality is measured: x~_t for the Nesterov methods,
  /// w for the baselines.
  virtual const Point& iterate() const = 0;
  /// y~_t for the Nesterov methods, the iterate otherwise.
  virtual const Point& secondary() const { return iterate(); }
  virtual Method method() const = 0;
  /// Whether the epoch produces an inner sweep (false for NAG).
  virtual bool has_inner_sweep() const { return true; }
};

std::unique_ptr<Optimizer> make_optimizer(Method method, Point x0,
                                          const OptimizerOptions& options = {});

}  // namespace nasg
