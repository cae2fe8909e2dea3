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

#include "nasg/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nasg/error.hpp"
#include "nasg/rng.hpp"

namespace nasg {

namespace {

void check_batch(std::size_t batch_size) {
  if (batch_size == 0) throw InvalidArgument("batch size must be >= 1");
}

void check_order(const Objective& objective, std::span<const std::size_t> order) {
  if (order.size() != objective.num_components()) {
    throw InvalidArgument("permutation length does not match the component count");
  }
}

void check_dim(const Objective& objective, const Point& p) {
  if (p.size() != objective.dim()) throw InvalidArgument("iterate has the wrong dimension");
}

void ensure_finite(std::span<const double> p, int epoch) {
  if (!all_finite(p)) throw DivergenceError(epoch);
}

// Walks `order` in blocks. For each block, `grad` receives the sum of the
// block's component gradients at `at`, then `step(block_size)` updates the
// caller's iterate.
template <class Step>
void sweep(const Objective& objective, std::span<const std::size_t> order,
           std::size_t batch_size, const Point& at, Point& grad, Step&& step) {
  const std::size_t n = order.size();
  for (std::size_t begin = 0; begin < n; begin += batch_size) {
    const std::size_t end = std::min(n, begin + batch_size);
    fill_zero(grad);
    for (std::size_t j = begin; j < end; ++j) {
      objective.add_component_gradient(at, order[j], 1.0, grad);
    }
    step(end - begin);
  }
}

void record(InnerIterates* inner, const Point& p) {
  if (inner) inner->push_back(p);
}

}  // namespace

NasgState NasgState::start(Point x0, std::optional<Point> y0) {
  NasgState s;
  s.y_curr = y0 ? std::move(*y0) : x0;
  if (s.y_curr.size() != x0.size()) throw InvalidArgument("y~_0 and x~_0 differ in dimension");
  s.x_prev = x0;
  s.x_curr = std::move(x0);
  return s;
}

void nasg_epoch(NasgState& state, const Objective& objective, std::span<const std::size_t> order,
                double eta, std::size_t batch_size, InnerIterates* inner) {
  check_batch(batch_size);
  check_order(objective, order);
  check_dim(objective, state.y_curr);
  const int t = state.epoch + 1;
  const double per_component = eta / static_cast<double>(objective.num_components());

  Point y = state.y_curr;
  Point grad(y.size());
  if (inner) inner->clear();
  record(inner, y);
  sweep(objective, order, batch_size, y, grad, [&](std::size_t) {
    for (std::size_t k = 0; k < y.size(); ++k) y[k] -= per_component * grad[k];
    ensure_finite(y, t);
    record(inner, y);
  });

  const double gamma = nesterov_coefficient(t);
  state.x_prev = std::move(state.x_curr);
  state.x_curr = std::move(y);
  for (std::size_t k = 0; k < state.y_curr.size(); ++k) {
    state.y_curr[k] = state.x_curr[k] + gamma * (state.x_curr[k] - state.x_prev[k]);
  }
  ensure_finite(state.y_curr, t);
  state.epoch = t;
}

void nasg_pi_epoch(NasgState& state, const Objective& objective,
                   std::span<const std::size_t> order, double eta, std::size_t batch_size,
                   InnerIterates* inner) {
  check_batch(batch_size);
  check_order(objective, order);
  check_dim(objective, state.y_curr);
  const int t = state.epoch + 1;
  const double per_component = eta / static_cast<double>(objective.num_components());
  const double gamma = nesterov_coefficient(t);

  Point x = state.x_curr;
  Point x_next(x.size());
  Point y = state.y_curr;
  Point grad(y.size());
  if (inner) inner->clear();
  record(inner, y);
  sweep(objective, order, batch_size, y, grad, [&](std::size_t) {
    for (std::size_t k = 0; k < y.size(); ++k) x_next[k] = y[k] - per_component * grad[k];
    for (std::size_t k = 0; k < y.size(); ++k) y[k] = x_next[k] + gamma * (x_next[k] - x[k]);
    x.swap(x_next);
    ensure_finite(y, t);
    record(inner, y);
  });

  state.x_prev = std::move(state.x_curr);
  state.x_curr = std::move(x);
  state.y_curr = std::move(y);
  state.epoch = t;
}

void nag_step(NasgState& state, const Objective& objective, double alpha) {
  check_dim(objective, state.y_curr);
  const int t = state.epoch + 1;
  const Point grad = objective.full_gradient(state.y_curr);
  Point x(grad.size());
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = state.y_curr[k] - alpha * grad[k];
  ensure_finite(x, t);
  const double gamma = nesterov_coefficient(t);
  state.x_prev = std::move(state.x_curr);
  state.x_curr = std::move(x);
  for (std::size_t k = 0; k < state.y_curr.size(); ++k) {
    state.y_curr[k] = state.x_curr[k] + gamma * (state.x_curr[k] - state.x_prev[k]);
  }
  ensure_finite(state.y_curr, t);
  state.epoch = t;
}

void sgd_epoch(SgdState& state, const Objective& objective, std::span<const std::size_t> order,
               double eta, std::size_t batch_size, InnerIterates* inner) {
  check_batch(batch_size);
  check_order(objective, order);
  check_dim(objective, state.w);
  const int t = state.epoch + 1;
  Point& w = state.w;
  Point grad(w.size());
  if (inner) inner->clear();
  record(inner, w);
  sweep(objective, order, batch_size, w, grad, [&](std::size_t b) {
    const double inv = 1.0 / static_cast<double>(b);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= eta * (grad[k] * inv);
    ensure_finite(w, t);
    record(inner, w);
  });
  state.epoch = t;
}

void sgd_epoch_with_replacement(SgdState& state, const Objective& objective, std::uint64_t seed,
                                double eta, std::size_t batch_size, InnerIterates* inner) {
  check_batch(batch_size);
  const std::size_t n = objective.num_components();
  Rng rng(seed);
  std::vector<std::size_t> draws(n);
  for (auto& i : draws) i = static_cast<std::size_t>(rng.below(n));
  sgd_epoch(state, objective, draws, eta, batch_size, inner);
}

MomentumState MomentumState::start(Point x0, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw InvalidArgument("momentum must be in [0, 1)");
  MomentumState s;
  s.velocity.assign(x0.size(), 0.0);
  s.w = std::move(x0);
  s.beta = beta;
  return s;
}

void sgdm_epoch(MomentumState& state, const Objective& objective,
                std::span<const std::size_t> order, double eta, std::size_t batch_size,
                InnerIterates* inner) {
  check_batch(batch_size);
  check_order(objective, order);
  check_dim(objective, state.w);
  const int t = state.epoch + 1;
  Point& w = state.w;
  Point& m = state.velocity;
  Point grad(w.size());
  if (inner) inner->clear();
  record(inner, w);
  sweep(objective, order, batch_size, w, grad, [&](std::size_t b) {
    const double inv = 1.0 / static_cast<double>(b);
    for (std::size_t k = 0; k < w.size(); ++k) m[k] = state.beta * m[k] + grad[k] * inv;
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= eta * m[k];
    ensure_finite(w, t);
    record(inner, w);
  });
  state.epoch = t;
}

AdamState AdamState::start(Point x0, double beta1, double beta2, double epsilon) {
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw InvalidArgument("Adam betas must be in [0, 1)");
  }
  if (!(epsilon > 0.0)) throw InvalidArgument("Adam epsilon must be positive");
  AdamState s;
  s.m.assign(x0.size(), 0.0);
  s.v.assign(x0.size(), 0.0);
  s.w = std::move(x0);
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.epsilon = epsilon;
  return s;
}

void adam_epoch(AdamState& state, const Objective& objective, std::span<const std::size_t> order,
                double eta, std::size_t batch_size, InnerIterates* inner) {
  check_batch(batch_size);
  check_order(objective, order);
  check_dim(objective, state.w);
  const int t = state.epoch + 1;
  Point& w = state.w;
  Point grad(w.size());
  if (inner) inner->clear();
  record(inner, w);
  sweep(objective, order, batch_size, w, grad, [&](std::size_t b) {
    const double inv = 1.0 / static_cast<double>(b);
    ++state.step;
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double g = grad[k] * inv;
      state.m[k] = state.beta1 * state.m[k] + (1.0 - state.beta1) * g;
      state.v[k] = state.beta2 * state.v[k] + (1.0 - state.beta2) * g * g;
      const double m_hat = state.m[k] / c1;
      const double v_hat = state.v[k] / c2;
      w[k] -= eta * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
    ensure_finite(w, t);
    record(inner, w);
  });
  state.epoch = t;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kNasg: return "nasg";
    case Method::kNasgPi: return "nasg-pi";
    case Method::kNag: return "nag";
    case Method::kSgd: return "sgd";
    case Method::kSgdMomentum: return "sgdm";
    case Method::kAdam: return "adam";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  if (name == "nasg") return Method::kNasg;
  if (name == "nasg-pi") return Method::kNasgPi;
  if (name == "nag") return Method::kNag;
  if (name == "sgd") return Method::kSgd;
  if (name == "sgdm") return Method::kSgdMomentum;
  if (name == "adam") return Method::kAdam;
  throw InvalidArgument("unknown optimizer '" + std::string(name) +
                        "' (expected nasg, nasg-pi, nag, sgd, sgdm or adam)");
}

namespace {

class NesterovFamily final : public Optimizer {
 public:
  NesterovFamily(Method method, Point x0, const OptimizerOptions& options)
      : method_(method),
        state_(NasgState::start(std::move(x0), options.initial_y.empty()
                                                   ? std::nullopt
                                                   : std::optional<Point>(options.initial_y))) {}

  void run_epoch(const Objective& objective, std::span<const std::size_t> order, double eta,
                 std::size_t batch_size, std::uint64_t, InnerIterates* inner) override {
    switch (method_) {
      case Method::kNasg: nasg_epoch(state_, objective, order, eta, batch_size, inner); break;
      case Method::kNasgPi: nasg_pi_epoch(state_, objective, order, eta, batch_size, inner); break;
      default: nag_step(state_, objective, eta); break;
    }
  }

  const Point& iterate() const override { return state_.x_curr; }
  const Point& secondary() const override { return state_.y_curr; }
  Method method() const override { return method_; }
  bool has_inner_sweep() const override { return method_ != Method::kNag; }

 private:
  Method method_;
  NasgState state_;
};

class Sgd final : public Optimizer {
 public:
  Sgd(Point x0, bool with_replacement) : with_replacement_(with_replacement) {
    state_.w = std::move(x0);
  }

  void run_epoch(const Objective& objective, std::span<const std::size_t> order, double eta,
                 std::size_t batch_size, std::uint64_t sample_seed, InnerIterates* inner) override {
    if (with_replacement_) {
      sgd_epoch_with_replacement(state_, objective, sample_seed, eta, batch_size, inner);
    } else {
      sgd_epoch(state_, objective, order, eta, batch_size, inner);
    }
  }

  const Point& iterate() const override { return state_.w; }
  Method method() const override { return Method::kSgd; }

 private:
  SgdState state_;
  bool with_replacement_;
};

class SgdMomentum final : public Optimizer {
 public:
  SgdMomentum(Point x0, double beta) : state_(MomentumState::start(std::move(x0), beta)) {}

  void run_epoch(const Objective& objective, std::span<const std::size_t> order, double eta,
                 std::size_t batch_size, std::uint64_t, InnerIterates* inner) override {
    sgdm_epoch(state_, objective, order, eta, batch_size, inner);
  }

  const Point& iterate() const override { return state_.w; }
  Method method() const override { return Method::kSgdMomentum; }

 private:
  MomentumState state_;
};

class Adam final : public Optimizer {
 public:
  Adam(Point x0, const OptimizerOptions& o)
      : state_(AdamState::start(std::move(x0), o.beta1, o.beta2, o.epsilon)) {}

  void run_epoch(const Objective& objective, std::span<const std::size_t> order, double eta,
                 std::size_t batch_size, std::uint64_t, InnerIterates* inner) override {
    adam_epoch(state_, objective, order, eta, batch_size, inner);
  }

  const Point& iterate() const override { return state_.w; }
  Method method() const override { return Method::kAdam; }

 private:
  AdamState state_;
};

}  // namespace

std::unique_ptr<Optimizer> make_optimizer(Method method, Point x0,
                                          const OptimizerOptions& options) {
  switch (method) {
    case Method::kNasg:
    case Method::kNasgPi:
    case Method::kNag:
      return std::make_unique<NesterovFamily>(method, std::move(x0), options);
    case Method::kSgd:
      return std::make_unique<Sgd>(std::move(x0), options.with_replacement);
    case Method::kSgdMomentum:
      return std::make_unique<SgdMomentum>(std::move(x0), options.momentum);
    case Method::kAdam:
      return std::make_unique<Adam>(std::move(x0), options);
  }
  throw InvalidArgument("unknown optimizer");
}

}  // namespace nasg
