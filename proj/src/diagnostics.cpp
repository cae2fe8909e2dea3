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

#include "nasg/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nasg/error.hpp"
#include "nasg/run.hpp"

namespace nasg {

DispersionRecord epoch_dispersion(std::span<const Point> inner) {
  if (inner.size() < 2) throw InvalidArgument("dispersion needs at least two inner iterates");
  const std::size_t m = inner.size() - 1;
  const Point& first = inner.front();
  const Point& last = inner.back();
  DispersionRecord r;
  for (std::size_t i = 1; i <= m; ++i) {
    r.k += squared_distance(inner[i], first);
    r.i += squared_distance(last, inner[i]);
  }
  r.k /= static_cast<double>(m);
  r.i /= static_cast<double>(m);
  return r;
}

LemmaCheck check_lemma_kt(double k_t, double eta, double smoothness, double gap,
                          double sigma_star_sq) {
  if (!(eta <= 0.5 / smoothness)) {
    throw PreconditionError("lemma hypothesis eta <= 1/(2L) violated");
  }
  LemmaCheck c;
  c.lhs = k_t;
  c.rhs = 8.0 * eta * eta * (3.0 * smoothness * gap + sigma_star_sq);
  c.margin = c.rhs - c.lhs;
  c.satisfied = c.lhs <= c.rhs;
  return c;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Theorem theorem) {
  switch (theorem) {
    case Theorem::kUnified: return "unified";
    case Theorem::kVariance: return "variance";
    case Theorem::kRandomized: return "randomized";
    case Theorem::kInitialConditionUnified: return "init-cond-unified";
    case Theorem::kInitialConditionRandomized: return "init-cond-randomized";
  }
  return "?";
}

Theorem parse_theorem(std::string_view name) {
  for (Theorem t : {Theorem::kUnified, Theorem::kVariance, Theorem::kRandomized,
                    Theorem::kInitialConditionUnified, Theorem::kInitialConditionRandomized}) {
    if (name == to_string(t)) return t;
  }
  throw InvalidArgument("unknown theorem '" + std::string(name) + "'");
}

namespace {

double need(const std::optional<double>& v, const char* what) {
  if (!v) throw InvalidArgument(std::string("bound constant ") + what + " is missing");
  if (!(*v >= 0.0) || !std::isfinite(*v)) {
    throw InvalidArgument(std::string("bound constant ") + what + " must be finite and >= 0");
  }
  return *v;
}

double need_n(const std::optional<std::size_t>& n) {
  if (!n || *n == 0) throw InvalidArgument("bound constant n is missing");
  return static_cast<double>(*n);
}

struct BoundTerms {
  double variance;  // coefficient of 1/T from the noise term
  double distance;  // coefficient of 1/T from the initial-distance term
};

// Both terms of every bound scale as 1/T; return their numerators.
BoundTerms bound_terms(Theorem theorem, const BoundConstants& c) {
  const double L = c.smoothness;
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("bound constant L must be positive");
  const double e = std::numbers::e;
  const double cbrt12 = std::cbrt(12.0);
  switch (theorem) {
    case Theorem::kUnified:
      return {4.0 * need(c.sigma_star_sq, "sigma_*^2") / (9.0 * L),
              2.0 * L * e * cbrt12 * need(c.delta, "Delta")};
    case Theorem::kVariance: {
      const double q = 6.0 * need(c.theta, "Theta") + 7.0;
      return {8.0 * need(c.sigma_sq, "sigma^2") / (3.0 * q * L),
              2.0 * L * e * std::cbrt(2.0 * q) * need(c.delta, "Delta")};
    }
    case Theorem::kRandomized:
      return {8.0 * need(c.sigma_star_sq, "sigma_*^2") / (27.0 * need_n(c.n) * L),
              2.0 * L * e * cbrt12 * need(c.delta, "Delta")};
    case Theorem::kInitialConditionUnified: {
      const double n34 = std::pow(need_n(c.n), 0.75);
      return {4.0 * need(c.sigma_star_sq, "sigma_*^2") / (9.0 * L * n34),
              2.0 * L * need(c.e_sq, "E^2") * e * cbrt12 / n34};
    }
    case Theorem::kInitialConditionRandomized: {
      const double n = need_n(c.n);
      return {8.0 * need(c.sigma_star_sq, "sigma_*^2") / (27.0 * n * L),
              2.0 * L * need(c.e_sq, "E^2") * e * cbrt12 / n};
    }
  }
  throw InvalidArgument("unknown theorem");
}

}  // namespace

double theorem_bound(Theorem theorem, const BoundConstants& constants, int horizon) {
  if (horizon < 2) throw PreconditionError("theory requires T >= 2");
  const BoundTerms terms = bound_terms(theorem, constants);
  const double T = static_cast<double>(horizon);
  return terms.variance / T + terms.distance / T;
}

void BoundReport::add(int horizon, double gap) {
  BoundRow row;
  row.horizon = horizon;
  row.gap = gap;
  row.bound = theorem_bound(theorem, constants, horizon);
  row.satisfied = gap <= row.bound;
  rows.push_back(row);
}

bool BoundReport::all_satisfied() const {
  return std::all_of(rows.begin(), rows.end(), [](const BoundRow& r) { return r.satisfied; });
}

ComplexityEstimate required_epochs(Theorem theorem, const BoundConstants& constants,
                                   double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidArgument("target accuracy must be positive");
  const double n = need_n(constants.n);
  const BoundTerms terms = bound_terms(theorem, constants);
  const double t = std::max(2.0 * terms.variance / epsilon, 2.0 * terms.distance / epsilon);
  ComplexityEstimate est;
  est.epochs = std::max(2L, static_cast<long>(std::ceil(t)));
  est.gradient_evaluations = n * static_cast<double>(est.epochs);
  return est;
}

// ---------------------------------------------------------------------------

RateFit fit_rate(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw InvalidArgument("rate fit needs at least 3 points");
  double sx = 0.0;
  double sy = 0.0;
  for (const auto& [T, gap] : points) {
    if (!(T > 0.0)) throw InvalidArgument("rate fit needs positive horizons");
    if (!(gap > 0.0)) {
      throw InvalidArgument("rate fit needs positive gaps (gap below float resolution?)");
    }
    sx += std::log(T);
    sy += std::log(gap);
  }
  const double m = static_cast<double>(points.size());
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [T, gap] : points) {
    const double dx = std::log(T) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(gap) - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("rate fit needs distinct horizons");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

// ---------------------------------------------------------------------------

double relative_difference(std::span<const double> a, std::span<const double> b) {
  const double scale = std::sqrt(std::max(squared_norm(a), squared_norm(b)));
  if (scale == 0.0) return 0.0;
  return std::sqrt(squared_distance(a, b)) / scale;
}

namespace {

double theta_at(int t) { return t == 0 ? 1.0 : 2.0 / (t + 2.0); }

// v^(t) from x~_t and x~_{t-1}; v^(0) = x~_0.
Point v_at(int t, const Point& x_t, const Point& x_prev) {
  Point v(x_t.size());
  const double a = (t + 1) / 2.0;
  const double b = (t - 1) / 2.0;
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a * x_t[k] - b * x_prev[k];
  return v;
}

}  // namespace

IdentityResiduals auxiliary_identity_residuals(const RunResult& run, const Objective& objective,
                                               std::size_t batch_size) {
  if (batch_size == 0) throw InvalidArgument("batch size must be >= 1");
  if (run.trace.empty()) throw InvalidArgument("identity check needs a non-empty trace");
  if (relative_difference(run.x0, run.y0) != 0.0) {
    throw PreconditionError("auxiliary identities assume y~_0 = x~_0");
  }
  const std::size_t n = objective.num_components();
  IdentityResiduals res;
  bool have_inner = true;

  // xs[t] = x~_t, vs[t] = v^(t)
  std::vector<const Point*> xs{&run.x0};
  std::vector<Point> vs{run.x0};
  for (const EpochRecord& rec : run.trace) {
    if (rec.x_tilde.empty() || rec.y_tilde.empty()) {
      throw InvalidArgument("identity check needs a trace recorded with keep_iterates");
    }
    xs.push_back(&rec.x_tilde);
    const int t = rec.epoch;
    vs.push_back(v_at(t, rec.x_tilde, *xs[t - 1]));
    if (rec.inner.empty() || rec.order.size() != n) have_inner = false;
  }

  Point recon(run.x0.size());
  for (const EpochRecord& rec : run.trace) {
    const int t = rec.epoch;
    const Point& v = vs[t];
    const double th_prev = theta_at(t - 1);
    const double th = theta_at(t);
    for (std::size_t k = 0; k < recon.size(); ++k) {
      recon[k] = th_prev * v[k] + (1.0 - th_prev) * (*xs[t - 1])[k];
    }
    res.x_reconstruction = std::max(res.x_reconstruction, relative_difference(rec.x_tilde, recon));
    for (std::size_t k = 0; k < recon.size(); ++k) {
      recon[k] = th * v[k] + (1.0 - th) * rec.x_tilde[k];
    }
    res.y_reconstruction = std::max(res.y_reconstruction, relative_difference(rec.y_tilde, recon));
  }

  if (have_inner) {
    double worst = 0.0;
    Point sum(run.x0.size());
    for (const EpochRecord& rec : run.trace) {
      // Epoch t = s + 1 moves v^(s) to v^(s+1).
      const int s = rec.epoch - 1;
      fill_zero(sum);
      for (std::size_t begin = 0, step = 0; begin < n; begin += batch_size, ++step) {
        const std::size_t end = std::min(n, begin + batch_size);
        for (std::size_t j = begin; j < end; ++j) {
          objective.add_component_gradient(rec.inner.at(step), rec.order[j], 1.0, sum);
        }
      }
      const double coef = rec.step_size / theta_at(s) / static_cast<double>(n);
      for (std::size_t k = 0; k < recon.size(); ++k) recon[k] = vs[s][k] - coef * sum[k];
      worst = std::max(worst, relative_difference(vs[s + 1], recon));
    }
    res.v_update = worst;
  }
  return res;
}

}  // namespace nasg
