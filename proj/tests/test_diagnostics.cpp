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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nasg/diagnostics.hpp"
#include "nasg/error.hpp"
#include "nasg/run.hpp"
#include "nasg/synthetic.hpp"
#include "test_util.hpp"

using namespace nasg;

namespace {

BoundConstants unit_constants() {
  BoundConstants c;
  c.smoothness = 1.0;
  c.sigma_star_sq = 1.0;
  c.delta = 1.0;
  c.theta = 0.0;
  c.sigma_sq = 1.0;
  c.n = 10;
  c.e_sq = 10.0;
  return c;
}

const Theorem kAll[] = {Theorem::kUnified, Theorem::kVariance, Theorem::kRandomized,
                        Theorem::kInitialConditionUnified,
                        Theorem::kInitialConditionRandomized};

}  // namespace

TEST_CASE("epoch dispersion") {
  CHECK(epoch_dispersion(InnerIterates{{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}}).k == 0.0);
  const DispersionRecord d = epoch_dispersion(InnerIterates{{0.0}, {0.5}, {-0.25}});
  CHECK(d.k == 0.15625);
  CHECK(d.i == 0.28125);
  const DispersionRecord d2 = epoch_dispersion(InnerIterates{{0.0}, {1.0}, {-0.5}});
  CHECK(d2.k == 4.0 * d.k);
  CHECK(d2.i == 4.0 * d.i);
  CHECK_THROWS_AS(epoch_dispersion(InnerIterates{{0.0}}), InvalidArgument);
}

TEST_CASE("dispersion triangle bound on recorded traces") {
  const auto q = make_quadratic(50, 10, 7, 1.0);
  RunSpec spec;
  spec.scheme = {SchemeKind::kRandomReshuffling, 3};
  spec.schedule = Schedule::theorem_unified(16, 1.0);
  spec.epochs = 16;
  spec.trace.keep_inner = true;
  const RunResult r = run(*q.objective, spec);
  for (const auto& rec : r.trace) {
    const DispersionRecord d = epoch_dispersion(rec.inner);
    const double drift = squared_distance(rec.inner.back(), rec.inner.front());
    CHECK(d.k <= 2.0 * d.i + 2.0 * drift);
    CHECK(d.k >= 0.0);
    CHECK(d.i >= 0.0);
  }
}

TEST_CASE("lemma check") {
  const LemmaCheck zero = check_lemma_kt(0.0, 0.1, 1.0, 0.0, 0.0);
  CHECK(zero.satisfied);
  CHECK(zero.margin == 0.0);
  const LemmaCheck c = check_lemma_kt(0.01, 0.1, 1.0, 0.5, 0.2);
  CHECK(c.rhs == doctest::Approx(8.0 * 0.01 * (1.5 + 0.2)));
  CHECK(c.satisfied);
  CHECK(!check_lemma_kt(1.0, 0.1, 1.0, 0.0, 0.0).satisfied);
  try {
    check_lemma_kt(0.15625, 1.0, 1.0, 0.1, 1.0);
    FAIL("expected precondition error");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()) == "lemma hypothesis eta <= 1/(2L) violated");
  }
}

TEST_CASE("unified bound matches an extended-precision evaluation") {
  BoundConstants c;
  c.smoothness = 1.0;
  c.sigma_star_sq = 1.0;
  c.delta = 1.0;
  const long double expect =
      4.0L / 90.0L + 2.0L * std::numbers::e_v<long double> * std::cbrt(12.0L) / 10.0L;
  const double got = theorem_bound(Theorem::kUnified, c, 10);
  CHECK(std::abs(got - expect) <= 1e-12L * expect);
}

TEST_CASE("closed forms of the other bounds") {
  const long double e = std::numbers::e_v<long double>;
  BoundConstants c;
  c.smoothness = 2.0;
  c.sigma_star_sq = 3.0;
  c.delta = 0.5;
  c.theta = 1.0;
  c.sigma_sq = 4.0;
  c.n = 16;
  c.e_sq = 8.0;
  const int T = 7;
  auto close = [](double a, long double b) { return std::abs(a - b) <= 1e-12L * b; };
  CHECK(close(theorem_bound(Theorem::kVariance, c, T),
              8.0L * 4 / (3.0L * 13 * 2 * T) + 2.0L * 2 * e * std::cbrt(26.0L) * 0.5L / T));
  CHECK(close(theorem_bound(Theorem::kRandomized, c, T),
              8.0L * 3 / (27.0L * 16 * 2 * T) + 2.0L * 2 * e * std::cbrt(12.0L) * 0.5L / T));
  CHECK(close(theorem_bound(Theorem::kInitialConditionUnified, c, T),
              4.0L * 3 / (9.0L * 2 * 8 * T) + 2.0L * 2 * 8 * e * std::cbrt(12.0L) / (8.0L * T)));
  CHECK(close(theorem_bound(Theorem::kInitialConditionRandomized, c, T),
              8.0L * 3 / (27.0L * 16 * 2 * T) + 2.0L * 2 * 8 * e * std::cbrt(12.0L) / (16.0L * T)));
}

TEST_CASE("degenerate constants give a zero bound") {
  BoundConstants c = unit_constants();
  c.sigma_star_sq = 0.0;
  c.delta = 0.0;
  c.sigma_sq = 0.0;
  c.e_sq = 0.0;
  for (Theorem th : kAll) CHECK(theorem_bound(th, c, 5) == 0.0);
}

TEST_CASE("bound monotonicity") {
  for (Theorem th : kAll) {
    CAPTURE(to_string(th));
    const BoundConstants c = unit_constants();
    for (int T = 2; T < 50; ++T) CHECK(theorem_bound(th, c, T + 1) < theorem_bound(th, c, T));
    BoundConstants more = c;
    more.sigma_star_sq = 2.0;
    more.sigma_sq = 2.0;
    CHECK(theorem_bound(th, more, 8) > theorem_bound(th, c, 8));
    more = c;
    more.delta = 2.0;
    more.e_sq = 20.0;
    CHECK(theorem_bound(th, more, 8) > theorem_bound(th, c, 8));
  }
}

TEST_CASE("randomized first term is below the unified one") {
  for (std::size_t n : {1u, 2u, 10u, 1000u}) {
    BoundConstants c = unit_constants();
    c.delta = 0.0;
    c.n = n;
    CHECK(theorem_bound(Theorem::kRandomized, c, 10) < theorem_bound(Theorem::kUnified, c, 10));
  }
}

TEST_CASE("bound errors") {
  BoundConstants c;
  c.smoothness = 1.0;
  c.sigma_star_sq = 1.0;
  c.delta = 1.0;
  CHECK_THROWS_AS(theorem_bound(Theorem::kVariance, c, 5), InvalidArgument);
  CHECK_THROWS_AS(theorem_bound(Theorem::kRandomized, c, 5), InvalidArgument);
  CHECK_THROWS_AS(theorem_bound(Theorem::kUnified, c, 1), PreconditionError);
  c.smoothness = 0.0;
  CHECK_THROWS_AS(theorem_bound(Theorem::kUnified, c, 5), InvalidArgument);
  for (Theorem th : kAll) CHECK(parse_theorem(to_string(th)) == th);
  CHECK_THROWS_AS(parse_theorem("thm9"), InvalidArgument);
}

TEST_CASE("bound report rows") {
  BoundReport rep;
  rep.constants = unit_constants();
  rep.add(4, 0.1);
  rep.add(8, 100.0);
  CHECK(rep.rows.size() == 2);
  CHECK(rep.rows[0].satisfied);
  CHECK(!rep.rows[1].satisfied);
  CHECK(!rep.all_satisfied());
}

TEST_CASE("complexity counts") {
  BoundConstants c = unit_constants();
  const double eps = 1e-3;
  const ComplexityEstimate est = required_epochs(Theorem::kUnified, c, eps);
  // Each term of the bound must be at most eps / 2.
  const double var = 4.0 / 9.0;
  const double dist = 2.0 * std::numbers::e * std::cbrt(12.0);
  CHECK(est.epochs == static_cast<long>(std::ceil(2.0 * std::max(var, dist) / eps)));
  CHECK(est.gradient_evaluations == 10.0 * est.epochs);
  CHECK(theorem_bound(Theorem::kUnified, c, static_cast<int>(est.epochs)) <= eps);
  CHECK_THROWS_AS(required_epochs(Theorem::kUnified, c, 0.0), InvalidArgument);
}

TEST_CASE("rate fits") {
  std::vector<std::pair<double, double>> inv, two_thirds;
  for (double T : {8.0, 16.0, 32.0, 64.0, 128.0}) {
    inv.emplace_back(T, 3.0 / T);
    two_thirds.emplace_back(T, 5.0 * std::pow(T, -2.0 / 3.0));
  }
  CHECK(std::abs(fit_rate(inv).slope + 1.0) <= 1e-10);
  CHECK(std::abs(fit_rate(inv).intercept - std::log(3.0)) <= 1e-10);
  CHECK(std::abs(fit_rate(two_thirds).slope + 2.0 / 3.0) <= 1e-10);
  CHECK_THROWS_AS(fit_rate(std::vector<std::pair<double, double>>{{1, 1}, {2, 1}}),
                  InvalidArgument);
  CHECK_THROWS_AS(fit_rate(std::vector<std::pair<double, double>>{{1, 1}, {2, 0}, {3, 1}}),
                  InvalidArgument);
  CHECK_THROWS_AS(fit_rate(std::vector<std::pair<double, double>>{{2, 1}, {2, 2}, {2, 3}}),
                  InvalidArgument);
}

TEST_CASE("auxiliary identities on nasg traces") {
  const auto q = make_quadratic(50, 10, 7, 1.0);
  for (std::size_t batch : {1u, 7u}) {
    for (SchemeKind k : {SchemeKind::kIncrementalGradient, SchemeKind::kRandomReshuffling}) {
      RunSpec spec;
      spec.scheme = {k, 2};
      spec.schedule = Schedule::theorem_unified(32, 1.0);
      spec.epochs = 32;
      spec.batch_size = batch;
      spec.x0 = Point(10, 0.3);
      spec.trace.keep_iterates = true;
      spec.trace.keep_inner = true;
      const RunResult r = run(*q.objective, spec);
      const IdentityResiduals res = auxiliary_identity_residuals(r, *q.objective, batch);
      CHECK(res.x_reconstruction <= 1e-10);
      CHECK(res.y_reconstruction <= 1e-10);
      REQUIRE(res.v_update.has_value());
      CHECK(*res.v_update <= 1e-9);
    }
  }
}

TEST_CASE("identity check preconditions") {
  const auto q = make_quadratic(5, 2, 7, 1.0);
  RunSpec spec;
  spec.schedule = Schedule::theorem_unified(4, 1.0);
  spec.epochs = 4;
  const RunResult plain = run(*q.objective, spec);
  CHECK_THROWS_AS(auxiliary_identity_residuals(plain, *q.objective), InvalidArgument);

  spec.trace.keep_iterates = true;
  const RunResult no_inner = run(*q.objective, spec);
  CHECK(!auxiliary_identity_residuals(no_inner, *q.objective).v_update.has_value());

  spec.options.initial_y = {1.0, 1.0};
  const RunResult shifted = run(*q.objective, spec);
  CHECK_THROWS_AS(auxiliary_identity_residuals(shifted, *q.objective), PreconditionError);
}

TEST_CASE("relative difference") {
  CHECK(relative_difference(Point{0.0, 0.0}, Point{0.0, 0.0}) == 0.0);
  CHECK(relative_difference(Point{3.0, 4.0}, Point{0.0, 0.0}) == 1.0);
  CHECK(relative_difference(Point{1.0}, Point{2.0}) == 0.5);
}
