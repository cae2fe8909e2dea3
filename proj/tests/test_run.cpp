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

#include "nasg/diagnostics.hpp"
#include "nasg/error.hpp"
#include "nasg/run.hpp"
#include "nasg/synthetic.hpp"
#include "test_util.hpp"

using namespace nasg;

namespace {

RunSpec quadratic_spec(Method m, SchemeKind scheme, int T, std::uint64_t seed = 1) {
  RunSpec spec;
  spec.method = m;
  spec.scheme = {scheme, seed};
  spec.schedule = Schedule::theorem_unified(T, 1.0);
  spec.epochs = T;
  return spec;
}

bool same_trace(const std::vector<EpochRecord>& a, const std::vector<EpochRecord>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t].value != b[t].value || a[t].grad_sq_norm != b[t].grad_sq_norm ||
        a[t].step_size != b[t].step_size || a[t].dispersion_k != b[t].dispersion_k ||
        a[t].dispersion_i != b[t].dispersion_i || a[t].x_tilde != b[t].x_tilde) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("run is deterministic and has T records") {
  const auto q = make_quadratic(50, 10, 7, 1.0);
  for (Method m : {Method::kNasg, Method::kNasgPi, Method::kNag, Method::kSgd,
                   Method::kSgdMomentum, Method::kAdam}) {
    CAPTURE(to_string(m));
    RunSpec spec = quadratic_spec(m, SchemeKind::kRandomReshuffling, 12, 5);
    spec.trace.dispersion = true;
    spec.trace.keep_iterates = true;
    const RunResult a = run(*q.objective, spec);
    const RunResult b = run(*q.objective, spec);
    CHECK(!a.diverged);
    CHECK(a.trace.size() == 12);
    CHECK(same_trace(a.trace, b.trace));
    CHECK(a.final_iterate == a.trace.back().x_tilde);
    CHECK(a.trace.back().dispersion_k.has_value() == (m != Method::kNag));
    for (std::size_t t = 0; t < a.trace.size(); ++t) CHECK(a.trace[t].epoch == int(t) + 1);
  }
}

TEST_CASE("rr seeds differ, ig seeds do not") {
  const auto q = make_quadratic(50, 10, 7, 1.0);
  const RunResult a = run(*q.objective, quadratic_spec(Method::kNasg, SchemeKind::kRandomReshuffling, 8, 1));
  const RunResult b = run(*q.objective, quadratic_spec(Method::kNasg, SchemeKind::kRandomReshuffling, 8, 2));
  CHECK(a.final_iterate != b.final_iterate);
  const RunResult c = run(*q.objective, quadratic_spec(Method::kNasg, SchemeKind::kIncrementalGradient, 8, 1));
  const RunResult d = run(*q.objective, quadratic_spec(Method::kNasg, SchemeKind::kIncrementalGradient, 8, 2));
  CHECK(c.final_iterate == d.final_iterate);
}

TEST_CASE("rr seed mean at T=32 is within the randomized bound") {
  const auto q = make_quadratic(50, 10, 7, 1.0);
  const int T = 32;
  double mean = 0.0;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const RunResult r = run(*q.objective, quadratic_spec(Method::kNasg, SchemeKind::kRandomReshuffling, T, s));
    mean += r.trace.back().value - q.optimal_value;
  }
  mean /= 10.0;
  BoundConstants c;
  c.smoothness = 1.0;
  c.sigma_star_sq = q.variance_at_optimum;
  c.delta = squared_norm(q.minimizer);
  c.n = 50;
  CHECK(mean <= theorem_bound(Theorem::kRandomized, c, T));
}

TEST_CASE("divergence keeps the partial trace") {
  const auto q = make_quadratic(10, 2, 1, 1.0);
  RunSpec spec;
  spec.method = Method::kSgd;
  spec.scheme = {SchemeKind::kIncrementalGradient, 0};
  spec.schedule = Schedule::constant(50.0);
  spec.epochs = 500;
  spec.x0 = {1.0, 1.0};
  const RunResult r = run(*q.objective, spec);
  CHECK(r.diverged);
  CHECK(r.error.find("non-finite iterate in epoch") == 0);
  CHECK(r.trace.size() < 500);
  for (const auto& rec : r.trace) CHECK(std::isfinite(rec.value));
}

TEST_CASE("run argument checks") {
  const auto q = make_quadratic(10, 2, 1, 1.0);
  RunSpec spec;
  spec.epochs = 0;
  CHECK_THROWS_AS(run(*q.objective, spec), InvalidArgument);
  spec.epochs = 3;
  spec.batch_size = 0;
  CHECK_THROWS_AS(run(*q.objective, spec), InvalidArgument);
  spec.batch_size = 1;
  spec.x0 = {1.0};
  CHECK_THROWS_AS(run(*q.objective, spec), InvalidArgument);
  spec.x0.clear();
  spec.schedule = Schedule::theorem_unified(2, 1.0);
  CHECK_THROWS_AS(run(*q.objective, spec), InvalidArgument);
}

TEST_CASE("batch larger than n is clamped") {
  const auto q = make_quadratic(10, 2, 1, 1.0);
  RunSpec a = quadratic_spec(Method::kNasg, SchemeKind::kIncrementalGradient, 5);
  RunSpec b = a;
  a.batch_size = 10;
  b.batch_size = 1000;
  CHECK(run(*q.objective, a).final_iterate == run(*q.objective, b).final_iterate);
}

TEST_CASE("accuracy is traced for classifiers") {
  const auto data = std::make_shared<const Dataset>(testing::random_dataset(30, 4, 1, 2));
  const LogisticObjective obj(data);
  RunSpec spec;
  spec.schedule = Schedule::constant(0.5);
  spec.epochs = 5;
  spec.trace.accuracy = true;
  const RunResult r = run(obj, spec);
  for (const auto& rec : r.trace) {
    REQUIRE(rec.accuracy.has_value());
    CHECK(*rec.accuracy >= 0.0);
    CHECK(*rec.accuracy <= 1.0);
  }
}

TEST_CASE("inner iterates and orders are kept on request") {
  const auto q = make_quadratic(6, 2, 1, 1.0);
  RunSpec spec = quadratic_spec(Method::kNasg, SchemeKind::kRandomReshuffling, 4);
  spec.batch_size = 4;
  spec.trace.keep_inner = true;
  const RunResult r = run(*q.objective, spec);
  for (const auto& rec : r.trace) {
    CHECK(rec.inner.size() == 3);  // start + ceil(6/4) steps
    CHECK(rec.order.size() == 6);
    CHECK(is_valid_permutation(rec.order));
  }
}
