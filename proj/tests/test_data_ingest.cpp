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

#include <array>
#include <cmath>
#include <filesystem>

#include "fixture_table.hpp"
#include "nasg/dataset.hpp"
#include "nasg/error.hpp"
#include "nasg/rng.hpp"
#include "nasg/synthetic.hpp"
#include "test_util.hpp"

using namespace nasg;

namespace {

const std::filesystem::path kFixtures = NASG_FIXTURE_DIR;

std::string parse_error_of(std::string_view text, LoadOptions opts = {}) {
  try {
    parse_libsvm(text, opts);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("rng reference sequences") {
  // SplitMix64 and xoshiro256** reference outputs.
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  Rng r(std::array<std::uint64_t, 4>{1, 2, 3, 4});
  CHECK(r.next() == 11520ULL);
  CHECK(r.next() == 0ULL);
  CHECK(r.next() == 1509978240ULL);
  CHECK(r.next() == 1215971899390074240ULL);
}

TEST_CASE("rng helpers") {
  Rng a(42);
  Rng b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    CHECK(u.below(7) < 7);
  }
  Rng g(11);
  double sum = 0.0;
  double sq = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) {
    const double z = g.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / m) < 0.01);
  CHECK(std::abs(sq / m - 1.0) < 0.02);
  CHECK(hash_seed(1, 2) != hash_seed(2, 1));
}

TEST_CASE("parse_libsvm basic example") {
  const Dataset d = parse_libsvm("+1 1:0.5 3:-2\n-1 2:1\n");
  CHECK(d.num_samples() == 2);
  CHECK(d.dim() == 3);
  CHECK(d.num_classes() == 1);
  CHECK(d.label(0) == 1.0);
  CHECK(d.label(1) == -1.0);
  const auto row0 = d.row(0);
  REQUIRE(row0.size() == 2);
  CHECK(row0[0].index == 0);
  CHECK(row0[0].value == 0.5);
  CHECK(row0[1].index == 2);
  CHECK(row0[1].value == -2.0);
}

TEST_CASE("parse_libsvm keeps explicit zeros") {
  const Dataset d = parse_libsvm("1 2:0\n");
  CHECK(d.num_samples() == 1);
  CHECK(d.dim() == 2);
  REQUIRE(d.row(0).size() == 1);
  CHECK(d.row(0)[0].index == 1);
  CHECK(d.row(0)[0].value == 0.0);
}

TEST_CASE("parse_libsvm located errors") {
  CHECK(parse_error_of("+1 3:1 2:1\n") == "non-increasing feature index at line 1");
  CHECK(parse_error_of("+1 1:1 1:2\n") == "non-increasing feature index at line 1");
  CHECK(parse_error_of("+1 1:1\n-1 0:3\n") == "feature index < 1 at line 2");
  CHECK(parse_error_of("abc 1:1\n").find("malformed label") == 0);
  CHECK(parse_error_of("+1 a:1\n").find("malformed feature index") == 0);
  CHECK(parse_error_of("+1 1:nan\n").find("malformed feature value") == 0);
  CHECK(parse_error_of("+1 1:inf\n").find("malformed feature value") == 0);
  CHECK(parse_error_of("+1 1:\n").find("malformed feature value") == 0);
  CHECK(parse_error_of("+1 1\n").find("malformed feature token") == 0);
  CHECK(parse_error_of("+1 -1:2\n").find("malformed feature index") == 0);
  CHECK(parse_error_of("++1 1:1\n").find("malformed label") == 0);
  CHECK(parse_error_of("+1 99999999999:1\n") == "feature index too large at line 1");
  CHECK(parse_error_of("") == "empty input: no samples");
  CHECK(parse_error_of("\n  \n\t\n") == "empty input: no samples");
  CHECK(parse_error_of("2 1:1\n") == "label 2 is not a binary label at line 1");
  CHECK(parse_error_of("0 1:1\n-1 1:1\n") ==
        "binary labels mix {0,1} and {-1,+1} conventions at line 2");
  try {
    parse_libsvm("+1 1:1\n+1 2:1 1:1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.code() == ErrorCode::kParse);
  }
}

TEST_CASE("parse_libsvm label modes") {
  SUBCASE("zero-one mapped to -1/+1") {
    const Dataset d = parse_libsvm("1 1:1\n0 1:2\n");
    CHECK(d.label(0) == 1.0);
    CHECK(d.label(1) == -1.0);
  }
  SUBCASE("multiclass dense re-index") {
    LoadOptions o;
    o.mode = LabelMode::kMulticlass;
    const Dataset d = parse_libsvm("10 1:1\n-3 1:1\n4 1:1\n10 1:1\n", o);
    CHECK(d.num_classes() == 3);
    CHECK(d.label(0) == 2.0);
    CHECK(d.label(1) == 0.0);
    CHECK(d.label(2) == 1.0);
    CHECK(d.label(3) == 2.0);
  }
  SUBCASE("regression verbatim") {
    LoadOptions o;
    o.mode = LabelMode::kRegression;
    const Dataset d = parse_libsvm("3.25 1:1\n-7 2:1\n", o);
    CHECK(d.label(0) == 3.25);
    CHECK(d.label(1) == -7.0);
  }
}

TEST_CASE("parse_libsvm load options") {
  SUBCASE("dimension override") {
    LoadOptions o;
    o.dimension = 10;
    CHECK(parse_libsvm("+1 2:1\n", o).dim() == 10);
    o.dimension = 1;
    CHECK_THROWS_AS(parse_libsvm("+1 2:1\n", o), InvalidArgument);
  }
  SUBCASE("bias appended after scaling") {
    LoadOptions o;
    o.append_bias = true;
    o.scale_max_abs = true;
    const Dataset d = parse_libsvm("+1 1:4 2:-1\n-1 1:-2\n", o);
    CHECK(d.dim() == 3);
    REQUIRE(d.row(0).size() == 3);
    CHECK(d.row(0)[0].value == 1.0);
    CHECK(d.row(0)[1].value == -1.0);
    CHECK(d.row(0)[2].index == 2);
    CHECK(d.row(0)[2].value == 1.0);
    REQUIRE(d.row(1).size() == 2);
    CHECK(d.row(1)[0].value == -0.5);
    CHECK(d.row(1)[1].value == 1.0);
  }
}

TEST_CASE("fixture corpus parses to the documented structures") {
  for (const auto& f : testing::good_fixtures()) {
    CAPTURE(f.file);
    LoadOptions o;
    o.mode = f.mode;
    const Dataset d = load_libsvm_file(kFixtures / f.file, o);
    CHECK(d.num_samples() == f.samples);
    CHECK(d.dim() == f.dim);
    CHECK(d.num_entries() == f.nonzeros);
    CHECK(d.num_classes() == f.classes);
    REQUIRE(d.labels().size() == f.labels.size());
    for (std::size_t i = 0; i < f.labels.size(); ++i) CHECK(d.label(i) == f.labels[i]);
  }
}

TEST_CASE("malformed fixtures give located errors") {
  for (const auto& f : testing::bad_fixtures()) {
    CAPTURE(f.file);
    try {
      load_libsvm_file(kFixtures / f.file);
      FAIL("no error raised");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(f.message) != std::string::npos);
      CHECK(e.line() == f.line);
    }
  }
}

TEST_CASE("missing file is an io error") {
  CHECK_THROWS_AS(load_libsvm_file(kFixtures / "does_not_exist.svm"), IoError);
}

TEST_CASE("serialize round trip over the fixture corpus") {
  for (const auto& f : testing::good_fixtures()) {
    CAPTURE(f.file);
    LoadOptions o;
    o.mode = f.mode;
    const Dataset d = load_libsvm_file(kFixtures / f.file, o);
    LoadOptions again = o;
    again.dimension = d.dim();
    const Dataset back = parse_libsvm(serialize_libsvm(d), again);
    CHECK(back == d);
  }
}

TEST_CASE("serialize round trip on random data keeps every bit") {
  const Dataset d = testing::random_dataset(40, 7, 1, 5);
  LoadOptions o;
  o.dimension = d.dim();
  CHECK(parse_libsvm(serialize_libsvm(d), o) == d);
}

TEST_CASE("dataset constructor rejects broken invariants") {
  CHECK_THROWS_AS(Dataset(2, {0, 1}, {{2, 1.0}}, {1.0}, LabelMode::kBinary, 1), InvalidArgument);
  CHECK_THROWS_AS(Dataset(3, {0, 2}, {{1, 1.0}, {0, 1.0}}, {1.0}, LabelMode::kBinary, 1),
                  InvalidArgument);
  CHECK_THROWS_AS(Dataset(3, {0, 1}, {{1, 1.0}}, {0.5}, LabelMode::kBinary, 1), InvalidArgument);
  CHECK_THROWS_AS(Dataset(3, {0}, {}, {}, LabelMode::kBinary, 1), InvalidArgument);
}

TEST_CASE("make_quadratic examples") {
  SUBCASE("two centers") {
    const QuadraticProblem q = make_quadratic_from_centers(1, {1.0, -1.0});
    CHECK(q.minimizer[0] == 0.0);
    CHECK(q.optimal_value == 0.5);
    CHECK(q.variance_at_optimum == 1.0);
  }
  SUBCASE("single center") {
    const QuadraticProblem q = make_quadratic_from_centers(1, {3.0});
    CHECK(q.minimizer[0] == 3.0);
    CHECK(q.optimal_value == 0.0);
    CHECK(q.variance_at_optimum == 0.0);
  }
  SUBCASE("perturbation check, n=4 d=3 seed=7") {
    const QuadraticProblem q = make_quadratic(4, 3, 7, 1.0);
    for (std::size_t j = 0; j < 3; ++j) {
      for (double s : {1e-3, -1e-3}) {
        Point p = q.minimizer;
        p[j] += s;
        CHECK(q.objective->full_value(q.minimizer) <= q.objective->full_value(p));
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(make_quadratic(0, 3, 1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_quadratic(3, 0, 1, 1.0), InvalidArgument);
    CHECK_THROWS_AS(make_quadratic(3, 3, 1, -0.1), InvalidArgument);
  }
}

TEST_CASE("make_quadratic gradient vanishes at the minimizer") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const QuadraticProblem q = make_quadratic(50, 10, seed, 2.0);
    CHECK(std::sqrt(squared_norm(q.objective->full_gradient(q.minimizer))) <= 1e-12);
    CHECK(variance_at_point(*q.objective, q.minimizer) ==
          doctest::Approx(q.variance_at_optimum).epsilon(1e-14));
  }
}

TEST_CASE("make_quadratic is deterministic in the seed") {
  const QuadraticProblem a = make_quadratic(10, 4, 99, 1.0);
  const QuadraticProblem b = make_quadratic(10, 4, 99, 1.0);
  const QuadraticProblem c = make_quadratic(10, 4, 100, 1.0);
  CHECK(a.minimizer == b.minimizer);
  CHECK(a.minimizer != c.minimizer);
}
