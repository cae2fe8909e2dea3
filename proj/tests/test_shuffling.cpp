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

#include <algorithm>
#include <map>
#include <set>

#include "nasg/error.hpp"
#include "nasg/shuffling.hpp"

using namespace nasg;

TEST_CASE("incremental gradient is the identity") {
  const ShufflingScheme ig{SchemeKind::kIncrementalGradient, 5};
  CHECK(generate_permutation(ig, 4, 17) == Permutation{0, 1, 2, 3});
  CHECK(generate_permutation(ig, 1, 1) == Permutation{0});
}

TEST_CASE("single shuffling reuses one order") {
  for (std::uint64_t s : {0ULL, 1ULL, 12345ULL}) {
    const ShufflingScheme ss{SchemeKind::kSingleShuffling, s};
    const Permutation first = generate_permutation(ss, 6, 1);
    CHECK(is_valid_permutation(first));
    for (int t = 2; t <= 20; ++t) CHECK(generate_permutation(ss, 6, t) == first);
    CHECK(generate_permutation(ss, 6, 9) == first);
  }
}

TEST_CASE("random reshuffling gives fresh valid orders") {
  const ShufflingScheme rr{SchemeKind::kRandomReshuffling, 77};
  std::set<Permutation> seen;
  for (int t = 1; t <= 50; ++t) {
    const Permutation p = generate_permutation(rr, 6, t);
    CHECK(is_valid_permutation(p));
    seen.insert(p);
  }
  CHECK(seen.size() >= 2);
}

TEST_CASE("permutations are deterministic and replayable") {
  for (SchemeKind k : {SchemeKind::kIncrementalGradient, SchemeKind::kSingleShuffling,
                       SchemeKind::kRandomReshuffling}) {
    const ShufflingScheme s{k, 2024};
    for (int t : {1, 3, 1000}) {
      CHECK(generate_permutation(s, 100, t) == generate_permutation(s, 100, t));
    }
  }
  // Different base seeds give different RR streams.
  CHECK(generate_permutation({SchemeKind::kRandomReshuffling, 1}, 50, 1) !=
        generate_permutation({SchemeKind::kRandomReshuffling, 2}, 50, 1));
}

TEST_CASE("random reshuffling is uniform over orders, n=3") {
  const ShufflingScheme rr{SchemeKind::kRandomReshuffling, 9};
  std::map<Permutation, int> counts;
  const int draws = 60000;
  for (int t = 1; t <= draws; ++t) ++counts[generate_permutation(rr, 3, t)];
  CHECK(counts.size() == 6);
  for (const auto& [p, c] : counts) {
    CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 6.0) <= 0.01);
  }
}

TEST_CASE("shuffle_in_place positions are uniform") {
  // Every element lands in every slot about equally often.
  const std::size_t n = 5;
  std::vector<std::vector<int>> hits(n, std::vector<int>(n, 0));
  const int draws = 50000;
  for (int s = 0; s < draws; ++s) {
    Permutation p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = i;
    shuffle_in_place(p, static_cast<std::uint64_t>(s));
    for (std::size_t pos = 0; pos < n; ++pos) ++hits[p[pos]][pos];
  }
  for (const auto& row : hits) {
    for (int h : row) CHECK(std::abs(static_cast<double>(h) / draws - 0.2) <= 0.01);
  }
}

TEST_CASE("errors and parsing") {
  CHECK_THROWS_AS(generate_permutation({}, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_permutation({}, 3, 0), InvalidArgument);
  CHECK(is_valid_permutation(Permutation{2, 0, 1}));
  CHECK(!is_valid_permutation(Permutation{0, 0, 1}));
  CHECK(!is_valid_permutation(Permutation{0, 3, 1}));
  CHECK(parse_scheme("rr") == SchemeKind::kRandomReshuffling);
  CHECK(parse_scheme("ss") == SchemeKind::kSingleShuffling);
  CHECK(parse_scheme("ig") == SchemeKind::kIncrementalGradient);
  CHECK(to_string(SchemeKind::kSingleShuffling) == "ss");
  CHECK_THROWS_AS(parse_scheme("random"), InvalidArgument);
}
