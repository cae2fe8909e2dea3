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

#include "nasg/shuffling.hpp"

#include <numeric>
#include <string>
#include <utility>

#include "nasg/error.hpp"
#include "nasg/rng.hpp"

namespace nasg {

void shuffle_in_place(std::span<std::size_t> order, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
}

Permutation generate_permutation(const ShufflingScheme& scheme, std::size_t n, int epoch) {
  if (n == 0) throw InvalidArgument("permutation size must be >= 1");
  if (epoch < 1) throw InvalidArgument("epoch index must be >= 1");
  Permutation order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  switch (scheme.kind) {
    case SchemeKind::kIncrementalGradient:
      break;
    case SchemeKind::kSingleShuffling:
      shuffle_in_place(order, hash_seed(scheme.base_seed, 0));
      break;
    case SchemeKind::kRandomReshuffling:
      shuffle_in_place(order, hash_seed(scheme.base_seed, static_cast<std::uint64_t>(epoch)));
      break;
  }
  return order;
}

bool is_valid_permutation(std::span<const std::size_t> order) {
  std::vector<bool> seen(order.size(), false);
  for (std::size_t v : order) {
    if (v >= order.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

std::string_view to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::kIncrementalGradient: return "ig";
    case SchemeKind::kSingleShuffling: return "ss";
    case SchemeKind::kRandomReshuffling: return "rr";
  }
  return "?";
}

SchemeKind parse_scheme(std::string_view name) {
  if (name == "ig") return SchemeKind::kIncrementalGradient;
  if (name == "ss") return SchemeKind::kSingleShuffling;
  if (name == "rr") return SchemeKind::kRandomReshuffling;
  throw InvalidArgument("unknown shuffling scheme '" + std::string(name) + "' (expected rr, ss or ig)");
}

}  // namespace nasg
