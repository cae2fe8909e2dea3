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
#include <span>
#include <string_view>
#include <vector>

namespace nasg {

enum class SchemeKind {
  kIncrementalGradient,  // identity order every epoch
  kSingleShuffling,      // one shuffle, reused every epoch
  kRandomReshuffling,    // fresh shuffle every epoch
};

struct ShufflingScheme {
  SchemeKind kind = SchemeKind::kRandomReshuffling;
  std::uint64_t base_seed = 0;
};

using Permutation = std::vector<std::size_t>;

/// Order of the n components in epoch t (t >= 1).
///
/// Shuffles are Fisher-Yates driven by xoshiro256**. Random Reshuffling seeds
/// epoch t with hash_seed(base_seed, t), so any epoch can be replayed without
/// generating the earlier ones. Single Shuffling always uses stream 0.
Permutation generate_permutation(const ShufflingScheme& scheme, std::size_t n, int epoch);

/// In-place Fisher-Yates shuffle of `order` with Rng(seed).
void shuffle_in_place(std::span<std::size_t> order, std::uint64_t seed);

/// True iff `order` is a rearrangement of 0..size-1.
bool is_valid_permutation(std::span<const std::size_t> order);

std::string_view to_string(SchemeKind kind);
/// Accepts "rr", "ss", "ig". Throws InvalidArgument otherwise.
SchemeKind parse_scheme(std::string_view name);

}  // namespace nasg
