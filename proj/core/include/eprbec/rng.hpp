// Copyright 2026 The eprbec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace eprbec {

/// Counter-based seed derivation: every (seed, stream, index) triple maps to an
/// independent 64-bit seed, so shots and bootstrap resamples can be generated in
/// any order (or in parallel) and still reproduce the serial stream exactly.
uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t index);

/// splitmix64 finalizer.
uint64_t mix64(uint64_t x);

/// Named streams so that, e.g., bootstrap draws never collide with shot draws.
namespace stream {
inline constexpr uint64_t shots = 0x5307;
inline constexpr uint64_t bootstrap = 0xB007;
inline constexpr uint64_t calibration = 0xCA1B;
inline constexpr uint64_t signals = 0x5161;
inline constexpr uint64_t scan = 0x5CA9;
}  // namespace stream

using Rng = std::mt19937_64;

inline Rng make_rng(uint64_t seed, uint64_t stream_id, uint64_t index) {
    return Rng(derive_seed(seed, stream_id, index));
}

}  // namespace eprbec
