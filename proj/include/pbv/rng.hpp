// Copyright 2026 The pbv Authors
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

#ifndef PBV_RNG_HPP
#define PBV_RNG_HPP

#include <cstdint>
#include <random>

namespace pbv {

/// The project-wide generator. Every sampling routine takes one of these (or a seed)
/// explicitly; nothing reads global random state.
using Rng = std::mt19937_64;

/// Independent stream for (seed, index), used for per-experiment and per-block
/// derivation so that results do not depend on thread count or scheduling.
Rng derive_stream(std::uint64_t seed, std::uint64_t index);

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). Rejection sampling keeps it exactly uniform and
/// independent of the standard library's distribution implementation.
std::uint64_t uniform_below(Rng &rng, std::uint64_t bound);

}  // namespace pbv

#endif
