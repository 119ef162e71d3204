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

#include "pbv/rng.hpp"

#include "pbv/errors.hpp"

namespace pbv {

Rng derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    return Rng(seq);
}

std::uint64_t uniform_below(Rng &rng, std::uint64_t bound) {
    if (bound == 0) {
        throw InputError("uniform_below needs a positive bound");
    }
    // Largest multiple of bound that fits; draws above it are rejected.
    std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    while (true) {
        std::uint64_t v = rng();
        if (v <= limit) {
            return v % bound;
        }
    }
}

}  // namespace pbv
