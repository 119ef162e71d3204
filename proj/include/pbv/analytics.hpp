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

#ifndef PBV_ANALYTICS_HPP
#define PBV_ANALYTICS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pbv/exact.hpp"
#include "pbv/keyspace.hpp"

namespace pbv {

/// Number of surjections from an m-set onto a k-set,
/// Σ_{i=0}^{k-1} (-1)^i C(k,i) (k-i)^m.
wide_int surjection_count(std::uint64_t m, std::uint64_t k);

/// Probability that m uniform draws from k equally likely keys reveal all of them.
/// `value` is absent when k^m leaves the exact-integer range; `probability` is always set.
struct RecoveryProbability {
    std::uint64_t k;
    std::uint64_t m;
    std::optional<Rational> value;
    double probability;

    double approx() const {
        return probability;
    }
};

/// Floating-point P(k, m) from the occupancy chain; stable for any m.
double prob_all_keys_double(std::uint64_t k, std::uint64_t m);

RecoveryProbability prob_all_keys(std::uint64_t k, std::uint64_t m);

/// Closed form for two keys: 0 for m < 2, else 1 - 2^(1-m).
Rational prob_two_keys(std::uint64_t m);

/// Default ceiling on Π_q C(k, r_q) for exhaustive enumeration.
inline constexpr std::uint64_t kDefaultEnumerationBound = 10'000'000;

/// How many key collections reproduce a column-sum profile.
///
/// `ordered_count` counts row-ordered assignments (Π_q C(k, r_q)). `multiset_count` counts
/// unordered collections with repeats allowed; `distinct_set_count` counts those whose k keys
/// are pairwise distinct. `key_sets`, when requested, holds the multisets in canonical form:
/// each sorted ascending, the list sorted lexicographically.
struct ConsistencyCount {
    RqProfile profile;
    std::size_t k = 0;
    std::size_t n = 0;
    wide_int ordered_count = 0;
    std::uint64_t multiset_count = 0;
    std::uint64_t distinct_set_count = 0;
    std::optional<std::vector<std::vector<std::uint64_t>>> key_sets;
};

/// Π_q C(k, r_q) without enumerating.
wide_int ordered_assignment_count(const RqProfile &profile, std::size_t k);

/// Enumerates every column assignment in parallel and deduplicates rows as multisets.
/// Throws CapacityError when Π_q C(k, r_q) exceeds `work_bound`.
ConsistencyCount count_consistent_keysets(const RqProfile &profile, std::size_t k, bool enumerate = false,
                                          std::uint64_t work_bound = kDefaultEnumerationBound);

/// Serial version of count_consistent_keysets, kept as the test oracle and benchmark baseline.
ConsistencyCount count_consistent_keysets_serial(const RqProfile &profile, std::size_t k, bool enumerate = false,
                                                 std::uint64_t work_bound = kDefaultEnumerationBound);

/// min(k! / Π_q C(k, r_q), 1).
Rational classical_guess_bound(const RqProfile &profile, std::size_t k);

/// R / Π_q C(k, r_q) with R = k! / Π b_i! from the actual key multiplicities.
Rational classical_guess_exact(const KeySet &keys);

}  // namespace pbv

#endif
