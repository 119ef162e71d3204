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

#ifndef PBV_ADVERSARY_HPP
#define PBV_ADVERSARY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pbv/analytics.hpp"
#include "pbv/keyspace.hpp"
#include "pbv/simulator.hpp"

namespace pbv {

/// Outcome of one strategy run, as it appears in comparison reports. `queries` is the
/// number of oracle interactions charged per attempt; quantum strategies are charged
/// one query per circuit execution.
struct ExperimentReport {
    std::string strategy;
    std::uint64_t queries = 0;
    std::uint64_t attempts = 0;
    std::vector<std::string> recovered_keys;
    std::vector<double> estimates;
    std::optional<bool> success;
    std::optional<double> success_probability;
    std::optional<Rational> exact_success_probability;
    bool certain = false;
    std::uint64_t seed = 0;
    double wall_time_seconds = 0.0;
    std::vector<std::string> assumptions;
};

/// Deterministic classical BV: queries x = 2^q for each q and reads off s(q).
/// Only sound for a single key; throws InputError otherwise.
SecretKey classical_bv_single_key(ClassicalOracle &oracle);

/// Raw per-bit estimates r̂_q = k · (fraction of 1s on input 2^q).
struct RqEstimate {
    std::vector<double> estimates;
    std::uint64_t trials_per_bit = 0;
    std::uint64_t queries = 0;

    /// Nearest-integer rounding, clamped to [0, k]. Kept separate from the raw estimate.
    RqProfile rounded(std::size_t k) const;
};

RqEstimate estimate_rq(ClassicalOracle &oracle, std::uint64_t trials_per_bit);

/// What the guessing adversary assumes about the hidden collection.
enum class KeyModel { distinct, multiset };

KeyModel parse_key_model(std::string_view text);
const char *to_string(KeyModel model);

struct GuessAttackResult {
    std::uint64_t runs = 0;
    std::uint64_t successes = 0;
    std::uint64_t candidates = 0;
    bool truth_is_candidate = false;
    /// One sample guess from the first run, empty if there are no candidates.
    std::vector<std::uint64_t> sample_guess;

    double frequency() const {
        return runs == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(runs);
    }
    /// 1 / candidates when the truth is a candidate, else 0.
    double expected() const;
};

/// Guesses uniformly among the collections consistent with `profile` under `model`,
/// `runs` times, and scores each guess against `true_keys` as a multiset.
GuessAttackResult classical_guess_attack(const RqProfile &profile, std::size_t k, const KeySet &true_keys,
                                         std::uint64_t runs, std::uint64_t seed,
                                         KeyModel model = KeyModel::distinct,
                                         std::uint64_t work_bound = kDefaultEnumerationBound);

struct CouponResult {
    std::size_t k = 0;
    std::uint64_t m = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    RecoveryProbability exact;

    double estimate() const {
        return trials == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(trials);
    }
    /// Binomial standard error sqrt(P(1-P)/trials) around the exact P(k, m).
    double sigma() const;
};

/// Each trial measures the circuit's data register m times and succeeds when every key
/// has been observed. Requires distinct keys.
CouponResult quantum_coupon_experiment(const KeySet &keys, std::uint64_t m, std::uint64_t trials,
                                       std::uint64_t seed, OraclePath path = OraclePath::fast);

struct ComparisonConfig {
    std::uint64_t budget = 0;  // queries per attempt, shared by both sides
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    OraclePath path = OraclePath::fast;
    KeyModel key_model = KeyModel::distinct;
    std::uint64_t work_bound = kDefaultEnumerationBound;
};

/// Runs the quantum coupon experiment and the classical strategies on the same key set
/// and query budget. Reports come back in a fixed order.
std::vector<ExperimentReport> compare_strategies(const KeySet &keys, const ComparisonConfig &config);

}  // namespace pbv

#endif
