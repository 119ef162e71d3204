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

#include "pbv/adversary.hpp"

#include <random>

#include "gtest/gtest.h"
#include "pbv/errors.hpp"

using namespace pbv;

namespace {

KeySet keys_of(const char *text) {
    return KeySet::parse_list(text);
}

}  // namespace

TEST(classical_bv_single_key, examples) {
    for (const char *k : {"101", "000", "1111"}) {
        ClassicalOracle oracle(keys_of(k), 5);
        EXPECT_EQ(classical_bv_single_key(oracle).str(), k);
        EXPECT_EQ(oracle.queries(), std::string(k).size());
    }
    ClassicalOracle two(keys_of("01,10"), 5);
    EXPECT_THROW(classical_bv_single_key(two), InputError);
}

TEST(classical_bv_single_key, exhaustive_small_widths) {
    for (std::size_t n = 1; n <= 6; ++n)
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            ClassicalOracle oracle(KeySet({SecretKey(v, n)}), v);
            ASSERT_EQ(classical_bv_single_key(oracle).value(), v);
            ASSERT_EQ(oracle.queries(), n);
        }
}

TEST(estimate_rq, worked_example_converges) {
    ClassicalOracle oracle(keys_of("0001,0011,1011,1110"), 17);
    auto est = estimate_rq(oracle, 10000);
    EXPECT_EQ(est.queries, 4u * 10000u);
    EXPECT_EQ(est.rounded(4).msb_first(), (std::vector<std::size_t>{2, 1, 3, 3}));
}

TEST(estimate_rq, single_key_is_exact_after_one_trial) {
    ClassicalOracle oracle(keys_of("1011"), 1);
    auto est = estimate_rq(oracle, 1);
    EXPECT_EQ(est.estimates, (std::vector<double>{1.0, 1.0, 0.0, 1.0}));
    EXPECT_EQ(est.queries, 4u);
    EXPECT_THROW(estimate_rq(oracle, 0), InputError);
}

TEST(estimate_rq, binomial_spread) {
    ClassicalOracle oracle(keys_of("00,11"), 8);
    const double trials = 10000;
    auto est = estimate_rq(oracle, 10000);
    double sigma = 2 * std::sqrt(0.25 / trials);
    EXPECT_NEAR(est.estimates[0], 1.0, 3 * sigma);
}

TEST(estimate_rq, unbiased_over_experiments) {
    // 10^4 experiments of 20 trials per bit; the mean estimate should sit within 3 standard
    // errors of the true r_q.
    auto keys = keys_of("001,011,110");
    auto truth = rq_profile(keys);
    const int experiments = 10000;
    const std::uint64_t per_bit = 20;
    std::vector<double> sum(3, 0.0);
    ClassicalOracle oracle(keys, 2);
    for (int e = 0; e < experiments; ++e) {
        auto est = estimate_rq(oracle, per_bit);
        for (std::size_t q = 0; q < 3; ++q) sum[q] += est.estimates[q];
    }
    for (std::size_t q = 0; q < 3; ++q) {
        double p = static_cast<double>(truth.counts[q]) / 3.0;
        double se = 3.0 * std::sqrt(p * (1 - p) / per_bit) / std::sqrt(experiments);
        EXPECT_NEAR(sum[q] / experiments, static_cast<double>(truth.counts[q]), 3 * se + 1e-12) << q;
    }
}

TEST(classical_guess_attack, worked_example_one_in_twelve) {
    auto keys = keys_of("0001,0011,1011,1110");
    const std::uint64_t runs = 100000;
    auto res = classical_guess_attack(rq_profile(keys), 4, keys, runs, 99);
    EXPECT_EQ(res.candidates, 12u);
    EXPECT_TRUE(res.truth_is_candidate);
    double p = 1.0 / 12.0;
    EXPECT_NEAR(res.frequency(), p, 3 * std::sqrt(p * (1 - p) / runs));
    EXPECT_EQ(res.sample_guess.size(), 4u);

    auto multi = classical_guess_attack(rq_profile(keys), 4, keys, runs, 99, KeyModel::multiset);
    EXPECT_EQ(multi.candidates, 20u);
    EXPECT_NEAR(multi.frequency(), 0.05, 3 * std::sqrt(0.05 * 0.95 / runs));
}

TEST(classical_guess_attack, forced_and_impossible) {
    auto keys = keys_of("00,01");
    auto forced = classical_guess_attack(rq_profile(keys), 2, keys, 1000, 1);
    EXPECT_EQ(forced.candidates, 1u);
    EXPECT_EQ(forced.frequency(), 1.0);

    // The true keys repeat, so no set of distinct keys can match them.
    auto dup = keys_of("011,011");
    auto impossible = classical_guess_attack(rq_profile(dup), 2, dup, 1000, 1);
    EXPECT_FALSE(impossible.truth_is_candidate);
    EXPECT_EQ(impossible.frequency(), 0.0);

    // A profile the true keys do not satisfy.
    auto other = classical_guess_attack(rq_profile(keys_of("11,00")), 2, keys, 1000, 1);
    EXPECT_EQ(other.frequency(), 0.0);
}

TEST(quantum_coupon_experiment, matches_closed_form) {
    auto res = quantum_coupon_experiment(keys_of("011,101"), 3, 100000, 5);
    EXPECT_EQ(*res.exact.value, Rational(3, 4));
    EXPECT_NEAR(res.estimate(), 0.75, 3 * res.sigma());

    auto ten = quantum_coupon_experiment(keys_of("011,101"), 10, 100000, 6);
    EXPECT_NEAR(ten.estimate(), 1.0 - std::ldexp(1.0, -9), 3 * ten.sigma());

    auto short_budget = quantum_coupon_experiment(keys_of("001,010,011,101"), 3, 1000, 7);
    EXPECT_EQ(short_budget.successes, 0u);
}

TEST(quantum_coupon_experiment, rejects_duplicates) {
    try {
        quantum_coupon_experiment(keys_of("010,011,011,101"), 4, 10, 1);
        FAIL();
    } catch (const InputError &e) {
        EXPECT_NE(std::string(e.what()).find("distinct"), std::string::npos);
    }
}

TEST(quantum_coupon_experiment, seeded_and_thread_independent) {
    auto keys = keys_of("001,010,011");
    auto a = quantum_coupon_experiment(keys, 5, 20000, 123);
    auto b = quantum_coupon_experiment(keys, 5, 20000, 123, OraclePath::gate);
    EXPECT_EQ(a.successes, b.successes);
}

TEST(compare_strategies, single_key_both_sides_certain) {
    ComparisonConfig cfg;
    cfg.budget = 1;
    cfg.trials = 100;
    cfg.seed = 4;
    auto reports = compare_strategies(keys_of("1011"), cfg);
    ASSERT_GE(reports.size(), 2u);
    EXPECT_EQ(reports[0].strategy, "quantum_coupon");
    EXPECT_EQ(reports[0].queries, 1u);
    EXPECT_EQ(*reports[0].success_probability, 1.0);
    EXPECT_TRUE(reports[0].certain);
    EXPECT_EQ(reports[1].strategy, "classical_bv_single_key");
    EXPECT_EQ(reports[1].queries, 4u);
    EXPECT_TRUE(*reports[1].success);
    EXPECT_TRUE(reports[1].certain);
}

TEST(compare_strategies, finite_query_classical_never_certain) {
    std::mt19937_64 gen(12);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + gen() % 3;
        std::size_t k = 2 + gen() % 3;
        std::vector<SecretKey> ks;
        for (std::size_t i = 0; i < k; ++i) ks.emplace_back(gen() & ((std::uint64_t{1} << n) - 1), n);
        KeySet keys(ks);
        if (multiplicity(keys).distinct.size() < 2) continue;
        ++checked;
        ComparisonConfig cfg;
        cfg.budget = 16;
        cfg.trials = 200;
        cfg.seed = static_cast<std::uint64_t>(trial);
        cfg.key_model = KeyModel::multiset;
        for (const auto &r : compare_strategies(keys, cfg)) {
            EXPECT_FALSE(r.assumptions.empty());
            if (r.strategy == "classical_profile_guess") {
                EXPECT_FALSE(r.certain);
            } else if (r.strategy == "classical_guess_exact_profile") {
                // The unbounded-query limit is certain exactly when the profile admits one collection.
                EXPECT_EQ(r.certain, *r.exact_success_probability == Rational(1));
            }
        }
    }
    EXPECT_GT(checked, 20);
}

TEST(compare_strategies, profile_can_pin_down_the_keys_in_the_limit) {
    ComparisonConfig cfg;
    cfg.budget = 8;
    cfg.trials = 500;
    cfg.seed = 2;
    auto reports = compare_strategies(keys_of("00,01"), cfg);
    ASSERT_EQ(reports.size(), 3u);
    EXPECT_FALSE(reports[1].certain);
    EXPECT_LT(*reports[1].success_probability, 1.0);
    EXPECT_TRUE(reports[2].certain);
    EXPECT_EQ(*reports[2].exact_success_probability, Rational(1));
}

TEST(compare_strategies, worked_example_gap) {
    ComparisonConfig cfg;
    cfg.budget = 64;
    cfg.trials = 20000;
    cfg.seed = 8;
    auto reports = compare_strategies(keys_of("0001,0011,1011,1110"), cfg);
    ASSERT_EQ(reports.size(), 3u);
    EXPECT_GT(*reports[0].success_probability, 0.99);
    EXPECT_EQ(reports[2].strategy, "classical_guess_exact_profile");
    EXPECT_EQ(*reports[2].exact_success_probability, Rational(1, 12));
    EXPECT_LT(*reports[1].success_probability, 1.0 / 12.0 + 0.02);
}
