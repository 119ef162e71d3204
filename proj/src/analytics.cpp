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

#include "pbv/analytics.hpp"

#include <algorithm>
#include <set>

#include "pbv/errors.hpp"

namespace pbv {

wide_int surjection_count(std::uint64_t m, std::uint64_t k) {
    if (k == 0) {
        throw InputError("surjection count needs k >= 1");
    }
    if (m < k) {
        return 0;
    }
    wide_int total = 0;
    for (std::uint64_t i = 0; i < k; ++i) {
        wide_int term = checked_mul(binomial(k, i), checked_pow(static_cast<wide_int>(k - i), m));
        total = (i % 2 == 0) ? checked_add(total, term) : checked_sub(total, term);
    }
    return total;
}

RecoveryProbability prob_all_keys(std::uint64_t k, std::uint64_t m) {
    if (k == 0) {
        throw InputError("prob_all_keys needs k >= 1");
    }
    if (m < k) {
        return {k, m, Rational(0), 0.0};
    }
    try {
        Rational exact(surjection_count(m, k), checked_pow(static_cast<wide_int>(k), m));
        return {k, m, exact, exact.to_double()};
    } catch (const CapacityError &) {
        return {k, m, std::nullopt, prob_all_keys_double(k, m)};
    }
}

double prob_all_keys_double(std::uint64_t k, std::uint64_t m) {
    if (k == 0) {
        throw InputError("prob_all_keys needs k >= 1");
    }
    if (m < k) {
        return 0.0;
    }
    // seen[j]: probability that exactly j distinct keys have appeared so far.
    std::vector<long double> seen(k + 1, 0.0L), next(k + 1);
    seen[0] = 1.0L;
    const long double kk = static_cast<long double>(k);
    for (std::uint64_t draw = 0; draw < m; ++draw) {
        std::fill(next.begin(), next.end(), 0.0L);
        for (std::uint64_t j = 0; j <= k; ++j) {
            if (seen[j] == 0.0L) continue;
            next[j] += seen[j] * (static_cast<long double>(j) / kk);
            if (j < k) next[j + 1] += seen[j] * (static_cast<long double>(k - j) / kk);
        }
        seen.swap(next);
    }
    return static_cast<double>(seen[k]);
}

Rational prob_two_keys(std::uint64_t m) {
    if (m < 2) {
        return Rational(0);
    }
    return Rational(1) - Rational(1, checked_pow(2, m - 1));
}

wide_int ordered_assignment_count(const RqProfile &profile, std::size_t k) {
    profile.validate(k);
    wide_int out = 1;
    for (std::size_t r : profile.counts) {
        out = checked_mul(out, binomial(k, r));
    }
    return out;
}

namespace {

using KeyRows = std::vector<std::uint64_t>;

struct ColumnChoices {
    // choices[q] lists every k-bit row mask with exactly r_q bits set.
    std::vector<std::vector<std::uint64_t>> choices;
    std::uint64_t total = 1;
};

ColumnChoices column_choices(const RqProfile &profile, std::size_t k, std::uint64_t work_bound) {
    if (k == 0) {
        throw InputError("key count k must be at least 1");
    }
    if (k > 62) {
        throw CapacityError("enumeration supports at most 62 keys, got k = " + std::to_string(k));
    }
    wide_int ordered = ordered_assignment_count(profile, k);
    if (ordered > static_cast<wide_int>(work_bound)) {
        throw CapacityError("enumeration refused: " + to_string(ordered) +
                            " ordered assignments exceed the work bound of " + std::to_string(work_bound));
    }
    ColumnChoices out;
    out.total = static_cast<std::uint64_t>(ordered);
    out.choices.resize(profile.num_bits());
    const std::uint64_t limit = std::uint64_t{1} << k;
    for (std::size_t q = 0; q < profile.num_bits(); ++q) {
        std::size_t r = profile.counts[q];
        auto &list = out.choices[q];
        if (r == 0) {
            list.push_back(0);
            continue;
        }
        // Gosper's hack: walk the k-bit masks with popcount r in increasing order.
        for (std::uint64_t mask = (std::uint64_t{1} << r) - 1; mask < limit;) {
            list.push_back(mask);
            std::uint64_t low = mask & (~mask + 1);
            std::uint64_t ripple = mask + low;
            mask = (((ripple ^ mask) >> 2) / low) | ripple;
        }
    }
    return out;
}

bool has_repeat(const KeyRows &sorted) {
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

ConsistencyCount finish(const RqProfile &profile, std::size_t k, wide_int ordered, const std::set<KeyRows> &found,
                        bool enumerate) {
    ConsistencyCount out;
    out.profile = profile;
    out.k = k;
    out.n = profile.num_bits();
    out.ordered_count = ordered;
    out.multiset_count = found.size();
    out.distinct_set_count = static_cast<std::uint64_t>(
        std::count_if(found.begin(), found.end(), [](const KeyRows &rows) { return !has_repeat(rows); }));
    if (enumerate) {
        out.key_sets.emplace(found.begin(), found.end());
    }
    return out;
}

}  // namespace

ConsistencyCount count_consistent_keysets(const RqProfile &profile, std::size_t k, bool enumerate,
                                          std::uint64_t work_bound) {
    auto columns = column_choices(profile, k, work_bound);
    const std::size_t n = profile.num_bits();
    const std::int64_t total = static_cast<std::int64_t>(columns.total);
    std::set<KeyRows> found;

#pragma omp parallel if (total >= 4096)
    {
        std::set<KeyRows> local;
        KeyRows rows(k);
#pragma omp for schedule(static)
        for (std::int64_t idx = 0; idx < total; ++idx) {
            std::fill(rows.begin(), rows.end(), 0);
            auto rest = static_cast<std::uint64_t>(idx);
            for (std::size_t q = 0; q < n; ++q) {
                const auto &list = columns.choices[q];
                std::uint64_t mask = list[rest % list.size()];
                rest /= list.size();
                while (mask) {
                    int j = __builtin_ctzll(mask);
                    rows[static_cast<std::size_t>(j)] |= std::uint64_t{1} << q;
                    mask &= mask - 1;
                }
            }
            KeyRows canonical = rows;
            std::sort(canonical.begin(), canonical.end());
            local.insert(std::move(canonical));
        }
#pragma omp critical(pbv_enumeration_merge)
        found.merge(local);
    }
    return finish(profile, k, static_cast<wide_int>(columns.total), found, enumerate);
}

namespace {

void assign_column(const ColumnChoices &columns, std::size_t q, KeyRows &rows, std::set<KeyRows> &found) {
    if (q == columns.choices.size()) {
        KeyRows canonical = rows;
        std::sort(canonical.begin(), canonical.end());
        found.insert(std::move(canonical));
        return;
    }
    for (std::uint64_t mask : columns.choices[q]) {
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if ((mask >> j) & 1) {
                rows[j] |= std::uint64_t{1} << q;
            }
        }
        assign_column(columns, q + 1, rows, found);
        for (std::size_t j = 0; j < rows.size(); ++j) {
            rows[j] &= ~(std::uint64_t{1} << q);
        }
    }
}

}  // namespace

ConsistencyCount count_consistent_keysets_serial(const RqProfile &profile, std::size_t k, bool enumerate,
                                                 std::uint64_t work_bound) {
    auto columns = column_choices(profile, k, work_bound);
    std::set<KeyRows> found;
    KeyRows rows(k, 0);
    assign_column(columns, 0, rows, found);
    return finish(profile, k, static_cast<wide_int>(columns.total), found, enumerate);
}

Rational classical_guess_bound(const RqProfile &profile, std::size_t k) {
    return min(Rational(factorial(k), ordered_assignment_count(profile, k)), Rational(1));
}

Rational classical_guess_exact(const KeySet &keys) {
    auto profile = rq_profile(keys);
    auto mult = multiplicity(keys);
    return Rational(mult.permutations, ordered_assignment_count(profile, keys.size()));
}

}  // namespace pbv
