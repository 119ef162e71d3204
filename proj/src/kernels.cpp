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

#include "pbv/kernels.hpp"

#include <cmath>
#include <utility>

#include "pbv/keyspace.hpp"

namespace pbv::kernels {

namespace {

// Index of the i-th basis state whose bit `qubit` is zero.
inline std::uint64_t insert_zero_bit(std::uint64_t i, std::size_t qubit) {
    std::uint64_t low = i & ((std::uint64_t{1} << qubit) - 1);
    return ((i >> qubit) << (qubit + 1)) | low;
}

inline bool parallel(std::size_t size) {
    return size >= kParallelThreshold;
}

// Runs body(i) for i in [0, count). Small states skip the OpenMP runtime entirely: entering a
// parallel region costs more than the whole loop below the threshold.
template <typename Body>
inline void for_each_index(std::int64_t count, bool in_parallel, Body &&body) {
    if (in_parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) {
            body(i);
        }
    } else {
        for (std::int64_t i = 0; i < count; ++i) {
            body(i);
        }
    }
}

}  // namespace

void hadamard(std::span<amp_t> amps, std::size_t qubit) {
    const std::int64_t half = static_cast<std::int64_t>(amps.size() / 2);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    const double s = M_SQRT1_2;
    amp_t *a = amps.data();
    for_each_index(half, parallel(amps.size()), [=](std::int64_t i) {
        std::uint64_t i0 = insert_zero_bit(static_cast<std::uint64_t>(i), qubit);
        std::uint64_t i1 = i0 | bit;
        amp_t v0 = a[i0];
        amp_t v1 = a[i1];
        a[i0] = s * (v0 + v1);
        a[i1] = s * (v0 - v1);
    });
}

void pauli_x(std::span<amp_t> amps, std::size_t qubit) {
    const std::int64_t half = static_cast<std::int64_t>(amps.size() / 2);
    const std::uint64_t bit = std::uint64_t{1} << qubit;
    amp_t *a = amps.data();
    for_each_index(half, parallel(amps.size()), [=](std::int64_t i) {
        std::uint64_t i0 = insert_zero_bit(static_cast<std::uint64_t>(i), qubit);
        std::swap(a[i0], a[i0 | bit]);
    });
}

void multi_controlled_x(std::span<amp_t> amps, std::uint64_t control_mask, std::uint64_t control_values,
                        std::size_t target) {
    const std::int64_t half = static_cast<std::int64_t>(amps.size() / 2);
    const std::uint64_t bit = std::uint64_t{1} << target;
    amp_t *a = amps.data();
    for_each_index(half, parallel(amps.size()), [=](std::int64_t i) {
        std::uint64_t i0 = insert_zero_bit(static_cast<std::uint64_t>(i), target);
        if ((i0 & control_mask) == control_values) {
            std::swap(a[i0], a[i0 | bit]);
        }
    });
}

void controlled_key_flip(std::span<amp_t> amps, std::uint64_t key_mask, std::size_t target,
                         std::uint64_t control_mask, std::uint64_t control_values) {
    const std::int64_t half = static_cast<std::int64_t>(amps.size() / 2);
    const std::uint64_t bit = std::uint64_t{1} << target;
    amp_t *a = amps.data();
    for_each_index(half, parallel(amps.size()), [=](std::int64_t i) {
        std::uint64_t i0 = insert_zero_bit(static_cast<std::uint64_t>(i), target);
        if ((i0 & control_mask) == control_values && parity(i0 & key_mask)) {
            std::swap(a[i0], a[i0 | bit]);
        }
    });
}

void uniform_fill(std::span<amp_t> amps, std::size_t control_shift, std::size_t control_bits, std::size_t k) {
    const std::uint64_t low_size = std::uint64_t{1} << control_shift;
    const std::int64_t outer = static_cast<std::int64_t>(amps.size() >> (control_shift + control_bits));
    const double scale = 1.0 / std::sqrt(static_cast<double>(k));
    amp_t *a = amps.data();
    const std::int64_t cells = outer * static_cast<std::int64_t>(low_size);
    for_each_index(cells, parallel(amps.size()), [=](std::int64_t cell) {
        std::uint64_t hi = static_cast<std::uint64_t>(cell) >> control_shift;
        std::uint64_t lo = static_cast<std::uint64_t>(cell) & (low_size - 1);
        std::uint64_t base = (hi << (control_shift + control_bits)) | lo;
        amp_t v = a[base] * scale;
        for (std::uint64_t j = 0; j < k; ++j) {
            a[base | (j << control_shift)] = v;
        }
    });
}

void phase_branch_fill(std::span<amp_t> amps, std::size_t data_bits, [[maybe_unused]] std::size_t control_bits,
                       std::span<const std::uint64_t> keys) {
    const std::size_t k = keys.size();
    const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(k) * std::ldexp(1.0, static_cast<int>(data_bits)));
    const std::uint64_t data_mask = (std::uint64_t{1} << data_bits) - 1;
    const std::int64_t size = static_cast<std::int64_t>(amps.size());
    const std::uint64_t *key = keys.data();
    amp_t *a = amps.data();
    for_each_index(size, parallel(amps.size()), [=](std::int64_t i) {
        std::uint64_t idx = static_cast<std::uint64_t>(i);
        std::uint64_t c = idx >> (data_bits + 1);
        if (c >= k) {
            a[i] = 0.0;
            return;
        }
        std::uint64_t t = (idx >> data_bits) & 1;
        int sign = parity(idx & data_mask & key[c]) ^ static_cast<int>(t);
        a[i] = sign ? -scale : scale;
    });
}

std::vector<double> data_marginal(std::span<const amp_t> amps, std::size_t data_bits) {
    const std::uint64_t dim = std::uint64_t{1} << data_bits;
    const std::uint64_t ancilla_configs = amps.size() >> data_bits;
    std::vector<double> out(dim, 0.0);
    const amp_t *a = amps.data();
    double *o = out.data();
    for_each_index(static_cast<std::int64_t>(dim), parallel(amps.size()), [=](std::int64_t y) {
        double acc = 0.0;
        for (std::uint64_t anc = 0; anc < ancilla_configs; ++anc) {
            acc += std::norm(a[(anc << data_bits) | static_cast<std::uint64_t>(y)]);
        }
        o[y] = acc;
    });
    return out;
}

double norm_squared(std::span<const amp_t> amps) {
    const std::int64_t size = static_cast<std::int64_t>(amps.size());
    const amp_t *a = amps.data();
    double acc = 0.0;
    if (parallel(amps.size())) {
#pragma omp parallel for reduction(+ : acc) schedule(static)
        for (std::int64_t i = 0; i < size; ++i) {
            acc += std::norm(a[i]);
        }
    } else {
        for (std::int64_t i = 0; i < size; ++i) {
            acc += std::norm(a[i]);
        }
    }
    return acc;
}

}  // namespace pbv::kernels
