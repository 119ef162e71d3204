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

#include <cmath>
#include <utility>

#include "pbv/kernels.hpp"

namespace pbv::kernels::reference {

namespace {

bool odd_parity(std::uint64_t v) {
    bool p = false;
    while (v) {
        p = !p;
        v &= v - 1;
    }
    return p;
}

}  // namespace

void hadamard(std::span<amp_t> amps, std::size_t qubit) {
    const std::size_t stride = std::size_t{1} << qubit;
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
        for (std::size_t j = block; j < block + stride; ++j) {
            amp_t v0 = amps[j];
            amp_t v1 = amps[j + stride];
            amps[j] = (v0 + v1) * s;
            amps[j + stride] = (v0 - v1) * s;
        }
    }
}

void pauli_x(std::span<amp_t> amps, std::size_t qubit) {
    const std::size_t stride = std::size_t{1} << qubit;
    for (std::size_t block = 0; block < amps.size(); block += 2 * stride) {
        for (std::size_t j = block; j < block + stride; ++j) {
            std::swap(amps[j], amps[j + stride]);
        }
    }
}

void multi_controlled_x(std::span<amp_t> amps, std::uint64_t control_mask, std::uint64_t control_values,
                        std::size_t target) {
    const std::uint64_t bit = std::uint64_t{1} << target;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (!(i & bit) && (i & control_mask) == control_values) {
            std::swap(amps[i], amps[i | bit]);
        }
    }
}

void controlled_key_flip(std::span<amp_t> amps, std::uint64_t key_mask, std::size_t target,
                         std::uint64_t control_mask, std::uint64_t control_values) {
    const std::uint64_t bit = std::uint64_t{1} << target;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (!(i & bit) && (i & control_mask) == control_values && odd_parity(i & key_mask)) {
            std::swap(amps[i], amps[i | bit]);
        }
    }
}

void uniform_fill(std::span<amp_t> amps, std::size_t control_shift, std::size_t control_bits, std::size_t k) {
    const std::uint64_t field = ((std::uint64_t{1} << control_bits) - 1) << control_shift;
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & field) != 0) {
            continue;
        }
        amp_t v = amps[i] / std::sqrt(static_cast<double>(k));
        for (std::uint64_t j = 0; j < k; ++j) {
            amps[i | (j << control_shift)] = v;
        }
    }
}

void phase_branch_fill(std::span<amp_t> amps, std::size_t data_bits, std::size_t control_bits,
                       std::span<const std::uint64_t> keys) {
    const std::uint64_t data_dim = std::uint64_t{1} << data_bits;
    const std::uint64_t control_dim = std::uint64_t{1} << control_bits;
    const double norm = std::sqrt(2.0 * static_cast<double>(keys.size()) * static_cast<double>(data_dim));
    for (std::uint64_t c = 0; c < control_dim; ++c) {
        for (std::uint64_t t = 0; t < 2; ++t) {
            for (std::uint64_t x = 0; x < data_dim; ++x) {
                std::uint64_t idx = (c << (data_bits + 1)) | (t << data_bits) | x;
                if (c >= keys.size()) {
                    amps[idx] = 0.0;
                    continue;
                }
                bool negative = odd_parity(x & keys[c]) != (t == 1);
                amps[idx] = (negative ? -1.0 : 1.0) / norm;
            }
        }
    }
}

std::vector<double> data_marginal(std::span<const amp_t> amps, std::size_t data_bits) {
    const std::uint64_t mask = (std::uint64_t{1} << data_bits) - 1;
    std::vector<double> out(std::size_t{1} << data_bits, 0.0);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        out[i & mask] += std::norm(amps[i]);
    }
    return out;
}

double norm_squared(std::span<const amp_t> amps) {
    double acc = 0.0;
    for (const auto &a : amps) {
        acc += std::norm(a);
    }
    return acc;
}

}  // namespace pbv::kernels::reference
