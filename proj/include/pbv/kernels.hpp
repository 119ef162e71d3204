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

#ifndef PBV_KERNELS_HPP
#define PBV_KERNELS_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

/// Amplitude-update kernels over a dense statevector.
///
/// Basis index bit layout: bits [0, n) hold the data register (bit q is data qubit q),
/// bit n is the target ancilla, and bits [n + 1, n + 1 + r) hold the control register.
///
/// `pbv::kernels` holds the OpenMP versions used by the simulator. `pbv::kernels::reference`
/// holds plain serial loops with the same signatures; they are kept as the test oracle and
/// the benchmark baseline, and should stay obviously correct rather than fast.
namespace pbv::kernels {

using amp_t = std::complex<double>;

/// States below this many amplitudes are processed on one thread.
inline constexpr std::size_t kParallelThreshold = std::size_t{1} << 14;

void hadamard(std::span<amp_t> amps, std::size_t qubit);
void pauli_x(std::span<amp_t> amps, std::size_t qubit);

/// X on `target` for basis states with (index & control_mask) == control_values.
void multi_controlled_x(std::span<amp_t> amps, std::uint64_t control_mask, std::uint64_t control_values,
                        std::size_t target);

/// U_i restricted to the branch (index & control_mask) == control_values: flips `target`
/// iff parity(index & key_mask) is odd. key_mask must lie inside the data register.
void controlled_key_flip(std::span<amp_t> amps, std::uint64_t key_mask, std::size_t target,
                         std::uint64_t control_mask, std::uint64_t control_values);

/// Spreads every amplitude whose control field (width `control_bits` at `control_shift`)
/// is zero evenly over control values 0..k-1, scaled by 1/sqrt(k).
void uniform_fill(std::span<amp_t> amps, std::size_t control_shift, std::size_t control_bits, std::size_t k);

/// Writes the post-oracle state directly:
///   amp(x, t, c) = (-1)^(keys[c]·x + t) / sqrt(2 k 2^n) for c < k, else 0.
void phase_branch_fill(std::span<amp_t> amps, std::size_t data_bits, std::size_t control_bits,
                       std::span<const std::uint64_t> keys);

/// P(data = y), summing |amp|^2 over all ancilla configurations.
std::vector<double> data_marginal(std::span<const amp_t> amps, std::size_t data_bits);

double norm_squared(std::span<const amp_t> amps);

namespace reference {

void hadamard(std::span<amp_t> amps, std::size_t qubit);
void pauli_x(std::span<amp_t> amps, std::size_t qubit);
void multi_controlled_x(std::span<amp_t> amps, std::uint64_t control_mask, std::uint64_t control_values,
                        std::size_t target);
void controlled_key_flip(std::span<amp_t> amps, std::uint64_t key_mask, std::size_t target,
                         std::uint64_t control_mask, std::uint64_t control_values);
void uniform_fill(std::span<amp_t> amps, std::size_t control_shift, std::size_t control_bits, std::size_t k);
void phase_branch_fill(std::span<amp_t> amps, std::size_t data_bits, std::size_t control_bits,
                       std::span<const std::uint64_t> keys);
std::vector<double> data_marginal(std::span<const amp_t> amps, std::size_t data_bits);
double norm_squared(std::span<const amp_t> amps);

}  // namespace reference

}  // namespace pbv::kernels

#endif
