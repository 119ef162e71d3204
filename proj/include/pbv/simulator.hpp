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

#ifndef PBV_SIMULATOR_HPP
#define PBV_SIMULATOR_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pbv/kernels.hpp"
#include "pbv/keyspace.hpp"
#include "pbv/rng.hpp"

namespace pbv {

using amp_t = kernels::amp_t;

/// Default cap on n + 1 + r. 24 qubits is 16M amplitudes (256 MiB).
inline constexpr std::size_t kDefaultMaxQubits = 24;

/// Qubit layout of the probabilistic-oracle circuit: data qubits 0..n-1, the target
/// ancilla at n, and control qubits at n+1..n+r.
struct RegisterLayout {
    std::size_t data_bits = 1;
    std::size_t control_bits = 0;

    std::size_t total_qubits() const {
        return data_bits + 1 + control_bits;
    }
    std::size_t target_qubit() const {
        return data_bits;
    }
    std::size_t control_shift() const {
        return data_bits + 1;
    }
    std::uint64_t control_mask() const {
        return ((std::uint64_t{1} << control_bits) - 1) << control_shift();
    }
    bool operator==(const RegisterLayout &) const = default;
};

/// ceil(log2 k) for k >= 2, and 0 for k = 1.
std::size_t control_bits_for(std::size_t num_keys);

class StateVector {
   public:
    /// |0...0> over the layout's n + 1 + r qubits. Throws CapacityError above max_qubits.
    explicit StateVector(RegisterLayout layout, std::size_t max_qubits = kDefaultMaxQubits);
    /// Takes ownership of explicit amplitudes; size must be 2^(n+1+r).
    StateVector(RegisterLayout layout, std::vector<amp_t> amplitudes);

    const RegisterLayout &layout() const {
        return layout_;
    }
    std::size_t num_qubits() const {
        return layout_.total_qubits();
    }
    std::span<const amp_t> amplitudes() const {
        return amps_;
    }
    std::span<amp_t> mutable_amplitudes() {
        return amps_;
    }
    amp_t amplitude(std::uint64_t index) const {
        return amps_[index];
    }
    /// Basis index for data value x, target bit t, control value c.
    std::uint64_t index_of(std::uint64_t x, std::uint64_t t, std::uint64_t c) const;
    double norm_squared() const;

   private:
    RegisterLayout layout_;
    std::vector<amp_t> amps_;
};

void apply_hadamard(StateVector &state, std::size_t qubit);
void apply_pauli_x(StateVector &state, std::size_t qubit);
void apply_multi_controlled_x(StateVector &state, std::uint64_t control_mask, std::uint64_t control_values,
                              std::size_t target);

/// U_i on the control branch |i>: flips the target iff key·x is odd.
void apply_controlled_key_unitary(StateVector &state, std::size_t index, const SecretKey &key);

/// Puts the control register (which must be |0...0>) into (1/sqrt k) Σ_{j<k} |j>.
/// Power-of-two k uses Hadamards on the low log2(k) control qubits; other k use direct
/// amplitude initialization.
void prepare_uniform(StateVector &state, std::size_t k);

namespace gates {
struct Hadamard {
    std::size_t qubit;
};
struct PauliX {
    std::size_t qubit;
};
struct PrepareUniform {
    std::size_t k;
};
struct ControlledKey {
    std::size_t index;
    SecretKey key;
};
struct MultiControlledX {
    std::uint64_t control_mask;
    std::uint64_t control_values;
    std::size_t target;
};
}  // namespace gates

using Gate = std::variant<gates::Hadamard, gates::PauliX, gates::PrepareUniform, gates::ControlledKey,
                          gates::MultiControlledX>;

std::string describe(const Gate &gate);

enum class OraclePath { gate, fast };

OraclePath parse_oracle_path(std::string_view text);
const char *to_string(OraclePath path);

/// The full circuit for one key set: target prep, data H layer, control preparation,
/// one controlled-U_i block per key, and the trailing data H layer. Gates in
/// [oracle_begin, oracle_end) form the oracle.
struct CircuitSpec {
    KeySet keys;
    RegisterLayout layout;
    std::vector<Gate> gates;
    std::size_t oracle_begin = 0;
    std::size_t oracle_end = 0;

    std::size_t n() const {
        return layout.data_bits;
    }
    std::size_t r() const {
        return layout.control_bits;
    }
    std::size_t total_qubits() const {
        return layout.total_qubits();
    }
};

CircuitSpec build_circuit(const KeySet &keys);

/// Multi-controlled X decomposition of a controlled-U_i block: one X on the target per
/// set key bit q, controlled on data qubit q and on the control register holding i.
std::vector<gates::MultiControlledX> decompose(const gates::ControlledKey &block, const RegisterLayout &layout);

void apply_gate(StateVector &state, const Gate &gate);

/// State right after the oracle, before the trailing H layer.
StateVector run_oracle(const CircuitSpec &spec, OraclePath path = OraclePath::fast,
                       std::size_t max_qubits = kDefaultMaxQubits);
StateVector run_circuit(const CircuitSpec &spec, OraclePath path = OraclePath::fast,
                        std::size_t max_qubits = kDefaultMaxQubits);
StateVector run_circuit(const KeySet &keys, OraclePath path = OraclePath::fast,
                        std::size_t max_qubits = kDefaultMaxQubits);

/// Marginal over the data register, indexed by outcome value.
std::vector<double> exact_distribution(const StateVector &state);

/// One amplitude per data value: the norm of its ancilla slice, carrying the phase of the
/// first nonzero ancilla entry. When each data value is tied to a single ancilla
/// configuration (distinct keys) this is the data-register state with ancillas dropped.
std::vector<amp_t> branch_amplitudes(const StateVector &state);

/// Outcome record as serialized: MSB-first outcome, count, empirical probability.
struct HistogramRecord {
    std::string outcome;
    std::uint64_t count;
    double probability;
};

struct Histogram {
    std::size_t num_bits = 0;
    std::uint64_t shots = 0;
    std::map<std::uint64_t, std::uint64_t> counts;

    std::uint64_t count(std::uint64_t outcome) const;
    double probability(std::uint64_t outcome) const;
    std::vector<HistogramRecord> records() const;
};

/// Inverse-CDF sampler over a fixed discrete distribution.
class OutcomeSampler {
   public:
    explicit OutcomeSampler(std::span<const double> probabilities);
    std::uint64_t draw(Rng &rng) const;

   private:
    std::vector<double> cdf_;
    std::uint64_t last_nonzero_ = 0;
};

Histogram measure_data_register(const StateVector &state, std::uint64_t shots, Rng &rng);

struct ChiSquareResult {
    double statistic;
    std::size_t degrees_of_freedom;
    double p_value;
};

/// Pearson goodness of fit over the support of `expected`. Returns nullopt (with
/// `notice` set) when the test is undefined: fewer than two shots or a one-point support.
std::optional<ChiSquareResult> chi_square(const Histogram &hist, std::span<const double> expected,
                                          std::string *notice = nullptr);

/// The classical black box: each query answers key_i·x for an index drawn uniformly and
/// independently. Counts every query.
class ClassicalOracle {
   public:
    ClassicalOracle(KeySet keys, std::uint64_t seed);

    int query(const SecretKey &x);
    int query(std::uint64_t x);
    std::uint64_t queries() const {
        return queries_;
    }
    std::size_t num_keys() const {
        return keys_.size();
    }
    std::size_t num_bits() const {
        return keys_.num_bits();
    }

   private:
    KeySet keys_;
    Rng rng_;
    std::uint64_t queries_ = 0;
};

}  // namespace pbv

#endif
