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

#include "pbv/simulator.hpp"

#include <algorithm>
#include <bit>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "pbv/errors.hpp"

namespace pbv {

namespace {

constexpr double kNormTolerance = 1e-10;

void check_qubit(const StateVector &state, std::size_t qubit) {
    if (qubit >= state.num_qubits()) {
        throw InputError("qubit index " + std::to_string(qubit) + " out of range for a " +
                         std::to_string(state.num_qubits()) + "-qubit state");
    }
}

void check_normalized(const StateVector &state) {
    double n2 = state.norm_squared();
    if (std::abs(n2 - 1.0) > kNormTolerance) {
        throw InputError("state is not normalized (norm^2 = " + std::to_string(n2) + ")");
    }
}

bool is_power_of_two(std::size_t v) {
    return v != 0 && (v & (v - 1)) == 0;
}

}  // namespace

std::size_t control_bits_for(std::size_t num_keys) {
    if (num_keys <= 1) {
        return 0;
    }
    return static_cast<std::size_t>(std::bit_width(num_keys - 1));
}

StateVector::StateVector(RegisterLayout layout, std::size_t max_qubits) : layout_(layout) {
    if (layout.data_bits == 0) {
        throw InputError("data register needs at least one qubit");
    }
    if (layout.total_qubits() > max_qubits) {
        throw CapacityError("circuit needs " + std::to_string(layout.total_qubits()) + " qubits (n=" +
                            std::to_string(layout.data_bits) + ", target=1, r=" +
                            std::to_string(layout.control_bits) + "); the dense simulator is capped at " +
                            std::to_string(max_qubits));
    }
    amps_.assign(std::size_t{1} << layout.total_qubits(), amp_t{0.0, 0.0});
    amps_[0] = 1.0;
}

StateVector::StateVector(RegisterLayout layout, std::vector<amp_t> amplitudes)
    : layout_(layout), amps_(std::move(amplitudes)) {
    if (amps_.size() != (std::size_t{1} << layout.total_qubits())) {
        throw InputError("amplitude count " + std::to_string(amps_.size()) + " does not match 2^" +
                         std::to_string(layout.total_qubits()));
    }
}

std::uint64_t StateVector::index_of(std::uint64_t x, std::uint64_t t, std::uint64_t c) const {
    return (c << layout_.control_shift()) | (t << layout_.target_qubit()) | x;
}

double StateVector::norm_squared() const {
    return kernels::norm_squared(amps_);
}

void apply_hadamard(StateVector &state, std::size_t qubit) {
    check_qubit(state, qubit);
    kernels::hadamard(state.mutable_amplitudes(), qubit);
}

void apply_pauli_x(StateVector &state, std::size_t qubit) {
    check_qubit(state, qubit);
    kernels::pauli_x(state.mutable_amplitudes(), qubit);
}

void apply_multi_controlled_x(StateVector &state, std::uint64_t control_mask, std::uint64_t control_values,
                              std::size_t target) {
    check_qubit(state, target);
    if (control_mask >> state.num_qubits()) {
        throw InputError("control mask addresses qubits beyond the register");
    }
    if ((control_mask >> target) & 1) {
        throw InputError("target qubit " + std::to_string(target) + " is also a control");
    }
    if (control_values & ~control_mask) {
        throw InputError("control values set bits outside the control mask");
    }
    kernels::multi_controlled_x(state.mutable_amplitudes(), control_mask, control_values, target);
}

void apply_controlled_key_unitary(StateVector &state, std::size_t index, const SecretKey &key) {
    const auto &layout = state.layout();
    if (key.num_bits() != layout.data_bits) {
        throw InputError("key width " + std::to_string(key.num_bits()) + " does not match data register width " +
                         std::to_string(layout.data_bits));
    }
    if (index >= (std::size_t{1} << layout.control_bits)) {
        throw InputError("key index " + std::to_string(index) + " cannot be addressed by " +
                         std::to_string(layout.control_bits) + " control qubits");
    }
    kernels::controlled_key_flip(state.mutable_amplitudes(), key.value(), layout.target_qubit(),
                                 layout.control_mask(),
                                 static_cast<std::uint64_t>(index) << layout.control_shift());
}

void prepare_uniform(StateVector &state, std::size_t k) {
    const auto &layout = state.layout();
    const std::size_t capacity = std::size_t{1} << layout.control_bits;
    if (k == 0 || k > capacity) {
        throw InputError("cannot prepare a uniform superposition over " + std::to_string(k) + " values in " +
                         std::to_string(layout.control_bits) + " control qubits");
    }
    const std::uint64_t mask = layout.control_mask();
    auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) && std::abs(amps[i]) > kNormTolerance) {
            throw InputError("control register is not in |0...0>");
        }
    }
    if (k == 1) {
        return;
    }
    if (is_power_of_two(k)) {
        std::size_t width = static_cast<std::size_t>(std::countr_zero(k));
        for (std::size_t j = 0; j < width; ++j) {
            kernels::hadamard(state.mutable_amplitudes(), layout.control_shift() + j);
        }
        return;
    }
    kernels::uniform_fill(state.mutable_amplitudes(), layout.control_shift(), layout.control_bits, k);
}

std::string describe(const Gate &gate) {
    struct Visitor {
        std::string operator()(const gates::Hadamard &g) const {
            return "H q" + std::to_string(g.qubit);
        }
        std::string operator()(const gates::PauliX &g) const {
            return "X q" + std::to_string(g.qubit);
        }
        std::string operator()(const gates::PrepareUniform &g) const {
            return "PREP_UNIFORM k=" + std::to_string(g.k);
        }
        std::string operator()(const gates::ControlledKey &g) const {
            return "C-U" + std::to_string(g.index) + " key=" + g.key.str();
        }
        std::string operator()(const gates::MultiControlledX &g) const {
            return "MCX mask=" + std::to_string(g.control_mask) + " values=" + std::to_string(g.control_values) +
                   " target=q" + std::to_string(g.target);
        }
    };
    return std::visit(Visitor{}, gate);
}

OraclePath parse_oracle_path(std::string_view text) {
    if (text == "gate") {
        return OraclePath::gate;
    }
    if (text == "fast") {
        return OraclePath::fast;
    }
    throw InputError("unknown oracle path \"" + std::string(text) + "\" (expected gate or fast)");
}

const char *to_string(OraclePath path) {
    return path == OraclePath::gate ? "gate" : "fast";
}

CircuitSpec build_circuit(const KeySet &keys) {
    CircuitSpec spec{keys, RegisterLayout{keys.num_bits(), control_bits_for(keys.size())}, {}, 0, 0};
    const auto &layout = spec.layout;
    auto &g = spec.gates;

    spec.oracle_begin = g.size();
    // Target ancilla |1> then |->.
    g.push_back(gates::PauliX{layout.target_qubit()});
    g.push_back(gates::Hadamard{layout.target_qubit()});
    for (std::size_t q = 0; q < layout.data_bits; ++q) {
        g.push_back(gates::Hadamard{q});
    }
    if (layout.control_bits > 0) {
        if (keys.size() == (std::size_t{1} << layout.control_bits)) {
            for (std::size_t j = 0; j < layout.control_bits; ++j) {
                g.push_back(gates::Hadamard{layout.control_shift() + j});
            }
        } else {
            g.push_back(gates::PrepareUniform{keys.size()});
        }
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
        g.push_back(gates::ControlledKey{i, keys[i]});
    }
    spec.oracle_end = g.size();
    for (std::size_t q = 0; q < layout.data_bits; ++q) {
        g.push_back(gates::Hadamard{q});
    }
    return spec;
}

std::vector<gates::MultiControlledX> decompose(const gates::ControlledKey &block, const RegisterLayout &layout) {
    std::vector<gates::MultiControlledX> out;
    const std::uint64_t branch = static_cast<std::uint64_t>(block.index) << layout.control_shift();
    for (std::size_t q = 0; q < layout.data_bits; ++q) {
        if (block.key.bit(q)) {
            std::uint64_t data_bit = std::uint64_t{1} << q;
            out.push_back({layout.control_mask() | data_bit, branch | data_bit, layout.target_qubit()});
        }
    }
    return out;
}

void apply_gate(StateVector &state, const Gate &gate) {
    struct Visitor {
        StateVector &state;
        void operator()(const gates::Hadamard &g) const {
            apply_hadamard(state, g.qubit);
        }
        void operator()(const gates::PauliX &g) const {
            apply_pauli_x(state, g.qubit);
        }
        void operator()(const gates::PrepareUniform &g) const {
            prepare_uniform(state, g.k);
        }
        void operator()(const gates::ControlledKey &g) const {
            for (const auto &mcx : decompose(g, state.layout())) {
                apply_multi_controlled_x(state, mcx.control_mask, mcx.control_values, mcx.target);
            }
        }
        void operator()(const gates::MultiControlledX &g) const {
            apply_multi_controlled_x(state, g.control_mask, g.control_values, g.target);
        }
    };
    std::visit(Visitor{state}, gate);
}

StateVector run_oracle(const CircuitSpec &spec, OraclePath path, std::size_t max_qubits) {
    StateVector state(spec.layout, max_qubits);
    if (path == OraclePath::gate) {
        for (std::size_t i = spec.oracle_begin; i < spec.oracle_end; ++i) {
            apply_gate(state, spec.gates[i]);
        }
    } else {
        auto keys = spec.keys.values();
        kernels::phase_branch_fill(state.mutable_amplitudes(), spec.layout.data_bits, spec.layout.control_bits,
                                   keys);
    }
    return state;
}

StateVector run_circuit(const CircuitSpec &spec, OraclePath path, std::size_t max_qubits) {
    StateVector state = run_oracle(spec, path, max_qubits);
    for (std::size_t i = spec.oracle_end; i < spec.gates.size(); ++i) {
        apply_gate(state, spec.gates[i]);
    }
    return state;
}

StateVector run_circuit(const KeySet &keys, OraclePath path, std::size_t max_qubits) {
    return run_circuit(build_circuit(keys), path, max_qubits);
}

std::vector<double> exact_distribution(const StateVector &state) {
    return kernels::data_marginal(state.amplitudes(), state.layout().data_bits);
}

std::vector<amp_t> branch_amplitudes(const StateVector &state) {
    const std::size_t n = state.layout().data_bits;
    const std::uint64_t dim = std::uint64_t{1} << n;
    const std::uint64_t ancilla_configs = state.amplitudes().size() >> n;
    std::vector<amp_t> out(dim);
    for (std::uint64_t y = 0; y < dim; ++y) {
        double weight = 0.0;
        amp_t phase = 1.0;
        bool found = false;
        for (std::uint64_t anc = 0; anc < ancilla_configs; ++anc) {
            amp_t a = state.amplitude((anc << n) | y);
            double w = std::norm(a);
            weight += w;
            if (!found && w > 1e-28) {
                phase = a / std::abs(a);
                found = true;
            }
        }
        out[y] = std::sqrt(weight) * phase;
    }
    return out;
}

std::uint64_t Histogram::count(std::uint64_t outcome) const {
    auto it = counts.find(outcome);
    return it == counts.end() ? 0 : it->second;
}

double Histogram::probability(std::uint64_t outcome) const {
    return shots == 0 ? 0.0 : static_cast<double>(count(outcome)) / static_cast<double>(shots);
}

std::vector<HistogramRecord> Histogram::records() const {
    std::vector<HistogramRecord> out;
    out.reserve(counts.size());
    for (const auto &[outcome, c] : counts) {
        out.push_back({format_bits(outcome, num_bits), c, probability(outcome)});
    }
    return out;
}

OutcomeSampler::OutcomeSampler(std::span<const double> probabilities) : cdf_(probabilities.size()) {
    if (probabilities.empty()) {
        throw InputError("cannot sample from an empty distribution");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] < 0.0) {
            throw InputError("negative probability in distribution");
        }
        acc += probabilities[i];
        cdf_[i] = acc;
        if (probabilities[i] > 0.0) {
            last_nonzero_ = i;
        }
    }
    if (std::abs(acc - 1.0) > 1e-9) {
        throw InputError("distribution sums to " + std::to_string(acc) + ", not 1");
    }
}

std::uint64_t OutcomeSampler::draw(Rng &rng) const {
    double u = uniform01(rng) * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    auto idx = static_cast<std::uint64_t>(it - cdf_.begin());
    // Rounding in the running sum can leave u beyond the last nonzero bucket.
    return std::min(idx, last_nonzero_);
}

Histogram measure_data_register(const StateVector &state, std::uint64_t shots, Rng &rng) {
    if (shots == 0) {
        throw InputError("shots must be at least 1");
    }
    check_normalized(state);
    auto dist = exact_distribution(state);
    OutcomeSampler sampler(dist);
    Histogram hist{state.layout().data_bits, shots, {}};
    for (std::uint64_t s = 0; s < shots; ++s) {
        ++hist.counts[sampler.draw(rng)];
    }
    return hist;
}

std::optional<ChiSquareResult> chi_square(const Histogram &hist, std::span<const double> expected,
                                          std::string *notice) {
    constexpr double kSupportEps = 1e-12;
    std::size_t support = 0;
    for (double p : expected) {
        support += p > kSupportEps;
    }
    auto decline = [&](const char *why) -> std::optional<ChiSquareResult> {
        if (notice) {
            *notice = why;
        }
        return std::nullopt;
    };
    if (hist.shots < 2) {
        return decline("chi-square omitted: fewer than two shots");
    }
    if (support < 2) {
        return decline("chi-square omitted: exact distribution has a single outcome");
    }
    double stat = 0.0;
    const double shots = static_cast<double>(hist.shots);
    for (const auto &[outcome, c] : hist.counts) {
        if (outcome >= expected.size() || expected[outcome] <= kSupportEps) {
            // An outcome the exact distribution forbids: reject outright.
            return ChiSquareResult{std::numeric_limits<double>::infinity(), support - 1, 0.0};
        }
    }
    for (std::size_t y = 0; y < expected.size(); ++y) {
        if (expected[y] <= kSupportEps) {
            continue;
        }
        double e = shots * expected[y];
        double d = static_cast<double>(hist.count(y)) - e;
        stat += d * d / e;
    }
    boost::math::chi_squared dist(static_cast<double>(support - 1));
    double p = boost::math::cdf(boost::math::complement(dist, stat));
    return ChiSquareResult{stat, support - 1, p};
}

ClassicalOracle::ClassicalOracle(KeySet keys, std::uint64_t seed) : keys_(std::move(keys)), rng_(seed) {
}

int ClassicalOracle::query(const SecretKey &x) {
    if (x.num_bits() != keys_.num_bits()) {
        throw InputError("query width " + std::to_string(x.num_bits()) + " does not match key width " +
                         std::to_string(keys_.num_bits()));
    }
    return query(x.value());
}

int ClassicalOracle::query(std::uint64_t x) {
    if (x >> keys_.num_bits()) {
        throw InputError("query " + std::to_string(x) + " does not fit in " + std::to_string(keys_.num_bits()) +
                         " bits");
    }
    ++queries_;
    std::uint64_t i = keys_.size() == 1 ? 0 : uniform_below(rng_, keys_.size());
    return parity(x & keys_[i].value());
}

}  // namespace pbv
