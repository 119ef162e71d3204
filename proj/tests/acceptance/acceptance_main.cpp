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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pbv/adversary.hpp"
#include "pbv/analytics.hpp"
#include "pbv/cli.hpp"
#include "pbv/simulator.hpp"

using namespace pbv;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
   public:
    void require(bool ok, const std::string &what) {
        if (!ok && out_.pass) {
            out_.pass = false;
            out_.detail = what;
        }
    }
    void note(const std::string &text) {
        notes_ += (notes_.empty() ? "" : "; ") + text;
    }
    Outcome finish() {
        if (out_.pass) out_.detail = notes_;
        return out_;
    }

   private:
    Outcome out_;
    std::string notes_;
};

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

KeySet keys_of(const char *text) {
    return KeySet::parse_list(text);
}

// Visits every k-subset of {0, ..., 2^n - 1} whose smallest element is `first`, in
// lexicographic order.
template <typename F>
void for_each_subset_from(std::size_t n, std::size_t k, std::uint64_t first, F &&visit) {
    const std::uint64_t universe = std::uint64_t{1} << n;
    if (first + k > universe) return;
    std::vector<std::uint64_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = first + i;
    for (;;) {
        visit(idx);
        std::size_t i = k;
        while (i > 1 && idx[i - 1] == universe - k + (i - 1)) --i;
        if (i == 1) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// Largest output_state_deviation over every distinct k-subset; subsets are split by smallest element
// across threads.
struct SweepResult {
    double worst = 0.0;
    std::uint64_t sets = 0;
};

double output_state_deviation(const KeySet &keys, OraclePath path);

SweepResult sweep_subsets(std::size_t n, std::size_t k, OraclePath path) {
    const std::int64_t firsts = static_cast<std::int64_t>(std::uint64_t{1} << n);
    double worst = 0.0;
    std::uint64_t sets = 0;
#pragma omp parallel for schedule(dynamic) reduction(max : worst) reduction(+ : sets)
    for (std::int64_t f = 0; f < firsts; ++f) {
        for_each_subset_from(n, k, static_cast<std::uint64_t>(f), [&](const std::vector<std::uint64_t> &values) {
            std::vector<SecretKey> ks;
            ks.reserve(values.size());
            for (auto v : values) ks.emplace_back(v, n);
            worst = std::max(worst, output_state_deviation(KeySet(ks), path));
            ++sets;
        });
    }
    return {worst, sets};
}

// Full-register form of the distinct-key output state: amp(x, t, c) = (-1)^t / sqrt(2k) when
// c < k and x = s_c, else 0. Returns the largest deviation, plus the branch-amplitude deviation
// from 1/sqrt(k) on the keys and 0 elsewhere.
double output_state_deviation(const KeySet &keys, OraclePath path) {
    StateVector state = run_circuit(keys, path);
    const auto &layout = state.layout();
    const std::size_t k = keys.size();
    const double a = 1.0 / std::sqrt(2.0 * static_cast<double>(k));
    const std::uint64_t data_mask = (std::uint64_t{1} << layout.data_bits) - 1;
    // Squared deviations throughout; one sqrt at the end.
    double dev2 = 0.0;
    const auto amps = state.amplitudes();
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        std::uint64_t c = i >> layout.control_shift();
        amp_t want = 0.0;
        if (c < k && (i & data_mask) == keys[c].value()) {
            want = ((i >> layout.target_qubit()) & 1) ? -a : a;
        }
        dev2 = std::max(dev2, std::norm(amps[i] - want));
    }
    auto branch = branch_amplitudes(state);
    std::vector<double> want(branch.size(), 0.0);
    for (const auto &key : keys) want[key.value()] = 1.0 / std::sqrt(static_cast<double>(k));
    for (std::size_t y = 0; y < branch.size(); ++y) dev2 = std::max(dev2, std::norm(branch[y] - want[y]));
    return std::sqrt(dev2);
}

Outcome criterion_output_state() {
    Check check;
    std::uint64_t sets = 0;
    double worst = 0.0;
    for (std::size_t n = 1; n <= 5; ++n) {
        for (std::size_t k : {1, 2, 4, 8}) {
            if (k > (std::size_t{1} << n)) continue;
            auto sweep = sweep_subsets(n, k, OraclePath::fast);
            worst = std::max(worst, sweep.worst);
            sets += sweep.sets;
        }
    }
    check.require(worst <= 1e-10, "max deviation " + fmt(worst));
    // Gate path over the same space where it is cheap: every set with n <= 4.
    double gate_worst = 0.0;
    std::uint64_t gate_sets = 0;
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t k : {1, 2, 4, 8}) {
            if (k > (std::size_t{1} << n)) continue;
            auto sweep = sweep_subsets(n, k, OraclePath::gate);
            gate_worst = std::max(gate_worst, sweep.worst);
            gate_sets += sweep.sets;
        }
    }
    check.require(gate_worst <= 1e-10, "gate path max deviation " + fmt(gate_worst));
    check.note(std::to_string(sets) + " key sets, max deviation " + fmt(worst, 3));
    check.note("gate path " + std::to_string(gate_sets) + " sets, max deviation " + fmt(gate_worst, 3));
    return check.finish();
}

void histogram_check(Check &check, const char *keys_text, std::uint64_t seed, const std::vector<double> &expected_by_key,
                     const std::vector<std::uint64_t> &outcomes) {
    const std::uint64_t shots = 1024;
    auto state = run_circuit(keys_of(keys_text));
    auto dist = exact_distribution(state);
    Rng rng(seed);
    auto hist = measure_data_register(state, shots, rng);
    std::string counts;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        double p = expected_by_key[i];
        double sigma = std::sqrt(p * (1 - p) / static_cast<double>(shots));
        double phat = hist.probability(outcomes[i]);
        check.require(std::abs(dist[outcomes[i]] - p) <= 1e-9, std::string(keys_text) + " exact distribution off");
        check.require(std::abs(phat - p) <= 3 * sigma, std::string(keys_text) + " outcome " +
                                                         format_bits(outcomes[i], hist.num_bits) + " at " +
                                                         fmt(phat) + ", expected " + fmt(p) + " +- " + fmt(3 * sigma));
        counts += (counts.empty() ? "" : ",") + std::to_string(hist.count(outcomes[i]));
    }
    std::uint64_t inside = 0;
    for (auto o : outcomes) inside += hist.count(o);
    check.require(inside == shots, std::string(keys_text) + " shots outside the support");
    std::string notice;
    auto chi = chi_square(hist, dist, &notice);
    check.require(chi.has_value(), notice);
    if (chi) {
        check.require(chi->p_value > 0.001, std::string(keys_text) + " chi-square p " + fmt(chi->p_value));
        check.note(std::string("{") + keys_text + "} counts " + counts + " chi2 p=" + fmt(chi->p_value, 3));
    }
}

Outcome criterion_two_and_four_keys() {
    Check check;
    histogram_check(check, "011,101", 5, {0.5, 0.5}, {0b011, 0b101});
    histogram_check(check, "001,010,011,101", 6, {0.25, 0.25, 0.25, 0.25}, {0b001, 0b010, 0b011, 0b101});
    return check.finish();
}

Outcome criterion_degenerate() {
    Check check;
    histogram_check(check, "010,011,011,101", 9, {0.25, 0.5, 0.25}, {0b010, 0b011, 0b101});
    auto dist = exact_distribution(run_circuit(keys_of("010,011,011,101"), OraclePath::gate));
    check.require(std::abs(dist[0b011] - 0.5) <= 1e-9, "gate path exact distribution off");
    return check.finish();
}

Outcome criterion_coupon_formulas() {
    Check check;
    for (std::uint64_t m = 2; m <= 64; ++m) {
        Rational closed = Rational(1) - Rational(1, checked_pow(2, m - 1));
        auto p = prob_all_keys(2, m);
        check.require(p.value && *p.value == closed, "prob_all_keys(2, " + std::to_string(m) + ")");
        check.require(prob_two_keys(m) == closed, "prob_two_keys(" + std::to_string(m) + ")");
    }
    for (std::uint64_t k = 1; k <= 6; ++k)
        for (std::uint64_t m = 0; m < k; ++m) {
            auto p = prob_all_keys(k, m);
            check.require(p.value && *p.value == Rational(0), "prob_all_keys(" + std::to_string(k) + ", " +
                                                                  std::to_string(m) + ") nonzero");
        }
    for (std::uint64_t k = 1; k <= 5; ++k)
        for (std::uint64_t m = 0; m <= 10; ++m) {
            check.require(surjection_count(m, k) == static_cast<wide_int>(oracles::brute_surjections(m, k)),
                          "surjection_count(" + std::to_string(m) + ", " + std::to_string(k) + ")");
        }
    check.note("P(2,m) for m=2..64, P(k,m<k) for k<=6, 55 surjection counts");
    return check.finish();
}

Outcome criterion_enumeration() {
    Check check;
    auto start = std::chrono::steady_clock::now();
    RqProfile profile{{3, 3, 1, 2}};
    auto count = count_consistent_keysets(profile, 4, true);
    auto bound = classical_guess_bound(profile, 4);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::vector<std::uint64_t> truth{0b0001, 0b0011, 0b1011, 0b1110};
    bool truth_found = false;
    for (const auto &set : *count.key_sets) truth_found |= set == truth;
    check.require(count.distinct_set_count == 12, "distinct sets " + std::to_string(count.distinct_set_count));
    check.require(truth_found, "true key set missing from the enumeration");
    check.require(count.ordered_count == 384, "ordered count " + to_string(count.ordered_count));
    check.require(bound == Rational(1, 16), "bound " + bound.str());
    check.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    check.note("12 sets of distinct keys (" + std::to_string(count.multiset_count) +
               " multisets when repeats are allowed), ordered 384, bound " + bound.str() + ", " + fmt(secs, 3) + " s");
    return check.finish();
}

Outcome criterion_coupon_experiment() {
    Check check;
    const std::uint64_t trials = 100'000;
    const std::vector<const char *> key_sets{"01,10", "001,010,100", "001,010,011,101"};
    auto start = std::chrono::steady_clock::now();
    double worst_z = 0.0;
    int combos = 0;
    for (std::size_t i = 0; i < key_sets.size(); ++i) {
        auto keys = keys_of(key_sets[i]);
        const std::uint64_t k = keys.size();
        for (std::uint64_t m = k; m <= 3 * k; ++m) {
            auto res = quantum_coupon_experiment(keys, m, trials, 1000 * k + m);
            double p = res.exact.approx();
            double sigma = res.sigma();
            double z = std::abs(res.estimate() - p) / sigma;
            worst_z = std::max(worst_z, z);
            ++combos;
            check.require(z <= 3.0, "k=" + std::to_string(k) + " m=" + std::to_string(m) + " estimate " +
                                        fmt(res.estimate()) + " vs " + fmt(p) + " (" + fmt(z, 3) + " sigma)");
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    check.require(secs < 60.0, "runtime " + fmt(secs) + " s");
    check.note(std::to_string(combos) + " (k, m) pairs, worst " + fmt(worst_z, 3) + " sigma, " + fmt(secs, 3) + " s");
    return check.finish();
}

Outcome criterion_oracle_paths() {
    Check check;
    std::mt19937_64 gen(20261016);
    double worst = 0.0;
    int with_k3 = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t k = trial < 10 ? 3 : 1 + gen() % 8;
        std::size_t min_n = std::max<std::size_t>(1, control_bits_for(k));
        std::size_t n = min_n + gen() % (6 - min_n);
        std::vector<SecretKey> ks;
        for (std::size_t i = 0; i < k; ++i) ks.emplace_back(gen() & ((std::uint64_t{1} << n) - 1), n);
        KeySet keys(ks);
        auto spec = build_circuit(keys);
        auto gate = run_circuit(spec, OraclePath::gate);
        auto fast = run_circuit(spec, OraclePath::fast);
        for (std::size_t i = 0; i < gate.amplitudes().size(); ++i)
            worst = std::max(worst, std::abs(gate.amplitude(i) - fast.amplitude(i)));
        if (k == 3) ++with_k3;
    }
    check.require(worst <= 1e-10, "max path difference " + fmt(worst));

    // prepare_uniform for k = 3: control amplitudes 1/sqrt(3) on 0, 1, 2 and 0 on 3.
    StateVector prep(RegisterLayout{2, 2});
    prepare_uniform(prep, 3);
    double prep_dev = 0.0;
    for (std::uint64_t c = 0; c < 4; ++c) {
        double want = c < 3 ? 1.0 / std::sqrt(3.0) : 0.0;
        prep_dev = std::max(prep_dev, std::abs(prep.amplitude(prep.index_of(0, 0, c)) - amp_t(want)));
    }
    check.require(prep_dev <= 1e-10, "prepare_uniform(3) deviation " + fmt(prep_dev));
    auto three = keys_of("0011,0101,0110");
    auto branch = branch_amplitudes(run_circuit(three, OraclePath::gate));
    for (const auto &key : three)
        check.require(std::abs(branch[key.value()] - amp_t(1.0 / std::sqrt(3.0))) <= 1e-10, "k=3 branch amplitude");
    check.note("100 cases (" + std::to_string(with_k3) + " with k=3), max difference " + fmt(worst, 3));
    return check.finish();
}

Outcome criterion_classical() {
    Check check;
    std::uint64_t keys_checked = 0;
    for (std::size_t n = 1; n <= 8; ++n) {
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            ClassicalOracle oracle(KeySet({SecretKey(v, n)}), v);
            SecretKey found = classical_bv_single_key(oracle);
            check.require(found.value() == v && oracle.queries() == n,
                          "single-key BV failed on " + format_bits(v, n));
            ++keys_checked;
        }
    }
    auto example = keys_of("0001,0011,1011,1110");
    ClassicalOracle oracle(example, 31);
    auto est = estimate_rq(oracle, 10'000);
    auto rounded = est.rounded(4).msb_first();
    check.require(rounded == std::vector<std::size_t>{2, 1, 3, 3}, "estimate_rq rounded profile mismatch");

    const std::uint64_t runs = 100'000;
    auto attack = classical_guess_attack(rq_profile(example), 4, example, runs, 47);
    const double p = 1.0 / 12.0;
    const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(runs));
    check.require(attack.candidates == 12, "candidate count " + std::to_string(attack.candidates));
    check.require(std::abs(attack.frequency() - p) <= 3 * sigma,
                  "guess frequency " + fmt(attack.frequency()) + " vs 1/12 +- " + fmt(3 * sigma));
    std::string raw;
    for (auto it = est.estimates.rbegin(); it != est.estimates.rend(); ++it) raw += (raw.empty() ? "" : ",") + fmt(*it, 4);
    check.note(std::to_string(keys_checked) + " single keys; r_q estimate (" + raw + ") -> (2,1,3,3); guess " +
               fmt(attack.frequency(), 4) + " vs " + fmt(p, 4));
    return check.finish();
}

std::string strip_wall_time(const std::string &text) {
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line))
        if (line.find("wall_time_seconds") == std::string::npos) kept += line + "\n";
    return kept;
}

std::string run_in_process(const std::vector<std::string> &args, int &code) {
    std::ostringstream out, err;
    code = cli::run(args, out, err);
    return out.str();
}

std::string run_subprocess(const std::vector<std::string> &args, int &code) {
    std::string command = PBV_CLI_PATH;
    for (const auto &a : args) command += " '" + a + "'";
    command += " 2>/dev/null";
    std::string output;
    FILE *pipe = popen(command.c_str(), "r");
    if (!pipe) {
        code = -1;
        return output;
    }
    char buffer[4096];
    std::size_t got;
    while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, got);
    code = pclose(pipe);
    return output;
}

Outcome criterion_determinism() {
    Check check;
    const std::vector<std::vector<std::string>> commands{
        {"simulate", "--keys", "001,010,011", "--amplitudes"},
        {"sample", "--keys", "010,011,011,101", "--shots", "1024"},
        {"analyze", "--keys", "0001,0011,1011,1110", "--enumerate"},
        {"analyze", "--k", "2..4", "--m", "1..12"},
        {"adversary", "--keys", "0001,0011,1011,1110", "--m", "16", "--trials", "5000"},
    };
    int runs = 0;
    for (const auto &base : commands) {
        for (const char *format : {"json", "csv", "text"}) {
            auto args = base;
            args.insert(args.end(), {"--seed", "2026", "--format", format});
            std::string label = base[0] + " (" + format + ")";
            int c1 = 0, c2 = 0, c3 = 0;
            auto a = run_in_process(args, c1);
            auto b = run_in_process(args, c2);
            auto c = run_subprocess(args, c3);
            check.require(c1 == 0 && c2 == 0 && c3 == 0, label + " exited nonzero");
            check.require(strip_wall_time(a) == strip_wall_time(b), label + " differs between in-process reruns");
            check.require(strip_wall_time(a) == strip_wall_time(c), label + " differs from a separate process");
            runs += 3;
        }
    }
    check.note(std::to_string(runs) + " runs over 15 command/format pairs, identical after dropping wall_time_seconds");
    return check.finish();
}

}  // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"amplitude form of the output state, every distinct key set, n<=5, k in {1,2,4,8}", criterion_output_state},
        {"1024-shot histograms for two and four keys", criterion_two_and_four_keys},
        {"duplicate-key histogram (0.25, 0.5, 0.25)", criterion_degenerate},
        {"coupon-collector closed forms and surjection counts", criterion_coupon_formulas},
        {"column-profile enumeration for (2,1,3,3)", criterion_enumeration},
        {"coupon experiment, k in {2,3,4}, m in k..3k, 1e5 trials", criterion_coupon_experiment},
        {"gate and fast oracle paths agree", criterion_oracle_paths},
        {"classical baselines", criterion_classical},
        {"CLI determinism", criterion_determinism},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception &e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !out.pass;
        std::cout << (out.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " | "
                  << out.detail << " | " << fmt(secs, 3) << " s" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
