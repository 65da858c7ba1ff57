// Copyright 2026 The upsum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "upsum/circuits.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace upsum {

// ------------------------------------------------------------------ Circuit

Circuit::Circuit(unsigned n, std::vector<Gate> gates) : n_(n), gates_(std::move(gates)) {
    for (std::size_t i = 0; i < gates_.size(); ++i) {
        const Gate &g = gates_[i];
        const bool bad = g.a >= n_ || (g.kind == Gate::Kind::Cnot && (g.b >= n_ || g.a == g.b));
        if (bad) {
            throw CircuitError("gate " + std::to_string(i) + " has an invalid qubit index for " +
                               std::to_string(n_) + " qubits");
        }
        if (g.kind == Gate::Kind::H) {
            ++h_count_;
        }
    }
}

Circuit Circuit::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<Gate> gates;
    unsigned declared = 0;
    bool has_declared = false;
    unsigned max_index = 0;
    bool any = false;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op)) {
            continue;
        }
        std::transform(op.begin(), op.end(), op.begin(),
                       [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        auto fail = [&](const std::string &why) {
            return CircuitError("circuit line " + std::to_string(lineno) + ": " + why);
        };
        long a = -1;
        long b = -1;
        std::string extra;
        if (op == "QUBITS") {
            if (!(ls >> a) || a < 0 || (ls >> extra)) {
                throw fail("expected `qubits N`");
            }
            declared = static_cast<unsigned>(a);
            has_declared = true;
            continue;
        }
        if (op == "H" || op == "T") {
            if (!(ls >> a) || a < 0 || (ls >> extra)) {
                throw fail("expected `" + op + " q`");
            }
            gates.push_back(op == "H" ? Gate::h(static_cast<unsigned>(a))
                                      : Gate::t(static_cast<unsigned>(a)));
        } else if (op == "CNOT") {
            if (!(ls >> a >> b) || a < 0 || b < 0 || (ls >> extra)) {
                throw fail("expected `CNOT c t`");
            }
            gates.push_back(Gate::cnot(static_cast<unsigned>(a), static_cast<unsigned>(b)));
            max_index = std::max(max_index, static_cast<unsigned>(b));
        } else {
            throw fail("unknown gate '" + op + "'");
        }
        max_index = std::max(max_index, static_cast<unsigned>(a));
        any = true;
    }
    const unsigned n = has_declared ? declared : (any ? max_index + 1 : 0);
    return Circuit(n, std::move(gates));
}

std::string Circuit::to_text() const {
    std::string s = "qubits " + std::to_string(n_) + "\n";
    for (const Gate &g : gates_) {
        switch (g.kind) {
        case Gate::Kind::H:
            s += "H " + std::to_string(g.a) + "\n";
            break;
        case Gate::Kind::T:
            s += "T " + std::to_string(g.a) + "\n";
            break;
        case Gate::Kind::Cnot:
            s += "CNOT " + std::to_string(g.a) + " " + std::to_string(g.b) + "\n";
            break;
        }
    }
    return s;
}

bool Circuit::is_diagonal() const noexcept {
    return std::all_of(gates_.begin(), gates_.end(),
                       [](const Gate &g) { return g.kind == Gate::Kind::T; });
}

std::size_t basis_index(const BitString &state) {
    std::size_t idx = 0;
    for (std::size_t q = 0; q < state.size(); ++q) {
        if (state[q]) {
            idx |= std::size_t{1} << q;
        }
    }
    return idx;
}

// ----------------------------------------------------------------- path sum

namespace {

constexpr unsigned kPathSumMaxQubits = 62;
constexpr unsigned kPathSumMaxHadamards = 62;

// Final bit q equals parity(config & mask) whenever no H lies in its
// backward CNOT light cone; such bits are known early and prune branches.
struct Check {
    std::uint64_t mask;
    unsigned qubit;
};

class PathWalker {
  public:
    PathWalker(const Circuit &c, std::uint64_t out, bool prune) : c_(c), out_(out), prune_(prune) {
        const auto &gates = c.gates();
        const std::size_t g = gates.size();
        remaining_h_.assign(g + 1, 0);
        for (std::size_t i = g; i-- > 0;) {
            remaining_h_[i] = remaining_h_[i + 1] + (gates[i].kind == Gate::Kind::H ? 1 : 0);
        }
        if (!prune_) {
            return;
        }
        checks_.resize(g + 1);
        std::vector<std::uint64_t> dep(c.qubits());
        std::vector<bool> tainted(c.qubits(), false);
        for (unsigned q = 0; q < c.qubits(); ++q) {
            dep[q] = std::uint64_t{1} << q;
        }
        for (std::size_t i = g + 1; i-- > 0;) {
            if (i < g) {
                const Gate &gate = gates[i];
                for (unsigned q = 0; q < c.qubits(); ++q) {
                    if (gate.kind == Gate::Kind::Cnot && ((dep[q] >> gate.b) & 1U)) {
                        dep[q] ^= std::uint64_t{1} << gate.a;
                    } else if (gate.kind == Gate::Kind::H && ((dep[q] >> gate.a) & 1U)) {
                        tainted[q] = true;
                    }
                }
            }
            // Only consulted right before a branching.
            if (i == g || gates[i].kind == Gate::Kind::H) {
                for (unsigned q = 0; q < c.qubits(); ++q) {
                    if (!tainted[q]) {
                        checks_[i].push_back({dep[q], q});
                    }
                }
            }
        }
    }

    void walk(std::size_t i, std::uint64_t config, unsigned phase) {
        const auto &gates = c_.gates();
        for (; i < gates.size(); ++i) {
            const Gate &g = gates[i];
            if (g.kind == Gate::Kind::Cnot) {
                config ^= ((config >> g.a) & 1U) << g.b;
            } else if (g.kind == Gate::Kind::T) {
                phase += ((config >> g.a) & 1U) ? 15U : 1U;
            } else {
                if (prune_ && !consistent(i, config)) {
                    pruned_ += std::uint64_t{1} << remaining_h_[i];
                    return;
                }
                const std::uint64_t a = (config >> g.a) & 1U;
                const std::uint64_t cleared = config & ~(std::uint64_t{1} << g.a);
                walk(i + 1, cleared, phase);
                walk(i + 1, cleared | (std::uint64_t{1} << g.a), phase + (a ? 8U : 0U));
                return;
            }
        }
        ++examined_;
        if (config == out_) {
            ++buckets_[phase & 15U];
        }
    }

    [[nodiscard]] const std::array<std::uint64_t, 16> &buckets() const { return buckets_; }
    [[nodiscard]] std::uint64_t examined() const { return examined_; }
    [[nodiscard]] std::uint64_t pruned() const { return pruned_; }

  private:
    [[nodiscard]] bool consistent(std::size_t i, std::uint64_t config) const {
        for (const Check &chk : checks_[i]) {
            const auto bit = static_cast<std::uint64_t>(std::popcount(config & chk.mask) & 1);
            if (bit != ((out_ >> chk.qubit) & 1U)) {
                return false;
            }
        }
        return true;
    }

    const Circuit &c_;
    std::uint64_t out_;
    bool prune_;
    std::vector<std::uint32_t> remaining_h_;
    std::vector<std::vector<Check>> checks_;
    std::array<std::uint64_t, 16> buckets_{};
    std::uint64_t examined_ = 0;
    std::uint64_t pruned_ = 0;
};

ExactAmplitude amplitude_from_sixteenths(const std::array<std::uint64_t, 16> &buckets,
                                         std::int64_t half_exponent) {
    ExactAmplitude a;
    for (int k = 0; k < 16; ++k) {
        a.add_term(PhaseFraction::from_grid(k, 4), DyadicRational(buckets[k]));
    }
    return ExactAmplitude(a.coeffs(), half_exponent);
}

} // namespace

PathSumResult pathsum_amplitude(const Circuit &c, const BitString &in_state,
                                const BitString &out_state, const PathSumOptions &options) {
    if (in_state.size() != c.qubits() || out_state.size() != c.qubits()) {
        throw CircuitError("basis states must have exactly " + std::to_string(c.qubits()) +
                           " bits");
    }
    if (c.qubits() > kPathSumMaxQubits || c.hadamard_count() > kPathSumMaxHadamards) {
        throw CircuitError("path sum supports at most 62 qubits and 62 Hadamard gates");
    }
    const auto in = static_cast<std::uint64_t>(basis_index(in_state));
    const auto out = static_cast<std::uint64_t>(basis_index(out_state));
    PathWalker walker(c, out, options.prune);
    walker.walk(0, in, 0);
    PathSumResult r;
    r.amplitude = amplitude_from_sixteenths(walker.buckets(), c.hadamard_count());
    r.paths_examined = walker.examined();
    r.path_count = walker.examined() + walker.pruned();
    return r;
}

// -------------------------------------------------------------- state vector

std::vector<std::complex<double>> statevector_oracle(const Circuit &c, const BitString &in_state) {
    if (c.qubits() > kStateVectorMaxQubits) {
        throw CircuitError("state vector oracle is limited to " +
                           std::to_string(kStateVectorMaxQubits) + " qubits");
    }
    if (in_state.size() != c.qubits()) {
        throw CircuitError("input state must have exactly " + std::to_string(c.qubits()) + " bits");
    }
    const std::size_t dim = std::size_t{1} << c.qubits();
    std::vector<std::complex<double>> psi(dim);
    psi[basis_index(in_state)] = 1.0;
    const double r = std::numbers::sqrt2 / 2.0;
    const std::complex<double> t0 = std::polar(1.0, std::numbers::pi / 8.0);
    const std::complex<double> t1 = std::conj(t0);
    for (const Gate &g : c.gates()) {
        const std::size_t ma = std::size_t{1} << g.a;
        switch (g.kind) {
        case Gate::Kind::H:
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & ma) == 0) {
                    const std::complex<double> x = psi[i];
                    const std::complex<double> y = psi[i | ma];
                    psi[i] = r * (x + y);
                    psi[i | ma] = r * (x - y);
                }
            }
            break;
        case Gate::Kind::T:
            for (std::size_t i = 0; i < dim; ++i) {
                psi[i] *= (i & ma) ? t1 : t0;
            }
            break;
        case Gate::Kind::Cnot: {
            const std::size_t mb = std::size_t{1} << g.b;
            for (std::size_t i = 0; i < dim; ++i) {
                if ((i & ma) && !(i & mb)) {
                    std::swap(psi[i], psi[i | mb]);
                }
            }
            break;
        }
        }
    }
    return psi;
}

// ------------------------------------------------------------- phase oracle

ExactAmplitude phase_oracle_sigma(unsigned n, std::uint64_t t, Dialect dialect,
                                  const InstructionSet &isa) {
    if (n > 20) {
        throw std::invalid_argument("phase_oracle_sigma supports n <= 20");
    }
    if (t < 1) {
        throw std::invalid_argument("phase_oracle_sigma needs t >= 1");
    }
    std::map<PhaseFraction, std::uint64_t> counts;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
        FixedBits source(BitString::from_uint(b, n));
        const ExecResult r = run(source, t, dialect, isa);
        ++counts[r.halted() ? r.phase : PhaseFraction{}];
    }
    ExactAmplitude sum;
    for (const auto &[q, k] : counts) {
        sum.add_term(q, DyadicRational(mpz_class(static_cast<unsigned long>(k)), n));
    }
    return sum;
}

// ---------------------------------------------------------------- real part

ExactAmplitude diagonal_expectation(const Circuit &v) {
    if (!v.is_diagonal()) {
        throw CircuitError("diagonal_expectation needs a circuit of T gates only");
    }
    if (v.qubits() > 20) {
        throw CircuitError("diagonal_expectation supports at most 20 qubits");
    }
    std::map<std::int64_t, std::uint64_t> counts;
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << v.qubits()); ++b) {
        std::int64_t k = 0;
        for (const Gate &g : v.gates()) {
            k += ((b >> g.a) & 1U) ? -1 : 1;
        }
        ++counts[k];
    }
    ExactAmplitude sum;
    for (const auto &[k, m] : counts) {
        sum.add_term(PhaseFraction::from_grid(k, 4),
                     DyadicRational(mpz_class(static_cast<unsigned long>(m)), v.qubits()));
    }
    return sum;
}

RealPartConstruction realpart_construction(const Circuit &v) {
    if (!v.is_diagonal()) {
        throw CircuitError("real-part construction is only defined for diagonal circuits "
                           "(T gates only); found H or CNOT");
    }
    const unsigned n = v.qubits();
    const unsigned anc = n;
    std::vector<Gate> gates;
    for (unsigned q = 0; q <= n; ++q) {
        gates.push_back(Gate::h(q));
    }
    for (const Gate &g : v.gates()) {
        gates.push_back(Gate::cnot(g.a, anc));
        gates.push_back(Gate::t(anc));
        gates.push_back(Gate::cnot(g.a, anc));
    }
    for (unsigned q = 0; q <= n; ++q) {
        gates.push_back(Gate::h(q));
    }
    RealPartConstruction out;
    out.circuit = Circuit(n + 1, std::move(gates));
    out.initial_state = BitString::from_uint(0, n + 1);
    out.measured_outcome = out.initial_state;
    out.probability_factor = 1.0;
    out.recipe = "start in |0^" + std::to_string(n + 1) +
                 ">, run the circuit, measure all qubits; P(0^" + std::to_string(n + 1) +
                 ") = (Re <Psi|V|Psi>)^2 with Psi uniform on qubits 0.." +
                 std::to_string(n == 0 ? 0 : n - 1) + " and qubit " + std::to_string(anc) +
                 " the ancilla";
    return out;
}

} // namespace upsum
