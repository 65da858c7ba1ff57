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

#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "upsum/bitcore.hpp"
#include "upsum/machine.hpp"
#include "upsum/pathsum.hpp"

namespace upsum {

/**
 * Gates of the {CNOT, H, pi/8} set. The pi/8 gate follows the symmetric
 * convention T = diag(e^{+i pi/8}, e^{-i pi/8}), i.e. +1/16 turn on |0> and
 * -1/16 turn on |1>; it differs from diag(1, e^{i pi/4}) by a global phase.
 */
struct Gate {
    enum class Kind : std::uint8_t { Cnot, H, T };
    Kind kind = Kind::H;
    unsigned a = 0; // target for H/T, control for CNOT
    unsigned b = 0; // CNOT target

    static Gate h(unsigned q) { return {Kind::H, q, 0}; }
    static Gate t(unsigned q) { return {Kind::T, q, 0}; }
    static Gate cnot(unsigned control, unsigned target) { return {Kind::Cnot, control, target}; }

    friend bool operator==(const Gate &, const Gate &) = default;
};

class CircuitError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Qubit q is character q of a basis-state BitString.
class Circuit {
  public:
    Circuit() = default;
    /// Throws CircuitError on out-of-range qubits or CNOT with control == target.
    Circuit(unsigned n, std::vector<Gate> gates);

    /// One gate per line: `H q`, `T q`, `CNOT c t`. Blank lines and `#`
    /// comments are ignored. n is `qubits N` if given, else 1 + max index.
    static Circuit parse(std::string_view text);
    [[nodiscard]] std::string to_text() const;

    [[nodiscard]] unsigned qubits() const noexcept { return n_; }
    [[nodiscard]] const std::vector<Gate> &gates() const noexcept { return gates_; }
    [[nodiscard]] unsigned hadamard_count() const noexcept { return h_count_; }
    /// Only T gates: diagonal in the computational basis.
    [[nodiscard]] bool is_diagonal() const noexcept;

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    unsigned n_ = 0;
    std::vector<Gate> gates_;
    unsigned h_count_ = 0;
};

struct PathSumResult {
    ExactAmplitude amplitude; // scale 2^{-h/2}, phases on the 1/16-turn grid
    std::uint64_t path_count = 0; // 2^h: examined plus pruned
    std::uint64_t paths_examined = 0;
};

struct PathSumOptions {
    bool prune = true;
};

/// <out| C |in> as an exact sum over the 2^h Hadamard branchings.
/// Throws CircuitError on dimension mismatch or more than 62 H gates/qubits.
[[nodiscard]] PathSumResult pathsum_amplitude(const Circuit &c, const BitString &in_state,
                                              const BitString &out_state,
                                              const PathSumOptions &options = {});

constexpr unsigned kStateVectorMaxQubits = 14;

/// Dense double-precision simulation; basis index bit q = qubit q.
/// Throws CircuitError for n > kStateVectorMaxQubits.
[[nodiscard]] std::vector<std::complex<double>> statevector_oracle(const Circuit &c,
                                                                   const BitString &in_state);

/// Basis index of a BitString (character q -> bit q).
[[nodiscard]] std::size_t basis_index(const BitString &state);

/// <Psi_n| V_t |Psi_n> = 2^-n sum_b e^{2 pi i U_t(b)} over all n-bit inputs,
/// where U_t(b) is the output phase if the machine halts within t steps
/// after reading at most the n bits of b, else 0. Requires n <= 20.
[[nodiscard]] ExactAmplitude phase_oracle_sigma(unsigned n, std::uint64_t t, Dialect dialect,
                                                const InstructionSet &isa = InstructionSet::standard());

/**
 * Interference circuit for Re <Psi|V|Psi> of a diagonal V on n qubits.
 *
 * Qubits 0..n-1 carry |Psi> (uniform), qubit n is the ancilla. The circuit
 * prepares |Psi>|+>, applies V on the ancilla-0 branch and conj(V) on the
 * ancilla-1 branch (each T(q) of V becomes CNOT(q,n) T(n) CNOT(q,n)), then
 * undoes the preparation. The all-zero outcome then has probability
 * (Re <Psi|V|Psi>)^2 and amplitude Re <Psi|V|Psi>.
 */
struct RealPartConstruction {
    Circuit circuit;
    BitString initial_state; // all zeros, n + 1 qubits
    BitString measured_outcome; // all zeros
    double probability_factor = 1.0; // P(outcome) = factor * (Re <Psi|V|Psi>)^2
    std::string recipe;
};

/// Throws CircuitError if `v` contains H or CNOT.
[[nodiscard]] RealPartConstruction realpart_construction(const Circuit &v);

/// <Psi|V|Psi> for diagonal V, exactly (2^-n sum over basis phases).
[[nodiscard]] ExactAmplitude diagonal_expectation(const Circuit &v);

} // namespace upsum
