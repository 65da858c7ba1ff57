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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "upsum/bitcore.hpp"

namespace upsum {

enum class Dialect : std::uint8_t { A = 0, B = 1 };

[[nodiscard]] char dialect_name(Dialect d) noexcept;
/// Accepts "A" or "B". Throws std::invalid_argument otherwise.
[[nodiscard]] Dialect parse_dialect(std::string_view text);

enum class Opcode : std::uint8_t { Out0, Out1, Inc, Dec, Jnz, Xlate, Halt };

struct Instruction {
    Opcode op = Opcode::Halt;
    std::uint8_t reg = 0;    // INC/DEC/JNZ counter select
    std::uint8_t offset = 0; // JNZ: d in ip <- S - (d + 1)
    std::uint8_t width = 0;  // bits occupied on the tape

    friend bool operator==(const Instruction &, const Instruction &) = default;
};

/// "OUT0", "INC r1", "JNZ r0 3", ...
[[nodiscard]] std::string to_string(const Instruction &ins);

/**
 * @brief The opcode table of the machine.
 *
 * Bit codes (prefix-free, complete):
 *
 *     00        OUT  (dialect-dependent bit)
 *     01        OUT  (dialect-dependent bit)
 *     100 r     INC r
 *     101 r     DEC r (saturating)
 *     110 r dddd  JNZ r: if r != 0 jump to max(floor, S - (d + 1))
 *     1110      XLATE: switch to dialect B, jump floor <- next instruction
 *     1111      HALT
 *
 * Only the meaning of the two OUT codes varies between dialects; in the
 * standard table dialect B swaps them. A table with a different B mapping
 * is a different machine and hashes differently.
 */
struct InstructionSet {
    /// out_bit[dialect][second code bit] = bit appended by code 0x.
    std::array<std::array<bool, 2>, 2> out_bit{{{false, true}, {true, false}}};

    static const InstructionSet &standard();

    [[nodiscard]] std::string describe() const;
    /// Stable fingerprint of describe(); stored in cache files.
    [[nodiscard]] std::string content_hash() const;

    friend bool operator==(const InstructionSet &, const InstructionSet &) = default;
};

struct DecodeResult {
    std::optional<Instruction> instruction; // empty: tape ends mid-opcode
    std::size_t bits_needed = 0;            // when empty: bits past tape end required
};

/// Decodes the instruction starting at `ip`. Never fails; a truncated opcode
/// reports how many more bits are needed to make progress.
[[nodiscard]] DecodeResult decode_instruction(const BitString &tape, std::size_t ip,
                                              Dialect dialect,
                                              const InstructionSet &isa = InstructionSet::standard());

struct MachineState {
    BitString tape; // consumed input
    std::size_t ip = 0;
    std::size_t floor = 0; // lowest jump target; set by XLATE
    std::uint64_t r0 = 0;
    std::uint64_t r1 = 0;
    BitString out;
    std::uint64_t steps = 0;
    Dialect dialect = Dialect::A;
};

/// Source of input bits; std::nullopt once exhausted.
class BitSource {
  public:
    virtual ~BitSource() = default;
    virtual std::optional<bool> next() = 0;
};

/// Yields the bits of a fixed string, then runs dry.
class FixedBits final : public BitSource {
  public:
    explicit FixedBits(BitString bits) : bits_(std::move(bits)) {}
    std::optional<bool> next() override {
        if (pos_ >= bits_.size()) {
            return std::nullopt;
        }
        return bits_[pos_++];
    }

  private:
    BitString bits_;
    std::size_t pos_ = 0;
};

enum class ExecKind : std::uint8_t { Halted, OutOfGas };

struct ExecResult {
    ExecKind kind = ExecKind::OutOfGas;
    BitString program; // consumed bits; meaningful only when Halted
    BitString output;
    PhaseFraction phase;
    std::uint64_t steps_used = 0;
    bool source_exhausted = false; // OutOfGas because the source ran dry

    [[nodiscard]] bool halted() const noexcept { return kind == ExecKind::Halted; }
};

/// Why Executor::advance returned.
enum class Stop : std::uint8_t { Halted, NeedBit, OutOfGas };

/**
 * @brief Step-budgeted interpreter over a growing tape of consumed bits.
 *
 * advance() executes until HALT, until the next instruction needs a bit that
 * has not been consumed yet, or until `budget` total steps have run. The
 * caller owns bit consumption, which is what lets the enumerator fork a
 * state at every read.
 */
class Executor {
  public:
    explicit Executor(const InstructionSet &isa = InstructionSet::standard()) : isa_(isa) {}

    Stop advance(MachineState &s, std::uint64_t budget, std::ostream *trace = nullptr) const;

    [[nodiscard]] const InstructionSet &isa() const noexcept { return isa_; }

  private:
    InstructionSet isa_;
};

/// U_t: runs from a fresh state in `dialect`, pulling bits from `source` only
/// when execution reaches the end of the consumed tape. Requires budget >= 1.
[[nodiscard]] ExecResult run(BitSource &source, std::uint64_t budget,
                             Dialect dialect = Dialect::A,
                             const InstructionSet &isa = InstructionSet::standard(),
                             std::ostream *trace = nullptr);

/// True iff no element is a proper prefix of another. Repeats are not
/// proper prefixes; kraft_check rejects them separately.
[[nodiscard]] bool check_prefix_free(std::vector<BitString> programs);

} // namespace upsum
