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

#include "upsum/machine.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace upsum {

char dialect_name(Dialect d) noexcept { return d == Dialect::A ? 'A' : 'B'; }

Dialect parse_dialect(std::string_view text) {
    if (text == "A" || text == "a") {
        return Dialect::A;
    }
    if (text == "B" || text == "b") {
        return Dialect::B;
    }
    throw std::invalid_argument("dialect must be A or B, got '" + std::string(text) + "'");
}

std::string to_string(const Instruction &ins) {
    switch (ins.op) {
    case Opcode::Out0:
        return "OUT0";
    case Opcode::Out1:
        return "OUT1";
    case Opcode::Inc:
        return "INC r" + std::to_string(ins.reg);
    case Opcode::Dec:
        return "DEC r" + std::to_string(ins.reg);
    case Opcode::Jnz:
        return "JNZ r" + std::to_string(ins.reg) + " " + std::to_string(ins.offset);
    case Opcode::Xlate:
        return "XLATE";
    case Opcode::Halt:
        return "HALT";
    }
    return "?";
}

const InstructionSet &InstructionSet::standard() {
    static const InstructionSet isa{};
    return isa;
}

std::string InstructionSet::describe() const {
    std::string s = "upsum-isa/1;";
    for (int code = 0; code < 2; ++code) {
        s += "0" + std::to_string(code) + ":OUT";
        s += out_bit[0][code] ? '1' : '0';
        s += out_bit[1][code] ? '1' : '0';
        s += ';';
    }
    s += "100r:INC;101r:DEC;110rdddd:JNZ-back-floor;1110:XLATE-B;1111:HALT";
    return s;
}

std::string InstructionSet::content_hash() const { return fnv1a_hex(describe()); }

DecodeResult decode_instruction(const BitString &tape, std::size_t ip, Dialect dialect,
                                const InstructionSet &isa) {
    const std::size_t n = tape.size();
    auto need = [&](std::size_t width) {
        return DecodeResult{std::nullopt, ip + width > n ? ip + width - n : 1};
    };
    if (ip >= n) {
        return need(1);
    }
    if (!tape[ip]) {
        if (ip + 2 > n) {
            return need(2);
        }
        const bool bit = isa.out_bit[static_cast<int>(dialect)][tape[ip + 1] ? 1 : 0];
        return {Instruction{bit ? Opcode::Out1 : Opcode::Out0, 0, 0, 2}, 0};
    }
    if (ip + 2 > n) {
        return need(2);
    }
    if (!tape[ip + 1]) {
        // 10x r
        if (ip + 4 > n) {
            return need(4);
        }
        const auto reg = static_cast<std::uint8_t>(tape[ip + 3]);
        return {Instruction{tape[ip + 2] ? Opcode::Dec : Opcode::Inc, reg, 0, 4}, 0};
    }
    if (ip + 3 > n) {
        return need(3);
    }
    if (!tape[ip + 2]) {
        // 110 r dddd
        if (ip + 8 > n) {
            return need(8);
        }
        std::uint8_t d = 0;
        for (std::size_t i = 4; i < 8; ++i) {
            d = static_cast<std::uint8_t>((d << 1) | (tape[ip + i] ? 1 : 0));
        }
        return {Instruction{Opcode::Jnz, static_cast<std::uint8_t>(tape[ip + 3]), d, 8}, 0};
    }
    if (ip + 4 > n) {
        return need(4);
    }
    return {Instruction{tape[ip + 3] ? Opcode::Halt : Opcode::Xlate, 0, 0, 4}, 0};
}

namespace {

void write_trace(std::ostream &os, const MachineState &s, std::size_t start,
                 const Instruction &ins) {
    std::string op = to_string(ins);
    std::replace(op.begin(), op.end(), ' ', ':');
    os << s.steps << ' ' << start << ' ' << op << ' ' << s.r0 << ' ' << s.r1 << ' '
       << (s.out.empty() ? std::string("-") : s.out.to_string()) << '\n';
}

} // namespace

Stop Executor::advance(MachineState &s, std::uint64_t budget, std::ostream *trace) const {
    for (;;) {
        if (s.steps >= budget) {
            return Stop::OutOfGas;
        }
        const DecodeResult dec = decode_instruction(s.tape, s.ip, s.dialect, isa_);
        if (!dec.instruction) {
            return Stop::NeedBit;
        }
        const Instruction &ins = *dec.instruction;
        const std::size_t start = s.ip;
        s.ip = start + ins.width;
        ++s.steps;
        bool halted = false;
        switch (ins.op) {
        case Opcode::Out0:
            s.out.push_back(false);
            break;
        case Opcode::Out1:
            s.out.push_back(true);
            break;
        case Opcode::Inc:
            ++(ins.reg ? s.r1 : s.r0);
            break;
        case Opcode::Dec: {
            std::uint64_t &r = ins.reg ? s.r1 : s.r0;
            if (r != 0) {
                --r;
            }
            break;
        }
        case Opcode::Jnz:
            if ((ins.reg ? s.r1 : s.r0) != 0) {
                const std::size_t back = std::size_t{ins.offset} + 1;
                s.ip = start >= s.floor + back ? start - back : s.floor;
            }
            break;
        case Opcode::Xlate:
            s.dialect = Dialect::B;
            s.floor = s.ip;
            break;
        case Opcode::Halt:
            halted = true;
            break;
        }
        if (trace != nullptr) {
            write_trace(*trace, s, start, ins);
        }
        if (halted) {
            return Stop::Halted;
        }
    }
}

ExecResult run(BitSource &source, std::uint64_t budget, Dialect dialect,
               const InstructionSet &isa, std::ostream *trace) {
    if (budget < 1) {
        throw std::invalid_argument("run: budget must be >= 1");
    }
    const Executor exec(isa);
    MachineState s;
    s.dialect = dialect;
    ExecResult result;
    for (;;) {
        const Stop stop = exec.advance(s, budget, trace);
        if (stop == Stop::Halted) {
            result.kind = ExecKind::Halted;
            result.program = s.tape;
            result.phase = PhaseFraction(bits_to_dyadic(s.out));
            result.output = std::move(s.out);
            break;
        }
        if (stop == Stop::OutOfGas) {
            result.output = std::move(s.out);
            break;
        }
        const std::optional<bool> bit = source.next();
        if (!bit) {
            result.output = std::move(s.out);
            result.source_exhausted = true;
            break;
        }
        s.tape.push_back(*bit);
    }
    result.steps_used = s.steps;
    return result;
}

bool check_prefix_free(std::vector<BitString> programs) {
    std::sort(programs.begin(), programs.end());
    for (std::size_t i = 1; i < programs.size(); ++i) {
        if (is_proper_prefix(programs[i - 1], programs[i])) {
            return false;
        }
    }
    // Equal neighbours hide nothing: a proper prefix of an element sorts
    // directly before it or before an equal copy of it.
    return true;
}

} // namespace upsum
