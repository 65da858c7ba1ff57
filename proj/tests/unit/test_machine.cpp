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

#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "upsum/machine.hpp"

using namespace upsum;

namespace {

ExecResult run_bits(const std::string &bits, std::uint64_t budget, Dialect d = Dialect::A) {
    FixedBits src(BitString::parse(bits));
    return run(src, budget, d);
}

} // namespace

TEST_CASE("decoder covers the opcode table") {
    auto dec = [](const std::string &bits, Dialect d = Dialect::A) {
        return decode_instruction(BitString::parse(bits), 0, d);
    };
    CHECK(dec("00").instruction->op == Opcode::Out0);
    CHECK(dec("01").instruction->op == Opcode::Out1);
    CHECK(dec("00", Dialect::B).instruction->op == Opcode::Out1);
    CHECK(dec("01", Dialect::B).instruction->op == Opcode::Out0);
    CHECK(dec("1001").instruction->op == Opcode::Inc);
    CHECK(dec("1001").instruction->reg == 1);
    CHECK(dec("1010").instruction->op == Opcode::Dec);
    const auto jnz = dec("11010011").instruction;
    REQUIRE(jnz);
    CHECK(jnz->op == Opcode::Jnz);
    CHECK(jnz->reg == 1);
    CHECK(jnz->offset == 3);
    CHECK(jnz->width == 8);
    CHECK(dec("1110").instruction->op == Opcode::Xlate);
    CHECK(dec("1111").instruction->op == Opcode::Halt);
    CHECK(to_string(*jnz) == "JNZ r1 3");

    const DecodeResult partial = dec("110");
    CHECK(!partial.instruction);
    CHECK(partial.bits_needed == 5); // the rest of a JNZ
    CHECK(dec("1100").bits_needed == 4);
}

TEST_CASE("halting examples") {
    const ExecResult h = run_bits("1111", 10);
    CHECK(h.halted());
    CHECK(h.program.to_string() == "1111");
    CHECK(h.output.empty());
    CHECK(h.phase.is_zero());
    CHECK(h.steps_used == 1);

    const ExecResult p = run_bits("011111", 10);
    CHECK(p.halted());
    CHECK(p.output.to_string() == "1");
    CHECK(p.phase.to_string() == "1/2^1");
    CHECK(p.steps_used == 2);

    // Bits after HALT are never read.
    const ExecResult extra = run_bits("1111010", 10);
    CHECK(extra.program.to_string() == "1111");

    const ExecResult x = run_bits("1110001111", 10);
    CHECK(x.halted());
    CHECK(x.output.to_string() == "1");
    CHECK(x.steps_used == 3);
}

TEST_CASE("budget and starvation") {
    const ExecResult dry = run_bits("0", 10);
    CHECK(!dry.halted());
    CHECK(dry.source_exhausted);

    // INC r0 then JNZ r0 back to the start: loops forever.
    const ExecResult loop = run_bits("1000" "11000011", 50);
    CHECK(!loop.halted());
    CHECK(!loop.source_exhausted);
    CHECK(loop.steps_used == 50);

    // Budget 1 exactly fits one HALT.
    CHECK(run_bits("1111", 1).halted());
    CHECK(!run_bits("001111", 1).halted());
    FixedBits src(BitString::parse("1111"));
    CHECK_THROWS(run(src, 0));
}

TEST_CASE("counters saturate and jumps clamp") {
    // DEC r0 on zero stays zero, so the JNZ falls through to HALT.
    const ExecResult r = run_bits("1010" "11000000" "1111", 10);
    CHECK(r.halted());
    CHECK(r.steps_used == 3);
    // A jump past the start lands on bit 0.
    const ExecResult j = run_bits("1000" "11001111" "1111", 5);
    CHECK(!j.halted());
}

TEST_CASE("trace lines") {
    FixedBits src(BitString::parse("011111"));
    std::ostringstream trace;
    const ExecResult r = run(src, 10, Dialect::A, InstructionSet::standard(), &trace);
    CHECK(r.halted());
    CHECK(trace.str() == "1 0 OUT1 0 0 1\n2 2 HALT 0 0 1\n");
}

TEST_CASE("machine agrees with the reference interpreter on random inputs") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 3000; ++trial) {
        std::string bits;
        const std::size_t len = 4 + rng() % 40;
        for (std::size_t i = 0; i < len; ++i) bits.push_back(rng() & 1 ? '1' : '0');
        const std::uint64_t budget = 1 + rng() % 200;
        const char dialect = rng() & 1 ? 'A' : 'B';
        const oracle::RefRun ref = oracle::ref_run(bits, budget, dialect);
        const ExecResult got = run_bits(bits, budget, dialect == 'A' ? Dialect::A : Dialect::B);
        REQUIRE(got.halted() == ref.halted);
        if (ref.halted) {
            CHECK(got.program.to_string() == ref.program);
            CHECK(got.output.to_string() == ref.output);
            CHECK(got.steps_used == ref.steps);
        }
    }
}

TEST_CASE("dialect B swaps output bits only") {
    std::mt19937_64 rng(99);
    int halted = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        std::string bits;
        for (int i = 0; i < 24; ++i) bits.push_back(rng() & 1 ? '1' : '0');
        std::ostringstream trace;
        FixedBits src(BitString::parse(bits));
        const ExecResult a = run(src, 300, Dialect::A, InstructionSet::standard(), &trace);
        const ExecResult b = run_bits(bits, 300, Dialect::B);
        REQUIRE(a.halted() == b.halted());
        // After an XLATE both runs are in dialect B.
        if (!a.halted() || trace.str().find("XLATE") != std::string::npos) continue;
        ++halted;
        CHECK(a.program == b.program);
        CHECK(a.steps_used == b.steps_used);
        std::string flipped = a.output.to_string();
        for (char &c : flipped) c = c == '0' ? '1' : '0';
        CHECK(b.output.to_string() == flipped);
    }
    CHECK(halted > 0);
}

TEST_CASE("instruction set hash reflects the table") {
    InstructionSet other = InstructionSet::standard();
    other.out_bit[1][0] = false;
    CHECK(other.content_hash() != InstructionSet::standard().content_hash());
    CHECK(InstructionSet::standard().content_hash() == InstructionSet::standard().content_hash());
}

TEST_CASE("prefix-free check") {
    auto bs = [](std::initializer_list<const char *> xs) {
        std::vector<BitString> v;
        for (const char *x : xs) v.push_back(BitString::parse(x));
        return v;
    };
    CHECK(check_prefix_free(bs({"1111", "001111", "011111"})));
    CHECK(!check_prefix_free(bs({"1111", "11110"})));
    CHECK(check_prefix_free({}));
}
