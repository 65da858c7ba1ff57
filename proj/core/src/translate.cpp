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

#include "upsum/translate.hpp"

#include <algorithm>

namespace upsum {

TranslationPrefix TranslationPrefix::a_to_b() {
    const BitString bits = BitString::parse("1110");
    return {bits, DyadicRational::pow2_neg(bits.size())};
}

ExplorationReport restricted_report(const ExploreBudget &budget, const BitString &prefix,
                                    const ExploreOptions &options) {
    return explore_subtree(budget, Dialect::A, prefix, options);
}

namespace {

// Dialect-B report for a budget that leaves no room to run anything: the
// whole interval is unresolved.
ExplorationReport empty_report(const InstructionSet &isa) {
    ExplorationReport r;
    r.dialect = Dialect::B;
    r.budget = {0, 0};
    r.machine_hash = isa.content_hash();
    r.unresolved_mass = DyadicRational::one();
    return r;
}

} // namespace

SubintegralVerdict subintegral_check(const ExploreBudget &budget, const ExploreOptions &options,
                                     const InstructionSet &b_side) {
    budget.validate();
    const TranslationPrefix prefix = TranslationPrefix::a_to_b();
    const std::size_t plen = prefix.bits.size();

    SubintegralVerdict v;
    v.restricted = restricted_report(budget, prefix.bits, options);
    if (budget.max_len > plen && budget.max_steps > 1) {
        ExploreOptions b_opts = options;
        b_opts.isa = &b_side;
        b_opts.reuse = nullptr;
        const ExploreBudget shifted{static_cast<std::uint32_t>(budget.max_len - plen),
                                    budget.max_steps - 1};
        v.translated = explore(shifted, Dialect::B, b_opts);
    } else {
        v.translated = empty_report(b_side);
    }

    const auto scale = [&](const DyadicRational &m) { return m * prefix.measure; };
    const auto &ra = v.restricted.halted;
    const auto &rb = v.translated.halted;
    const std::size_t common = std::min(ra.size(), rb.size());
    auto fail = [&](const BitString &program, const std::string &why) {
        v.pass = false;
        v.first_mismatch = program;
        v.message = "mismatch at " + program.to_string() + ": " + why;
        return v;
    };
    for (std::size_t i = 0; i < common; ++i) {
        const HaltingRecord &a = ra[i];
        const HaltingRecord &b = rb[i];
        const BitString expected = concat(prefix.bits, b.program);
        if (a.program != expected) {
            // Report whichever side has the earlier program.
            return a.program < expected
                       ? fail(a.program, "no dialect-B counterpart")
                       : fail(expected, "dialect-B program " + b.program.to_string() +
                                            " has no restricted counterpart");
        }
        if (a.output != b.output) {
            return fail(a.program, "output " + a.output.to_string() + " vs dialect-B output " +
                                       b.output.to_string());
        }
        if (a.steps != b.steps + 1) {
            return fail(a.program, "steps " + std::to_string(a.steps) + " vs dialect-B " +
                                       std::to_string(b.steps) + " + 1");
        }
        if (a.measure != scale(b.measure)) {
            return fail(a.program, "measure does not scale by 2^-4");
        }
        ++v.records_compared;
    }
    if (ra.size() > common) {
        return fail(ra[common].program, "no dialect-B counterpart");
    }
    if (rb.size() > common) {
        return fail(concat(prefix.bits, rb[common].program),
                    "dialect-B program " + rb[common].program.to_string() +
                        " has no restricted counterpart");
    }
    if (v.restricted.unresolved_mass != scale(v.translated.unresolved_mass)) {
        v.pass = false;
        v.message = "unresolved mass " + v.restricted.unresolved_mass.to_string() +
                    " is not 2^-4 x " + v.translated.unresolved_mass.to_string();
        return v;
    }
    v.restricted_sum = sigma_enclosure(v.restricted).center;
    v.translated_sum = sigma_enclosure(v.translated).center;
    if (v.restricted_sum != v.translated_sum.scaled(prefix.measure)) {
        v.pass = false;
        v.message = "restricted halted-phase sum is not 2^-4 x the dialect-B sum";
        return v;
    }
    v.pass = true;
    v.message = "pass: " + std::to_string(v.records_compared) + " records, restricted sum = 2^-4 x dialect-B sum";
    return v;
}

} // namespace upsum
