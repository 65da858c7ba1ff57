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

#include <cstddef>
#include <optional>
#include <string>

#include "upsum/enumerator.hpp"
#include "upsum/pathsum.hpp"

namespace upsum {

/// The dialect-A program that makes the rest of the input run as dialect B.
struct TranslationPrefix {
    BitString bits;
    DyadicRational measure; // 2^-|bits|

    static TranslationPrefix a_to_b();
};

/// Dialect-A exploration restricted to programs extending `prefix`; masses
/// stay absolute.
[[nodiscard]] ExplorationReport restricted_report(const ExploreBudget &budget,
                                                  const BitString &prefix,
                                                  const ExploreOptions &options = {});

struct SubintegralVerdict {
    bool pass = false;
    std::string message;
    std::optional<BitString> first_mismatch; // dialect-A program
    std::size_t records_compared = 0;
    ExplorationReport restricted; // dialect A under the prefix
    ExplorationReport translated; // dialect B, max_len - |prefix|, max_steps - 1
    ExactAmplitude restricted_sum;  // halted-phase sum of `restricted`
    ExactAmplitude translated_sum;  // halted-phase sum of `translated`
};

/**
 * Checks that the 1110-restricted dialect-A exploration is the dialect-B
 * exploration at the shifted budget (max_len - 4, max_steps - 1), record by
 * record: program 1110 q with steps s + 1 pairs with program q with steps s,
 * outputs match, measures scale by 2^-4. Also checks the unresolved masses
 * and that the halted-phase sums satisfy restricted = 2^-4 translated exactly.
 *
 * `b_side` runs the dialect-B exploration; pass a different table to see
 * the check fail.
 */
[[nodiscard]] SubintegralVerdict subintegral_check(const ExploreBudget &budget,
                                                   const ExploreOptions &options = {},
                                                   const InstructionSet &b_side = InstructionSet::standard());

} // namespace upsum
