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

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "upsum/bitcore.hpp"
#include "upsum/machine.hpp"

namespace upsum {

/// max_len bounds program length, max_steps is the step budget t.
struct ExploreBudget {
    std::uint32_t max_len = 1;
    std::uint64_t max_steps = 1;

    /// Throws std::invalid_argument unless both are >= 1.
    void validate() const;

    friend bool operator==(const ExploreBudget &, const ExploreBudget &) = default;
};

struct HaltingRecord {
    BitString program;
    BitString output;
    PhaseFraction phase;
    std::uint64_t steps = 0;
    DyadicRational measure; // 2^-|program|

    friend bool operator==(const HaltingRecord &, const HaltingRecord &) = default;
};

/**
 * @brief Exhaustive, exact account of one budgeted exploration.
 *
 * `root` is the prefix the exploration was restricted to (empty for the full
 * tree). Masses are absolute, so halted_mass + unresolved_mass = 2^-|root|.
 * `halted` is sorted by program.
 */
struct ExplorationReport {
    ExploreBudget budget;
    Dialect dialect = Dialect::A;
    BitString root;
    std::string machine_hash;
    std::vector<HaltingRecord> halted;
    DyadicRational halted_mass;
    DyadicRational unresolved_mass;

    friend bool operator==(const ExplorationReport &, const ExplorationReport &) = default;
};

struct ExploreOptions {
    /// 0: take UPSUM_WORKERS from the environment, else hardware concurrency.
    unsigned workers = 0;
    const InstructionSet *isa = nullptr; // nullptr: standard table
    /// Closed subtrees to reuse; records that stay valid under the new budget
    /// are taken as-is instead of being re-executed.
    const ExplorationReport *reuse = nullptr;
};

[[nodiscard]] unsigned resolve_workers(unsigned requested);

/// Dovetails the program tree up to the budget. Budget exhaustion is data.
[[nodiscard]] ExplorationReport explore(const ExploreBudget &budget, Dialect dialect,
                                        const ExploreOptions &options = {});

/// As explore(), restricted to programs that extend `prefix`.
/// Throws std::invalid_argument if the machine halts strictly inside `prefix`
/// (the restricted interval then lies inside a shorter program).
[[nodiscard]] ExplorationReport explore_subtree(const ExploreBudget &budget, Dialect dialect,
                                                const BitString &prefix,
                                                const ExploreOptions &options = {});

/// Masses add up to 2^-|root| exactly, halted masses match their records, and
/// the halted set is duplicate-free, prefix-free and inside the root.
[[nodiscard]] bool kraft_check(const ExplorationReport &report);

/// Exploration at `budget` that reuses the closed subtrees of `cached`.
[[nodiscard]] ExplorationReport resume(const ExplorationReport &cached,
                                       const ExploreBudget &budget,
                                       ExploreOptions options = {});

class CacheError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

[[nodiscard]] std::string to_cache_text(const ExplorationReport &report);
/// Throws CacheError on malformed input or when the stored machine hash is
/// not the hash of `isa`.
[[nodiscard]] ExplorationReport from_cache_text(std::string_view text,
                                                const InstructionSet &isa = InstructionSet::standard());

void save_cache(const ExplorationReport &report, const std::filesystem::path &path);
[[nodiscard]] ExplorationReport load_cache(const std::filesystem::path &path,
                                           const InstructionSet &isa = InstructionSet::standard());

} // namespace upsum
