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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "upsum/bitcore.hpp"
#include "upsum/machine.hpp"
#include "upsum/pathsum.hpp"

namespace upsum {

class EventError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Largest supported path length; the path space is materialised.
constexpr unsigned kMaxPathBits = 20;

/**
 * @brief Two-part programs p0 w: a header and every k-bit path after it.
 *
 * Each path w has action S(w), a phase in turns, and weight 2^-(|p0|+k).
 * A machine-backed ensemble takes S(w) from the output of running p0 w,
 * which must halt having consumed exactly p0 w. A tabulated ensemble
 * supplies S directly for the same measure.
 */
class PathEnsemble {
  public:
    /// Throws EventError naming the first path that does not halt on
    /// exactly p0 w within `max_steps`.
    static PathEnsemble from_machine(const BitString &header, unsigned k, std::uint64_t max_steps,
                                     Dialect dialect = Dialect::A,
                                     const InstructionSet &isa = InstructionSet::standard());

    /// actions[w] for path index w (first path bit most significant);
    /// actions.size() must be a power of two.
    static PathEnsemble from_actions(const BitString &header, std::vector<PhaseFraction> actions);

    [[nodiscard]] const BitString &header() const noexcept { return header_; }
    [[nodiscard]] unsigned path_len() const noexcept { return k_; }
    [[nodiscard]] std::size_t path_count() const noexcept { return actions_.size(); }
    [[nodiscard]] const PhaseFraction &action(std::size_t w) const { return actions_.at(w); }
    [[nodiscard]] const std::vector<PhaseFraction> &actions() const noexcept { return actions_; }
    /// Outputs of the runs, empty for tabulated ensembles.
    [[nodiscard]] const std::vector<BitString> &outputs() const noexcept { return outputs_; }
    /// 2^-(|p0|+k).
    [[nodiscard]] DyadicRational path_weight() const;
    /// 2^-|p0|.
    [[nodiscard]] DyadicRational total_measure() const;

  private:
    BitString header_;
    unsigned k_ = 0;
    std::vector<PhaseFraction> actions_;
    std::vector<BitString> outputs_;
};

/// A subset of {0,1}^k.
class CoarseGrain {
  public:
    CoarseGrain() = default;
    explicit CoarseGrain(unsigned k);

    /// Mask pattern such as `0**1` (length k), or a comma-separated list
    /// of k-bit paths such as `00,11`.
    static CoarseGrain parse(std::string_view spec, unsigned k);
    static CoarseGrain from_paths(unsigned k, const std::vector<std::size_t> &paths);
    static CoarseGrain full(unsigned k);

    [[nodiscard]] unsigned path_len() const noexcept { return k_; }
    [[nodiscard]] bool contains(std::size_t w) const { return member_.at(w); }
    [[nodiscard]] std::size_t size() const noexcept;
    [[nodiscard]] bool empty() const noexcept { return size() == 0; }
    [[nodiscard]] std::vector<std::size_t> paths() const;

    [[nodiscard]] CoarseGrain complement() const;
    [[nodiscard]] bool disjoint(const CoarseGrain &other) const;
    /// Throws EventError if the grains overlap.
    [[nodiscard]] CoarseGrain disjoint_union(const CoarseGrain &other) const;

    friend bool operator==(const CoarseGrain &, const CoarseGrain &) = default;

  private:
    unsigned k_ = 0;
    std::vector<bool> member_;
};

/// sum over w in g of 2^-(|p0|+k) e^{2 pi i S(w)}, exactly.
[[nodiscard]] ExactAmplitude grain_amplitude(const PathEnsemble &e, const CoarseGrain &g);

/// Amplitude of g1 OR g2. Throws EventError when the grains overlap.
[[nodiscard]] ExactAmplitude grain_union_amplitude(const PathEnsemble &e, const CoarseGrain &g1,
                                                   const CoarseGrain &g2);

struct Decoherence {
    double value = 0.0;      // Re a1 conj(a2)
    bool exact_zero = false; // cancels on the phase grid
};

[[nodiscard]] Decoherence decoherence(const ExactAmplitude &a1, const ExactAmplitude &a2);

/// Float tolerance layered on exact amplitudes.
constexpr double kConsistencyTolerance = 1e-12;

struct ConsistencyVerdict {
    double d = 0.0;     // Re a1 conj(a2)
    double ratio = 0.0; // d^2 / (|a1|^2 |a2|^2)
    double epsilon = 0.0;
    bool consistent = false;
    bool exact_zero = false;
};

/// Throws EventError if either amplitude is zero (the ratio is undefined).
[[nodiscard]] ConsistencyVerdict consistency(const ExactAmplitude &a1, const ExactAmplitude &a2,
                                             double epsilon);

struct GrainProbability {
    ExactAmplitude amplitude;
    double weight = 0.0;      // |A|^2
    double probability = 0.0; // weight / sum of weights over the partition
};

struct PairVerdict {
    std::size_t first = 0;
    std::size_t second = 0;
    std::optional<ConsistencyVerdict> verdict; // empty if either amplitude is zero
};

struct ProbabilityReport {
    std::vector<GrainProbability> grains;
    std::vector<PairVerdict> pairs; // i < j
    double total_weight = 0.0;
    double union_weight = 0.0;   // |A(union)|^2
    double sum_rule_residual = 0.0; // |A(union)|^2 - sum |A_i|^2
    bool all_consistent = false;
};

/// Throws EventError unless the grains are pairwise disjoint and cover
/// {0,1}^k, or if every grain has zero amplitude.
[[nodiscard]] ProbabilityReport probabilities(const PathEnsemble &e,
                                              const std::vector<CoarseGrain> &partition,
                                              double epsilon);

} // namespace upsum
