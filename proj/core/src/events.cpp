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

#include "upsum/events.hpp"

#include <algorithm>
#include <bit>
#include <complex>

namespace upsum {

// ------------------------------------------------------------ PathEnsemble

PathEnsemble PathEnsemble::from_machine(const BitString &header, unsigned k,
                                        std::uint64_t max_steps, Dialect dialect,
                                        const InstructionSet &isa) {
    if (k > kMaxPathBits) {
        throw EventError("path length k must be <= " + std::to_string(kMaxPathBits));
    }
    if (max_steps < 1) {
        throw EventError("max_steps must be >= 1");
    }
    PathEnsemble e;
    e.header_ = header;
    e.k_ = k;
    const std::size_t count = std::size_t{1} << k;
    e.actions_.reserve(count);
    e.outputs_.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const BitString path = BitString::from_uint(w, k);
        const BitString program = concat(header, path);
        FixedBits source(program);
        ExecResult r = run(source, max_steps, dialect, isa);
        if (!r.halted() || r.program != program) {
            std::string why;
            if (r.halted()) {
                why = "halts early on " + r.program.to_string();
            } else if (r.source_exhausted) {
                why = "wants more input";
            } else {
                why = "does not halt within " + std::to_string(max_steps) + " steps";
            }
            throw EventError("path " + (k == 0 ? std::string("(empty)") : path.to_string()) +
                             " after header " + header.to_string() + ": " + why);
        }
        e.actions_.push_back(r.phase);
        e.outputs_.push_back(std::move(r.output));
    }
    return e;
}

PathEnsemble PathEnsemble::from_actions(const BitString &header, std::vector<PhaseFraction> actions) {
    if (actions.empty() || !std::has_single_bit(actions.size())) {
        throw EventError("action table size must be a power of two");
    }
    const auto k = static_cast<unsigned>(std::countr_zero(actions.size()));
    if (k > kMaxPathBits) {
        throw EventError("path length k must be <= " + std::to_string(kMaxPathBits));
    }
    PathEnsemble e;
    e.header_ = header;
    e.k_ = k;
    e.actions_ = std::move(actions);
    return e;
}

DyadicRational PathEnsemble::path_weight() const {
    return DyadicRational::pow2_neg(header_.size() + k_);
}

DyadicRational PathEnsemble::total_measure() const {
    return DyadicRational::pow2_neg(header_.size());
}

// ------------------------------------------------------------- CoarseGrain

CoarseGrain::CoarseGrain(unsigned k) : k_(k), member_(std::size_t{1} << k, false) {
    if (k > kMaxPathBits) {
        throw EventError("path length k must be <= " + std::to_string(kMaxPathBits));
    }
}

CoarseGrain CoarseGrain::parse(std::string_view spec, unsigned k) {
    CoarseGrain g(k);
    const bool is_list = spec.find(',') != std::string_view::npos;
    if (!is_list) {
        if (spec.size() != k ||
            !std::all_of(spec.begin(), spec.end(),
                         [](char c) { return c == '0' || c == '1' || c == '*'; })) {
            throw EventError("grain pattern '" + std::string(spec) + "' must be " +
                             std::to_string(k) + " characters of 0, 1 or *");
        }
        for (std::size_t w = 0; w < g.member_.size(); ++w) {
            bool match = true;
            for (unsigned i = 0; i < k && match; ++i) {
                const bool bit = (w >> (k - 1 - i)) & 1U;
                match = spec[i] == '*' || (spec[i] == '1') == bit;
            }
            g.member_[w] = match;
        }
        return g;
    }
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = std::min(spec.find(',', start), spec.size());
        const std::string_view item = spec.substr(start, comma - start);
        BitString path;
        try {
            path = BitString::parse(item);
        } catch (const std::invalid_argument &) {
            throw EventError("grain list entry '" + std::string(item) + "' is not a bit string");
        }
        if (path.size() != k) {
            throw EventError("grain list entry '" + std::string(item) + "' must have " +
                             std::to_string(k) + " bits");
        }
        std::size_t w = 0;
        for (std::size_t i = 0; i < k; ++i) {
            w = (w << 1) | (path[i] ? 1U : 0U);
        }
        g.member_[w] = true;
        start = comma + 1;
    }
    return g;
}

CoarseGrain CoarseGrain::from_paths(unsigned k, const std::vector<std::size_t> &paths) {
    CoarseGrain g(k);
    for (std::size_t w : paths) {
        if (w >= g.member_.size()) {
            throw EventError("path index out of range for k = " + std::to_string(k));
        }
        g.member_[w] = true;
    }
    return g;
}

CoarseGrain CoarseGrain::full(unsigned k) {
    CoarseGrain g(k);
    g.member_.flip();
    return g;
}

std::size_t CoarseGrain::size() const noexcept {
    return static_cast<std::size_t>(std::count(member_.begin(), member_.end(), true));
}

std::vector<std::size_t> CoarseGrain::paths() const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < member_.size(); ++w) {
        if (member_[w]) {
            out.push_back(w);
        }
    }
    return out;
}

CoarseGrain CoarseGrain::complement() const {
    CoarseGrain g = *this;
    g.member_.flip();
    return g;
}

bool CoarseGrain::disjoint(const CoarseGrain &other) const {
    if (other.k_ != k_) {
        throw EventError("grains over different path spaces cannot be combined");
    }
    for (std::size_t w = 0; w < member_.size(); ++w) {
        if (member_[w] && other.member_[w]) {
            return false;
        }
    }
    return true;
}

CoarseGrain CoarseGrain::disjoint_union(const CoarseGrain &other) const {
    if (!disjoint(other)) {
        throw EventError("grains overlap; OR is only defined for exclusive events");
    }
    CoarseGrain g = *this;
    for (std::size_t w = 0; w < member_.size(); ++w) {
        if (other.member_[w]) {
            g.member_[w] = true;
        }
    }
    return g;
}

// -------------------------------------------------------------- amplitudes

ExactAmplitude grain_amplitude(const PathEnsemble &e, const CoarseGrain &g) {
    if (g.path_len() != e.path_len()) {
        throw EventError("grain path length does not match the ensemble");
    }
    const DyadicRational weight = e.path_weight();
    ExactAmplitude a;
    for (std::size_t w = 0; w < e.path_count(); ++w) {
        if (g.contains(w)) {
            a.add_term(e.action(w), weight);
        }
    }
    return a;
}

ExactAmplitude grain_union_amplitude(const PathEnsemble &e, const CoarseGrain &g1,
                                     const CoarseGrain &g2) {
    if (!g1.disjoint(g2)) {
        throw EventError("grains overlap; OR is only defined for exclusive events");
    }
    return grain_amplitude(e, g1) + grain_amplitude(e, g2);
}

Decoherence decoherence(const ExactAmplitude &a1, const ExactAmplitude &a2) {
    const ExactAmplitude product = a1.reduced() * a2.reduced().conj();
    Decoherence d;
    d.exact_zero = (product + product.conj()).is_zero();
    if (!d.exact_zero) {
        const std::complex<double> z1 = a1.to_complex();
        const std::complex<double> z2 = a2.to_complex();
        d.value = (z1 * std::conj(z2)).real();
    }
    return d;
}

ConsistencyVerdict consistency(const ExactAmplitude &a1, const ExactAmplitude &a2, double epsilon) {
    if (a1.is_zero() || a2.is_zero()) {
        throw EventError("consistency ratio is undefined for a zero amplitude");
    }
    const Decoherence d = decoherence(a1, a2);
    ConsistencyVerdict v;
    v.d = d.value;
    v.exact_zero = d.exact_zero;
    v.epsilon = epsilon;
    const double n1 = std::norm(a1.to_complex());
    const double n2 = std::norm(a2.to_complex());
    v.ratio = d.exact_zero ? 0.0 : (d.value * d.value) / (n1 * n2);
    v.consistent = v.ratio <= epsilon + kConsistencyTolerance;
    return v;
}

ProbabilityReport probabilities(const PathEnsemble &e, const std::vector<CoarseGrain> &partition,
                                double epsilon) {
    if (partition.empty()) {
        throw EventError("partition must contain at least one grain");
    }
    CoarseGrain covered(e.path_len());
    for (const CoarseGrain &g : partition) {
        if (g.path_len() != e.path_len()) {
            throw EventError("grain path length does not match the ensemble");
        }
        covered = covered.disjoint_union(g);
    }
    if (covered != CoarseGrain::full(e.path_len())) {
        throw EventError("partition does not cover every path");
    }

    ProbabilityReport rep;
    ExactAmplitude all;
    for (const CoarseGrain &g : partition) {
        GrainProbability gp;
        gp.amplitude = grain_amplitude(e, g);
        gp.weight = std::norm(gp.amplitude.to_complex());
        rep.total_weight += gp.weight;
        all += gp.amplitude;
        rep.grains.push_back(std::move(gp));
    }
    if (rep.total_weight == 0.0) {
        throw EventError("every grain has zero amplitude; probabilities are undefined");
    }
    for (GrainProbability &gp : rep.grains) {
        gp.probability = gp.weight / rep.total_weight;
    }
    rep.union_weight = std::norm(all.to_complex());
    rep.sum_rule_residual = rep.union_weight - rep.total_weight;
    rep.all_consistent = true;
    for (std::size_t i = 0; i < rep.grains.size(); ++i) {
        for (std::size_t j = i + 1; j < rep.grains.size(); ++j) {
            PairVerdict pv{i, j, std::nullopt};
            if (!rep.grains[i].amplitude.is_zero() && !rep.grains[j].amplitude.is_zero()) {
                pv.verdict = consistency(rep.grains[i].amplitude, rep.grains[j].amplitude, epsilon);
                rep.all_consistent = rep.all_consistent && pv.verdict->consistent;
            }
            rep.pairs.push_back(std::move(pv));
        }
    }
    return rep;
}

} // namespace upsum
