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

// Acceptance runner: one PASS/FAIL line per criterion. Criteria 1-8 run once
// per worker count in {1, 4, 16}; criterion 9 compares their outputs.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "upsum/circuits.hpp"
#include "upsum/enumerator.hpp"
#include "upsum/events.hpp"
#include "upsum/pathsum.hpp"
#include "upsum/translate.hpp"

using namespace upsum;

namespace {

constexpr double kFloatTol = 1e-12;
constexpr double kCircuitTol = 1e-9;

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string digest; // canonical output compared across worker counts
};

std::string render(const ExactAmplitude &a) {
    const ExactAmplitude r = a.reduced();
    std::string s = "h=" + std::to_string(r.scale_half_exponent());
    for (const auto &[q, c] : r.coeffs()) {
        s += " " + c.to_string() + "@" + q.to_string();
    }
    return s;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// 1: prefix-freeness and exact Kraft identity at (20, 10^4).
Outcome criterion1() {
    Outcome o;
    const ExplorationReport r = explore({20, 10000}, Dialect::A);
    std::vector<BitString> progs;
    for (const HaltingRecord &h : r.halted) progs.push_back(h.program);
    const bool prefix_free = check_prefix_free(progs);
    const bool kraft = r.halted_mass + r.unresolved_mass == DyadicRational::one();
    o.pass = prefix_free && kraft && kraft_check(r);
    o.detail = std::to_string(r.halted.size()) + " halting programs, halted " +
               r.halted_mass.to_string() + " + unresolved " + r.unresolved_mass.to_string() +
               (kraft ? " = 1" : " != 1") + (prefix_free ? ", prefix-free" : ", NOT prefix-free");
    o.digest = to_cache_text(r);
    return o;
}

// 2: exploration equals independent execution of every input string.
Outcome criterion2() {
    Outcome o;
    std::size_t compared = 0;
    std::string first_bad;
    for (char dialect : {'A', 'B'}) {
        for (unsigned len = 1; len <= 12; ++len) {
            for (std::uint64_t t : {10ULL, 100ULL, 1000ULL}) {
                const ExplorationReport r =
                    explore({len, t}, dialect == 'A' ? Dialect::A : Dialect::B);
                const auto ref = oracle::brute_force(len, t, dialect);
                bool same = r.halted.size() == ref.size();
                mpq_class mass = 0;
                auto it = ref.begin();
                for (std::size_t i = 0; same && i < r.halted.size(); ++i, ++it) {
                    const HaltingRecord &h = r.halted[i];
                    same = h.program.to_string() == it->first &&
                           h.output.to_string() == it->second.output &&
                           h.steps == it->second.steps &&
                           h.measure == DyadicRational::pow2_neg(it->first.size());
                    mass += mpq_class(1, mpz_class(1) << static_cast<mp_bitcnt_t>(it->first.size()));
                }
                mpq_class unresolved(r.unresolved_mass.numerator(),
                                     mpz_class(1) << static_cast<mp_bitcnt_t>(r.unresolved_mass.exponent()));
                unresolved.canonicalize();
                same = same && unresolved == 1 - mass;
                if (!same && first_bad.empty()) {
                    first_bad = std::string(1, dialect) + " len " + std::to_string(len) + " t " +
                                std::to_string(t);
                }
                compared += ref.size();
                o.digest += to_cache_text(r);
            }
        }
    }
    o.pass = first_bad.empty();
    o.detail = o.pass ? std::to_string(compared) + " halting records matched over 72 (dialect, len <= 12, t) cases"
                      : "mismatch at " + first_bad;
    return o;
}

// 3: enclosure disks nest across t in {10^2, 10^3, 10^4} at max_len 18.
// Every program of at most 18 bits that halts does so within 8 steps, so
// those three disks coincide; t = 1..8 is checked too, where they shrink.
Outcome criterion3() {
    Outcome o;
    const std::vector<std::uint64_t> ts{1, 2, 3, 4, 5, 6, 7, 8, 100, 1000, 10000};
    std::vector<Enclosure> disks;
    for (std::uint64_t t : ts) {
        disks.push_back(sigma_enclosure(explore({18, t}, Dialect::A)));
        o.digest += render(disks.back().center) + " r=" + disks.back().radius.to_string() + "\n";
    }
    double worst_slack = 0.0;
    std::size_t shrinking = 0;
    for (std::size_t i = 0; i + 1 < disks.size(); ++i) {
        const Enclosure &a = disks[i];
        const Enclosure &b = disks[i + 1];
        const double moved = std::abs(b.center.to_complex() - a.center.to_complex());
        const bool shrink = b.radius <= a.radius;
        const double dr = shrink ? (a.radius - b.radius).to_double() : -1.0;
        o.pass = o.pass && shrink && moved <= dr + kFloatTol && nested_exact(a, b);
        worst_slack = std::max(worst_slack, moved - dr);
        shrinking += b.radius < a.radius ? 1 : 0;
    }
    std::ostringstream detail;
    detail << "radius " << disks[8].radius.to_string() << " at t = 10^2, 10^3, 10^4 ("
           << disks[8].radius.to_double() << "); " << shrinking
           << " strict shrinks over t = 1..8, 10^2, 10^3, 10^4 from " << disks[0].radius.to_double()
           << "; max(|dc| - dr) = " << worst_slack;
    o.detail = detail.str();
    return o;
}

// Step budgets where a truncation can change: results only move at budgets
// equal to some halting step count.
std::set<std::uint64_t> ladder(unsigned n) {
    std::set<std::uint64_t> ts;
    if (n <= 12) {
        for (std::uint64_t t = 1; t <= 1000; ++t) ts.insert(t);
        return ts;
    }
    for (std::uint64_t t = 1; t <= 20; ++t) ts.insert(t);
    for (std::uint64_t t : {50, 100, 200, 500, 999, 1000}) ts.insert(t);
    for (const HaltingRecord &h : explore({n, 1000}, Dialect::A).halted) {
        ts.insert(h.steps);
        ts.insert(h.steps - 1 == 0 ? 1 : h.steps - 1);
    }
    return ts;
}

// 4: uniform-superposition phase oracle equals the truncated path sum.
Outcome criterion4() {
    Outcome o;
    std::size_t cases = 0;
    std::string first_bad;
    for (unsigned n = 1; n <= 16; ++n) {
        std::string last;
        for (std::uint64_t t : ladder(n)) {
            const ExactAmplitude lhs = phase_oracle_sigma(n, t, Dialect::A);
            const ExactAmplitude rhs = sigma_paper(explore({n, t}, Dialect::A));
            if (!same_value(lhs, rhs) && first_bad.empty()) {
                first_bad = "n " + std::to_string(n) + " t " + std::to_string(t);
            }
            ++cases;
            const std::string r = render(rhs);
            if (r != last) {
                o.digest += std::to_string(n) + "," + std::to_string(t) + ": " + r + "\n";
                last = r;
            }
        }
    }
    o.pass = first_bad.empty();
    o.detail = o.pass ? std::to_string(cases) + " (n, t) pairs equal exactly (every t <= 1000 for n <= 12, critical t for n = 13..16)"
                      : "mismatch at " + first_bad;
    return o;
}

// 5: path sums agree with the state-vector oracle; unitarity for n <= 6.
Outcome criterion5() {
    Outcome o;
    std::mt19937_64 rng(20260517);
    double worst = 0.0;
    double worst_norm = 0.0;
    std::size_t pairs = 0;
    for (int i = 0; i < 200; ++i) {
        const unsigned n = 1 + static_cast<unsigned>(rng() % 10);
        const Circuit c = oracle::random_circuit(rng, n, 40, 16);
        const BitString in = oracle::random_bits(rng, n);
        const auto psi = statevector_oracle(c, in);
        std::vector<std::size_t> outs;
        if (n <= 6) {
            for (std::size_t k = 0; k < psi.size(); ++k) outs.push_back(k);
        } else {
            std::size_t best = 0;
            for (std::size_t k = 0; k < psi.size(); ++k) {
                if (std::norm(psi[k]) > std::norm(psi[best])) best = k;
            }
            outs.push_back(best);
            for (int s = 0; s < 16; ++s) outs.push_back(rng() % psi.size());
        }
        double norm = 0.0;
        for (std::size_t k : outs) {
            BitString out;
            for (unsigned q = 0; q < n; ++q) out.push_back((k >> q) & 1U);
            const PathSumResult r = pathsum_amplitude(c, in, out);
            const std::complex<double> z = r.amplitude.to_complex();
            worst = std::max(worst, std::abs(z - psi[k]));
            norm += std::norm(z);
            ++pairs;
            o.digest += render(r.amplitude) + "\n";
        }
        if (n <= 6) worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
    }
    o.pass = worst <= kCircuitTol && worst_norm <= kCircuitTol;
    std::ostringstream d;
    d << "200 circuits, " << pairs << " amplitude pairs, max |diff| " << worst
      << ", max |norm - 1| (n <= 6) " << worst_norm;
    o.detail = d.str();
    return o;
}

// 6: single-gate conventions.
Outcome criterion6() {
    Outcome o;
    const auto ph = [](const char *s) { return PhaseFraction::parse(s); };
    const auto bits = [](const char *s) { return BitString::parse(s); };
    const Circuit h(1, {Gate::h(0)});
    const Circuit t(1, {Gate::t(0)});
    const ExactAmplitude plus = ExactAmplitude::term(ph("0"), DyadicRational::one(), 1);
    const ExactAmplitude minus = ExactAmplitude::term(ph("1/2^1"), DyadicRational::one(), 1);
    bool ok = true;
    for (const char *in : {"0", "1"}) {
        for (const char *out : {"0", "1"}) {
            const PathSumResult r = pathsum_amplitude(h, bits(in), bits(out));
            const bool neg = in[0] == '1' && out[0] == '1';
            ok = ok && same_value(r.amplitude, neg ? minus : plus) && r.path_count == 2;
            ok = ok && std::abs(std::norm(r.amplitude.to_complex()) - 0.5) <= kFloatTol;
            o.digest += render(r.amplitude) + "\n";
        }
    }
    const ExactAmplitude t0 = pathsum_amplitude(t, bits("0"), bits("0")).amplitude.reduced();
    const ExactAmplitude t1 = pathsum_amplitude(t, bits("1"), bits("1")).amplitude.reduced();
    const ExactAmplitude::Terms want0{{ph("1/2^4"), DyadicRational::one()}};
    const ExactAmplitude::Terms want1{{ph("15/2^4"), DyadicRational::one()}};
    ok = ok && t0.coeffs() == want0 && t0.scale_half_exponent() == 0;
    ok = ok && t1.coeffs() == want1 && t1.scale_half_exponent() == 0;
    ok = ok && pathsum_amplitude(t, bits("0"), bits("1")).amplitude.is_zero();
    const std::complex<double> e8 = std::polar(1.0, std::numbers::pi / 8);
    ok = ok && std::abs(t0.to_complex() - e8) <= kFloatTol && std::abs(t1.to_complex() - std::conj(e8)) <= kFloatTol;
    const auto sv = statevector_oracle(t, bits("0"));
    ok = ok && std::abs(sv[0] - e8) <= kFloatTol;
    o.digest += render(t0) + "\n" + render(t1) + "\n";
    o.pass = ok;
    o.detail = "H: 4 transitions at 2^(-1/2), sign -1 only on 1->1; T: 1/16 turn on |0>, 15/16 turn on |1>";
    return o;
}

// 7: sum rule <=> vanishing decoherence; threshold behaviour of the ratio.
Outcome criterion7() {
    Outcome o;
    std::mt19937_64 rng(7777);
    std::size_t zero = 0;
    std::size_t nonzero = 0;
    std::size_t threshold_checks = 0;
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
        const unsigned k = 1 + static_cast<unsigned>(rng() % 10);
        const std::size_t count = std::size_t{1} << k;
        std::vector<PhaseFraction> acts;
        const bool designed = i % 3 == 0;
        const unsigned grid = 1 + static_cast<unsigned>(rng() % 4);
        for (std::size_t w = 0; w < count; ++w) {
            if (designed) {
                // Real phases on the first half, imaginary on the second.
                const std::int64_t base = w >= count / 2 ? 1 : 0;
                acts.push_back(PhaseFraction::from_grid(base + 2 * static_cast<std::int64_t>(rng() % 2), 2));
            } else {
                acts.push_back(PhaseFraction::from_grid(static_cast<std::int64_t>(rng() % (1U << grid)), grid));
            }
        }
        const PathEnsemble e = PathEnsemble::from_actions(BitString{}, std::move(acts));
        for (int p = 0; p < 5; ++p) {
            std::vector<std::size_t> g1;
            std::vector<std::size_t> g2;
            for (std::size_t w = 0; w < count; ++w) {
                const bool left = designed && p == 0 ? w < count / 2 : rng() % 2 == 0;
                if (designed && p == 0) {
                    (left ? g1 : g2).push_back(w);
                } else if (rng() % 4 != 0) {
                    (left ? g1 : g2).push_back(w);
                }
            }
            const CoarseGrain a = CoarseGrain::from_paths(k, g1);
            const CoarseGrain b = CoarseGrain::from_paths(k, g2);
            const ExactAmplitude aa = grain_amplitude(e, a);
            const ExactAmplitude ab = grain_amplitude(e, b);
            const double lhs = std::norm(grain_union_amplitude(e, a, b).to_complex());
            const double rhs = std::norm(aa.to_complex()) + std::norm(ab.to_complex());
            const Decoherence d = decoherence(aa, ab);
            const bool sum_rule = std::abs(lhs - rhs) <= kFloatTol;
            const bool decoherent = std::abs(d.value) <= kFloatTol;
            ok = ok && sum_rule == decoherent;
            (decoherent ? zero : nonzero)++;
            o.digest += render(aa) + "|" + render(ab) + "|" + fmt(d.value) + "\n";
            if (aa.is_zero() || ab.is_zero()) continue;
            const ConsistencyVerdict v = consistency(aa, ab, 0.5);
            // The ratio is the squared sum-rule deviation relative to 2|A||A'|.
            const double dev = (lhs - rhs) / (2.0 * std::abs(aa.to_complex()) * std::abs(ab.to_complex()));
            ok = ok && std::abs(v.ratio - dev * dev) <= 1e-9;
            if (v.ratio > 1e-6) {
                ok = ok && consistency(aa, ab, v.ratio * (1 + 1e-6)).consistent;
                ok = ok && !consistency(aa, ab, v.ratio * (1 - 1e-6)).consistent;
                ++threshold_checks;
            }
        }
    }
    const ExactAmplitude a0 = ExactAmplitude::term(PhaseFraction::parse("0"), DyadicRational::pow2_neg(3));
    const ExactAmplitude a8 = ExactAmplitude::term(PhaseFraction::parse("1/2^3"), DyadicRational::pow2_neg(3));
    const double half = consistency(a0, a8, 0.5).ratio;
    const double cos2 = std::pow(std::cos(std::numbers::pi / 4), 2);
    const bool half_ok = std::abs(half - cos2) <= kFloatTol && consistency(a0, a8, 0.5).consistent &&
                         !consistency(a0, a8, 0.49).consistent;
    o.pass = ok && half_ok && zero > 0 && nonzero > 0;
    std::ostringstream d;
    d << "100 ensembles, 500 grain pairs (" << zero << " decoherent, " << nonzero
      << " interfering), " << threshold_checks << " threshold crossings; 1/8-turn ratio "
      << fmt(half) << " vs cos^2(pi/4) " << fmt(cos2);
    o.detail = d.str();
    o.digest += fmt(half) + "\n";
    return o;
}

// 8: sub-integral scaling at (16, 500).
Outcome criterion8() {
    Outcome o;
    const SubintegralVerdict v = subintegral_check({16, 500});
    o.pass = v.pass;
    o.detail = v.message;
    o.digest = v.message + "\n" + render(v.restricted_sum) + "\n" + render(v.translated_sum) + "\n" +
               to_cache_text(v.restricted) + to_cache_text(v.translated);
    return o;
}

const std::vector<std::pair<const char *, std::function<Outcome()>>> kCriteria = {
    {"prefix-freeness and Kraft identity", criterion1},
    {"brute-force equivalence", criterion2},
    {"enclosure nesting", criterion3},
    {"phase oracle bridge", criterion4},
    {"circuit oracle agreement", criterion5},
    {"gate conventions", criterion6},
    {"sum rule and decoherence", criterion7},
    {"sub-integral scaling", criterion8},
};

} // namespace

int main() {
    const std::vector<const char *> worker_counts{"1", "4", "16"};
    std::vector<std::vector<Outcome>> runs;
    std::vector<std::vector<double>> seconds;
    for (const char *w : worker_counts) {
        ::setenv("UPSUM_WORKERS", w, 1);
        runs.emplace_back();
        seconds.emplace_back();
        for (const auto &[name, fn] : kCriteria) {
            const auto start = std::chrono::steady_clock::now();
            runs.back().push_back(fn());
            seconds.back().push_back(
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        }
    }
    ::unsetenv("UPSUM_WORKERS");

    bool all = true;
    for (std::size_t i = 0; i < kCriteria.size(); ++i) {
        bool pass = true;
        for (const auto &run : runs) pass = pass && run[i].pass;
        all = all && pass;
        std::printf("criterion %zu %s: %s: %s [%.2fs at 1 worker, %.2fs at 16]\n", i + 1,
                    pass ? "PASS" : "FAIL", kCriteria[i].first, runs[0][i].detail.c_str(),
                    seconds[0][i], seconds[2][i]);
    }

    std::string mismatch;
    for (std::size_t i = 0; i < kCriteria.size(); ++i) {
        for (std::size_t r = 1; r < runs.size(); ++r) {
            if (runs[r][i].digest != runs[0][i].digest && mismatch.empty()) {
                mismatch = "criterion " + std::to_string(i + 1) + " differs at UPSUM_WORKERS=" +
                           worker_counts[r];
            }
        }
    }
    std::string hashes;
    for (std::size_t i = 0; i < kCriteria.size(); ++i) {
        hashes += (i ? " " : "") + fnv1a_hex(runs[0][i].digest);
    }
    const bool det = mismatch.empty();
    all = all && det;
    std::printf("criterion 9 %s: determinism under parallelism: %s\n", det ? "PASS" : "FAIL",
                det ? ("outputs of 1-8 identical for UPSUM_WORKERS in {1, 4, 16}; digests " + hashes).c_str()
                    : mismatch.c_str());
    return all ? 0 : 1;
}
