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

#include "upsum/pathsum.hpp"

#include <cmath>
#include <numbers>

namespace upsum {

namespace {

const PhaseFraction &half_turn() {
    static const PhaseFraction h = PhaseFraction::from_grid(1, 1);
    return h;
}

// Neumaier summation.
struct CompensatedSum {
    long double sum = 0.0L;
    long double carry = 0.0L;

    void add(long double x) {
        const long double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x)) {
            carry += (sum - t) + x;
        } else {
            carry += (x - t) + sum;
        }
        sum = t;
    }
    [[nodiscard]] long double value() const { return sum + carry; }
};

} // namespace

ExactAmplitude::ExactAmplitude(Terms terms, std::int64_t half_exponent)
    : half_exp_(half_exponent) {
    for (auto &[q, c] : terms) {
        if (!c.is_zero()) {
            terms_.emplace(q, std::move(c));
        }
    }
}

ExactAmplitude ExactAmplitude::term(const PhaseFraction &phase, const DyadicRational &coeff,
                                    std::int64_t half_exponent) {
    ExactAmplitude a;
    a.half_exp_ = half_exponent;
    a.add_term(phase, coeff);
    return a;
}

std::uint64_t ExactAmplitude::phase_grid_bits() const {
    std::uint64_t m = 0;
    for (const auto &[q, c] : terms_) {
        m = std::max(m, q.turn().exponent());
    }
    return m;
}

void ExactAmplitude::add_term(const PhaseFraction &phase, const DyadicRational &coeff) {
    if (coeff.is_zero()) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(phase, coeff);
    if (!inserted) {
        it->second += coeff;
    }
}

ExactAmplitude ExactAmplitude::with_half_exponent(std::int64_t h) const {
    if (h < half_exp_) {
        throw std::invalid_argument("with_half_exponent: can only raise the half exponent");
    }
    const std::int64_t diff = h - half_exp_;
    ExactAmplitude out;
    out.half_exp_ = h;
    const std::int64_t whole = diff / 2;
    if (diff % 2 == 0) {
        for (const auto &[q, c] : terms_) {
            out.add_term(q, c.scaled_pow2(whole));
        }
        return out;
    }
    const PhaseFraction eighth = PhaseFraction::from_grid(1, 3);
    const PhaseFraction minus_eighth = PhaseFraction::from_grid(-1, 3);
    for (const auto &[q, c] : terms_) {
        const DyadicRational scaled = c.scaled_pow2(whole);
        out.add_term(q.plus(eighth), scaled);
        out.add_term(q.plus(minus_eighth), scaled);
    }
    return out;
}

ExactAmplitude &ExactAmplitude::operator+=(const ExactAmplitude &rhs) {
    if (rhs.terms_.empty()) {
        return *this;
    }
    if (terms_.empty()) {
        *this = rhs;
        return *this;
    }
    if (half_exp_ < rhs.half_exp_) {
        *this = with_half_exponent(rhs.half_exp_);
    }
    if (rhs.half_exp_ < half_exp_) {
        const ExactAmplitude r = rhs.with_half_exponent(half_exp_);
        for (const auto &[q, c] : r.terms_) {
            add_term(q, c);
        }
        return *this;
    }
    for (const auto &[q, c] : rhs.terms_) {
        add_term(q, c);
    }
    return *this;
}

ExactAmplitude operator*(const ExactAmplitude &a, const ExactAmplitude &b) {
    ExactAmplitude out;
    out.half_exp_ = a.half_exp_ + b.half_exp_;
    for (const auto &[qa, ca] : a.terms_) {
        for (const auto &[qb, cb] : b.terms_) {
            out.add_term(qa.plus(qb), ca * cb);
        }
    }
    return out;
}

ExactAmplitude ExactAmplitude::conj() const {
    ExactAmplitude out;
    out.half_exp_ = half_exp_;
    for (const auto &[q, c] : terms_) {
        out.add_term(q.negated(), c);
    }
    return out;
}

ExactAmplitude ExactAmplitude::rotated(const PhaseFraction &phase) const {
    ExactAmplitude out;
    out.half_exp_ = half_exp_;
    for (const auto &[q, c] : terms_) {
        out.add_term(q.plus(phase), c);
    }
    return out;
}

ExactAmplitude ExactAmplitude::scaled(const DyadicRational &factor) const {
    ExactAmplitude out;
    out.half_exp_ = half_exp_;
    for (const auto &[q, c] : terms_) {
        out.add_term(q, c * factor);
    }
    return out;
}

ExactAmplitude ExactAmplitude::reduced() const {
    ExactAmplitude out;
    out.half_exp_ = half_exp_;
    const PhaseFraction &half = half_turn();
    for (const auto &[q, c] : terms_) {
        const PhaseFraction anti = q.plus(half);
        const auto it = terms_.find(anti);
        if (it == terms_.end()) {
            out.terms_.emplace(q, c);
            continue;
        }
        // Each pair is settled once, from its lower phase.
        if (anti < q) {
            continue;
        }
        const auto order = c <=> it->second;
        if (order > 0) {
            out.terms_.emplace(q, c - it->second);
        } else if (order < 0) {
            out.terms_.emplace(anti, it->second - c);
        }
    }
    return out;
}

bool ExactAmplitude::is_zero() const { return reduced().terms_.empty(); }

DyadicRational ExactAmplitude::l1_bound() const {
    DyadicRational sum;
    for (const auto &[q, c] : terms_) {
        sum += c;
    }
    const std::int64_t fl = half_exp_ >= 0 ? half_exp_ / 2 : -((-half_exp_ + 1) / 2);
    return sum.scaled_pow2(-fl);
}

std::complex<long double> unit_phase(const PhaseFraction &q) {
    // Quarter-turn reduction keeps multiples of 1/4 exact.
    const DyadicRational four_q = q.turn().scaled_pow2(2);
    const DyadicRational frac = four_q.mod_one();
    const DyadicRational whole = four_q - frac;
    const unsigned quadrant = static_cast<unsigned>(whole.to_double()) & 3U;
    const long double theta = frac.to_long_double() * (std::numbers::pi_v<long double> / 2.0L);
    const long double c = frac.is_zero() ? 1.0L : std::cos(theta);
    const long double s = frac.is_zero() ? 0.0L : std::sin(theta);
    switch (quadrant) {
    case 0:
        return {c, s};
    case 1:
        return {-s, c};
    case 2:
        return {-c, -s};
    default:
        return {s, -c};
    }
}

std::complex<double> ExactAmplitude::to_complex() const {
    CompensatedSum re;
    CompensatedSum im;
    for (const auto &[q, c] : terms_) {
        const long double w = c.to_long_double();
        const std::complex<long double> z = unit_phase(q);
        re.add(w * z.real());
        im.add(w * z.imag());
    }
    const std::int64_t h = half_exp_;
    const std::int64_t fl = h >= 0 ? h / 2 : -((-h + 1) / 2);
    long double scale = std::ldexp(1.0L, static_cast<int>(-fl));
    if (h - 2 * fl == 1) {
        scale *= std::sqrt(0.5L);
    }
    return {static_cast<double>(re.value() * scale), static_cast<double>(im.value() * scale)};
}

bool same_value(const ExactAmplitude &a, const ExactAmplitude &b) {
    return (a + b.negated()).is_zero();
}

bool Enclosure::contains(std::complex<double> z, double tol) const {
    return std::abs(z - center.to_complex()) <= radius.to_double() + tol;
}

ExactAmplitude sigma_paper(const ExplorationReport &report) {
    ExactAmplitude sum = sigma_enclosure(report).center;
    sum.add_term(PhaseFraction{}, report.unresolved_mass);
    return sum;
}

Enclosure sigma_enclosure(const ExplorationReport &report) {
    Enclosure e;
    for (const HaltingRecord &r : report.halted) {
        e.center.add_term(r.phase, r.measure);
    }
    e.radius = report.unresolved_mass;
    return e;
}

bool nested_exact(const Enclosure &outer, const Enclosure &inner) {
    if (inner.radius > outer.radius) {
        return false;
    }
    const ExactAmplitude shift = (inner.center + outer.center.negated()).reduced();
    return shift.l1_bound() <= outer.radius - inner.radius;
}

} // namespace upsum
