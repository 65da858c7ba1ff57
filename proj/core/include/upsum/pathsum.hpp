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

#include <complex>
#include <cstdint>
#include <map>

#include "upsum/bitcore.hpp"
#include "upsum/enumerator.hpp"

namespace upsum {

/**
 * @brief Exact complex number 2^{-h/2} * sum_q c_q e^{2 pi i q}.
 *
 * Phases q are dyadic fractions of a turn and coefficients c_q are
 * non-negative dyadic rationals; a sign is a half-turn phase. Terms with a
 * zero coefficient are never stored, and terms are not cancelled on
 * insertion, so {0: c, 1/2: c} is kept as written. reduced() and is_zero()
 * give value-level answers.
 *
 * Equality of values is decidable: over the 2^m-th roots of unity the only
 * rational relation is e^{2 pi i (q + 1/2)} = -e^{2 pi i q}, so the value is
 * zero iff every antipodal pair of coefficients matches.
 */
class ExactAmplitude {
  public:
    using Terms = std::map<PhaseFraction, DyadicRational>;

    ExactAmplitude() = default;
    explicit ExactAmplitude(Terms terms, std::int64_t half_exponent = 0);

    static ExactAmplitude term(const PhaseFraction &phase, const DyadicRational &coeff,
                               std::int64_t half_exponent = 0);

    [[nodiscard]] const Terms &coeffs() const noexcept { return terms_; }
    [[nodiscard]] std::int64_t scale_half_exponent() const noexcept { return half_exp_; }
    /// Smallest m such that every phase lies on the 2^-m grid.
    [[nodiscard]] std::uint64_t phase_grid_bits() const;

    void add_term(const PhaseFraction &phase, const DyadicRational &coeff);

    /// Exact rescale to a larger half exponent; an odd difference is absorbed
    /// as sqrt(2) = e^{i pi/4} + e^{-i pi/4}.
    [[nodiscard]] ExactAmplitude with_half_exponent(std::int64_t h) const;

    ExactAmplitude &operator+=(const ExactAmplitude &rhs);
    friend ExactAmplitude operator+(ExactAmplitude a, const ExactAmplitude &b) {
        return a += b;
    }
    friend ExactAmplitude operator*(const ExactAmplitude &a, const ExactAmplitude &b);

    [[nodiscard]] ExactAmplitude conj() const;
    [[nodiscard]] ExactAmplitude negated() const { return rotated(PhaseFraction::from_grid(1, 1)); }
    [[nodiscard]] ExactAmplitude rotated(const PhaseFraction &phase) const;
    [[nodiscard]] ExactAmplitude scaled(const DyadicRational &factor) const;

    /// Same value, antipodal pairs cancelled.
    [[nodiscard]] ExactAmplitude reduced() const;
    [[nodiscard]] bool is_zero() const;
    /// sum_q c_q * 2^{-floor(h/2)}: an exact upper bound on the modulus.
    [[nodiscard]] DyadicRational l1_bound() const;

    /// Lossy. Compensated long double accumulation; relative error stays
    /// below 1e-12 for up to 2^20 terms.
    [[nodiscard]] std::complex<double> to_complex() const;

    friend bool operator==(const ExactAmplitude &, const ExactAmplitude &) = default;

  private:
    Terms terms_;
    std::int64_t half_exp_ = 0;
};

[[nodiscard]] inline ExactAmplitude amplitude_add(const ExactAmplitude &a, const ExactAmplitude &b) {
    return a + b;
}
[[nodiscard]] inline std::complex<double> to_complex(const ExactAmplitude &a) {
    return a.to_complex();
}
/// Value equality, independent of how either side is written.
[[nodiscard]] bool same_value(const ExactAmplitude &a, const ExactAmplitude &b);

/// e^{2 pi i q} with exact results on quarter turns.
[[nodiscard]] std::complex<long double> unit_phase(const PhaseFraction &q);

/// Disk {center + z : |z| <= radius}.
struct Enclosure {
    ExactAmplitude center;
    DyadicRational radius;

    [[nodiscard]] bool contains(std::complex<double> z, double tol = 0.0) const;
};

/// Truncated sum with U_t = 0 on unresolved inputs: halted terms plus the
/// unresolved mass at phase 0.
[[nodiscard]] ExactAmplitude sigma_paper(const ExplorationReport &report);

/// Halted-only center, radius = unresolved mass. Every unresolved unit of
/// measure ends on the closed unit disk, so the limit lies inside.
[[nodiscard]] Enclosure sigma_enclosure(const ExplorationReport &report);

/// Nesting of a later enclosure inside an earlier one, decided exactly:
/// radius does not grow and |center_new - center_old| <= radius_old - radius_new
/// using the reduced l1 bound on the center difference.
[[nodiscard]] bool nested_exact(const Enclosure &outer, const Enclosure &inner);

} // namespace upsum
