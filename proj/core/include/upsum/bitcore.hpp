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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace upsum {

/**
 * @brief Finite ordered sequence of bits.
 *
 * Bits are packed most-significant-first into 64-bit words so that word-wise
 * comparison agrees with lexicographic order. Ordering is lexicographic with a
 * proper prefix sorting before its extensions.
 */
class BitString {
  public:
    BitString() = default;

    /// Parses raw `0`/`1` characters. Throws std::invalid_argument otherwise.
    static BitString parse(std::string_view text);

    /// The low `width` bits of `value`, most significant first.
    static BitString from_uint(std::uint64_t value, std::size_t width);

    [[nodiscard]] std::size_t size() const noexcept { return size_; }
    [[nodiscard]] bool empty() const noexcept { return size_ == 0; }

    [[nodiscard]] bool operator[](std::size_t i) const noexcept {
        return (words_[i >> 6] >> (63 - (i & 63))) & 1U;
    }

    void push_back(bool bit) {
        if ((size_ & 63) == 0) {
            words_.push_back(0);
        }
        if (bit) {
            words_.back() |= std::uint64_t{1} << (63 - (size_ & 63));
        }
        ++size_;
    }

    void append(const BitString &other);

    /// First `n` bits (n is clamped to size()).
    [[nodiscard]] BitString prefix(std::size_t n) const;

    /// Bits [from, size()).
    [[nodiscard]] BitString suffix(std::size_t from) const;

    /// Interprets the bits as an unsigned integer, first bit most significant.
    [[nodiscard]] mpz_class to_integer() const;

    [[nodiscard]] std::string to_string() const;

    [[nodiscard]] const std::vector<std::uint64_t> &words() const noexcept {
        return words_;
    }

    friend bool operator==(const BitString &a, const BitString &b) noexcept {
        return a.size_ == b.size_ && a.words_ == b.words_;
    }
    friend std::strong_ordering operator<=>(const BitString &a,
                                            const BitString &b) noexcept;

  private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

[[nodiscard]] BitString concat(const BitString &a, const BitString &b);

/// True iff a != b and b begins with a.
[[nodiscard]] bool is_proper_prefix(const BitString &a, const BitString &b);

/// True iff a is a prefix of b (including a == b).
[[nodiscard]] bool is_prefix(const BitString &a, const BitString &b);

/**
 * @brief Exact non-negative number numerator / 2^exponent.
 *
 * Canonical form: the numerator is odd, or the exponent is zero. Zero is
 * 0/2^0. The numerator is arbitrary precision, so no operation rounds.
 */
class DyadicRational {
  public:
    DyadicRational() = default;
    DyadicRational(mpz_class numerator, std::uint64_t exponent);
    explicit DyadicRational(std::uint64_t integer)
        : DyadicRational(mpz_class(static_cast<unsigned long>(integer)), 0) {}

    static DyadicRational zero() { return {}; }
    static DyadicRational one() { return DyadicRational(1); }
    /// 2^-k.
    static DyadicRational pow2_neg(std::uint64_t k);

    /// Parses "m/2^e" (canonical rendering) or a bare integer.
    static DyadicRational parse(std::string_view text);

    [[nodiscard]] const mpz_class &numerator() const noexcept { return num_; }
    [[nodiscard]] std::uint64_t exponent() const noexcept { return exp_; }
    [[nodiscard]] bool is_zero() const noexcept { return sgn(num_) == 0; }

    DyadicRational &operator+=(const DyadicRational &rhs);
    /// Throws std::domain_error when the result would be negative.
    DyadicRational &operator-=(const DyadicRational &rhs);
    DyadicRational &operator*=(const DyadicRational &rhs);

    /// Multiplies by 2^shift (shift may be negative).
    [[nodiscard]] DyadicRational scaled_pow2(std::int64_t shift) const;

    /// Fractional part: value mod 1.
    [[nodiscard]] DyadicRational mod_one() const;

    [[nodiscard]] double to_double() const;
    [[nodiscard]] long double to_long_double() const;

    /// "m/2^e".
    [[nodiscard]] std::string to_string() const;

    friend DyadicRational operator+(DyadicRational a, const DyadicRational &b) {
        return a += b;
    }
    friend DyadicRational operator-(DyadicRational a, const DyadicRational &b) {
        return a -= b;
    }
    friend DyadicRational operator*(DyadicRational a, const DyadicRational &b) {
        return a *= b;
    }
    friend bool operator==(const DyadicRational &a,
                           const DyadicRational &b) noexcept {
        return a.exp_ == b.exp_ && a.num_ == b.num_;
    }
    friend std::strong_ordering operator<=>(const DyadicRational &a,
                                            const DyadicRational &b);

  private:
    void canonicalize();

    mpz_class num_{0};
    std::uint64_t exp_ = 0;
};

/**
 * @brief An angle as an exact fraction of a full turn, kept in [0, 1).
 */
class PhaseFraction {
  public:
    PhaseFraction() = default;
    explicit PhaseFraction(const DyadicRational &turn) : turn_(turn.mod_one()) {}

    static PhaseFraction parse(std::string_view text) {
        return PhaseFraction(DyadicRational::parse(text));
    }
    /// k / 2^bits of a turn, reduced mod 1.
    static PhaseFraction from_grid(std::int64_t k, std::uint64_t bits);

    [[nodiscard]] const DyadicRational &turn() const noexcept { return turn_; }
    [[nodiscard]] bool is_zero() const noexcept { return turn_.is_zero(); }

    [[nodiscard]] PhaseFraction negated() const;
    [[nodiscard]] PhaseFraction plus(const PhaseFraction &other) const;

    /// Turn as a double in [0, 1).
    [[nodiscard]] double to_double() const { return turn_.to_double(); }
    [[nodiscard]] std::string to_string() const { return turn_.to_string(); }

    friend bool operator==(const PhaseFraction &, const PhaseFraction &) = default;
    friend std::strong_ordering operator<=>(const PhaseFraction &a,
                                            const PhaseFraction &b) {
        return a.turn_ <=> b.turn_;
    }

  private:
    DyadicRational turn_;
};

/// Sum of b_k 2^-k over the bits, exactly; always in [0, 1).
[[nodiscard]] DyadicRational bits_to_dyadic(const BitString &bits);

/// Exact mod-1 phase sum.
[[nodiscard]] inline PhaseFraction dyadic_add_mod1(const PhaseFraction &x,
                                                   const PhaseFraction &y) {
    return x.plus(y);
}

/// 64-bit FNV-1a over a byte string, rendered as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(std::string_view bytes);

} // namespace upsum
