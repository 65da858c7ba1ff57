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

#include "upsum/bitcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace upsum {

// ---------------------------------------------------------------- BitString

BitString BitString::parse(std::string_view text) {
    BitString out;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("bit string may only contain 0 and 1: '" +
                                        std::string(text) + "'");
        }
        out.push_back(c == '1');
    }
    return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t width) {
    BitString out;
    for (std::size_t i = width; i-- > 0;) {
        out.push_back(i < 64 && ((value >> i) & 1U));
    }
    return out;
}

void BitString::append(const BitString &other) {
    if ((size_ & 63) == 0) {
        words_.insert(words_.end(), other.words_.begin(), other.words_.end());
        size_ += other.size_;
        return;
    }
    for (std::size_t i = 0; i < other.size_; ++i) {
        push_back(other[i]);
    }
}

BitString BitString::prefix(std::size_t n) const {
    n = std::min(n, size_);
    BitString out;
    const std::size_t nwords = (n + 63) / 64;
    out.words_.assign(words_.begin(), words_.begin() + nwords);
    out.size_ = n;
    if ((n & 63) != 0) {
        out.words_.back() &= ~std::uint64_t{0} << (64 - (n & 63));
    }
    return out;
}

BitString BitString::suffix(std::size_t from) const {
    BitString out;
    for (std::size_t i = from; i < size_; ++i) {
        out.push_back((*this)[i]);
    }
    return out;
}

mpz_class BitString::to_integer() const {
    mpz_class value;
    if (size_ == 0) {
        return value;
    }
    mpz_import(value.get_mpz_t(), words_.size(), 1, sizeof(std::uint64_t), 0,
               0, words_.data());
    value >>= static_cast<mp_bitcnt_t>(words_.size() * 64 - size_);
    return value;
}

std::string BitString::to_string() const {
    std::string s(size_, '0');
    for (std::size_t i = 0; i < size_; ++i) {
        if ((*this)[i]) {
            s[i] = '1';
        }
    }
    return s;
}

std::strong_ordering operator<=>(const BitString &a, const BitString &b) noexcept {
    const std::size_t common = std::min(a.size_, b.size_);
    const std::size_t full = common / 64;
    for (std::size_t w = 0; w < full; ++w) {
        if (a.words_[w] != b.words_[w]) {
            return a.words_[w] <=> b.words_[w];
        }
    }
    if ((common & 63) != 0) {
        const std::uint64_t mask = ~std::uint64_t{0} << (64 - (common & 63));
        const std::uint64_t x = a.words_[full] & mask;
        const std::uint64_t y = b.words_[full] & mask;
        if (x != y) {
            return x <=> y;
        }
    }
    return a.size_ <=> b.size_;
}

BitString concat(const BitString &a, const BitString &b) {
    BitString out = a;
    out.append(b);
    return out;
}

bool is_prefix(const BitString &a, const BitString &b) {
    if (a.size() > b.size()) {
        return false;
    }
    return b.prefix(a.size()) == a;
}

bool is_proper_prefix(const BitString &a, const BitString &b) {
    return a.size() < b.size() && is_prefix(a, b);
}

// ----------------------------------------------------------- DyadicRational

DyadicRational::DyadicRational(mpz_class numerator, std::uint64_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
    if (sgn(num_) < 0) {
        throw std::domain_error("DyadicRational numerator must be non-negative");
    }
    canonicalize();
}

void DyadicRational::canonicalize() {
    if (sgn(num_) == 0) {
        exp_ = 0;
        return;
    }
    const std::uint64_t tz = mpz_scan1(num_.get_mpz_t(), 0);
    const std::uint64_t s = std::min(tz, exp_);
    if (s != 0) {
        num_ >>= static_cast<mp_bitcnt_t>(s);
        exp_ -= s;
    }
}

DyadicRational DyadicRational::pow2_neg(std::uint64_t k) {
    return DyadicRational(mpz_class(1), k);
}

DyadicRational DyadicRational::parse(std::string_view text) {
    const auto slash = text.find('/');
    std::string_view num_part = text.substr(0, slash);
    std::uint64_t exponent = 0;
    if (slash != std::string_view::npos) {
        std::string_view den = text.substr(slash + 1);
        if (den.size() < 3 || den.substr(0, 2) != "2^") {
            throw std::invalid_argument("dyadic rational must look like m/2^e: '" +
                                        std::string(text) + "'");
        }
        den.remove_prefix(2);
        auto [ptr, ec] = std::from_chars(den.data(), den.data() + den.size(), exponent);
        if (ec != std::errc() || ptr != den.data() + den.size()) {
            throw std::invalid_argument("bad exponent in '" + std::string(text) + "'");
        }
    }
    if (num_part.empty() ||
        !std::all_of(num_part.begin(), num_part.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
        throw std::invalid_argument("bad numerator in '" + std::string(text) + "'");
    }
    return DyadicRational(mpz_class(std::string(num_part)), exponent);
}

DyadicRational &DyadicRational::operator+=(const DyadicRational &rhs) {
    if (exp_ >= rhs.exp_) {
        num_ += mpz_class(rhs.num_ << static_cast<mp_bitcnt_t>(exp_ - rhs.exp_));
    } else {
        num_ <<= static_cast<mp_bitcnt_t>(rhs.exp_ - exp_);
        num_ += rhs.num_;
        exp_ = rhs.exp_;
    }
    canonicalize();
    return *this;
}

DyadicRational &DyadicRational::operator-=(const DyadicRational &rhs) {
    if (exp_ >= rhs.exp_) {
        num_ -= mpz_class(rhs.num_ << static_cast<mp_bitcnt_t>(exp_ - rhs.exp_));
    } else {
        num_ <<= static_cast<mp_bitcnt_t>(rhs.exp_ - exp_);
        num_ -= rhs.num_;
        exp_ = rhs.exp_;
    }
    if (sgn(num_) < 0) {
        throw std::domain_error("DyadicRational subtraction went negative");
    }
    canonicalize();
    return *this;
}

DyadicRational &DyadicRational::operator*=(const DyadicRational &rhs) {
    num_ *= rhs.num_;
    exp_ += rhs.exp_;
    canonicalize();
    return *this;
}

DyadicRational DyadicRational::scaled_pow2(std::int64_t shift) const {
    DyadicRational out = *this;
    if (out.is_zero()) {
        return out;
    }
    if (shift < 0) {
        out.exp_ += static_cast<std::uint64_t>(-shift);
    } else {
        const auto up = static_cast<std::uint64_t>(shift);
        if (out.exp_ >= up) {
            out.exp_ -= up;
        } else {
            out.num_ <<= static_cast<mp_bitcnt_t>(up - out.exp_);
            out.exp_ = 0;
        }
    }
    out.canonicalize();
    return out;
}

DyadicRational DyadicRational::mod_one() const {
    if (exp_ == 0) {
        return {};
    }
    mpz_class r;
    mpz_tdiv_r_2exp(r.get_mpz_t(), num_.get_mpz_t(), exp_);
    return DyadicRational(std::move(r), exp_);
}

double DyadicRational::to_double() const {
    return static_cast<double>(to_long_double());
}

long double DyadicRational::to_long_double() const {
    if (is_zero()) {
        return 0.0L;
    }
    const std::size_t bits = mpz_sizeinbase(num_.get_mpz_t(), 2);
    constexpr std::size_t kMantissa = 64;
    mpz_class top = num_;
    std::int64_t shift = 0;
    if (bits > kMantissa) {
        shift = static_cast<std::int64_t>(bits - kMantissa);
        top >>= static_cast<mp_bitcnt_t>(shift);
    }
    // 64-bit unsigned long on the supported (LP64) platforms.
    const auto mant = static_cast<long double>(top.get_ui());
    const long double e = static_cast<long double>(shift) - static_cast<long double>(exp_);
    if (e < -20000.0L) {
        return 0.0L;
    }
    return std::ldexp(mant, static_cast<int>(e));
}

std::string DyadicRational::to_string() const {
    return num_.get_str() + "/2^" + std::to_string(exp_);
}

std::strong_ordering operator<=>(const DyadicRational &a, const DyadicRational &b) {
    int c = 0;
    if (a.exp_ == b.exp_) {
        c = cmp(a.num_, b.num_);
    } else if (a.exp_ < b.exp_) {
        c = cmp(mpz_class(a.num_ << static_cast<mp_bitcnt_t>(b.exp_ - a.exp_)), b.num_);
    } else {
        c = cmp(a.num_, mpz_class(b.num_ << static_cast<mp_bitcnt_t>(a.exp_ - b.exp_)));
    }
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

// ------------------------------------------------------------ PhaseFraction

PhaseFraction PhaseFraction::from_grid(std::int64_t k, std::uint64_t bits) {
    mpz_class modulus = mpz_class(1) << static_cast<mp_bitcnt_t>(bits);
    mpz_class value(static_cast<long>(k));
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), value.get_mpz_t(), modulus.get_mpz_t());
    return PhaseFraction(DyadicRational(std::move(r), bits));
}

PhaseFraction PhaseFraction::negated() const {
    if (turn_.is_zero()) {
        return *this;
    }
    return PhaseFraction(DyadicRational::one() - turn_);
}

PhaseFraction PhaseFraction::plus(const PhaseFraction &other) const {
    return PhaseFraction(turn_ + other.turn_);
}

DyadicRational bits_to_dyadic(const BitString &bits) {
    return DyadicRational(bits.to_integer(), bits.size());
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace upsum
