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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "upsum/bitcore.hpp"

using namespace upsum;

TEST_CASE("bit strings parse, print and order") {
    const BitString b = BitString::parse("0110");
    CHECK(b.size() == 4);
    CHECK(b.to_string() == "0110");
    CHECK(!b[0]);
    CHECK(b[1]);
    CHECK(BitString::parse("").empty());
    CHECK_THROWS_AS(BitString::parse("01x"), std::invalid_argument);

    CHECK(BitString::parse("01") < BitString::parse("010"));
    CHECK(BitString::parse("011") > BitString::parse("0101"));
    CHECK(is_proper_prefix(BitString::parse("01"), BitString::parse("010")));
    CHECK(!is_proper_prefix(BitString::parse("01"), BitString::parse("01")));
    CHECK(is_prefix(BitString::parse("01"), BitString::parse("01")));
    CHECK(BitString::from_uint(5, 4).to_string() == "0101");
}

TEST_CASE("bit strings across word boundaries") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        std::string a;
        std::string b;
        const std::size_t la = rng() % 150;
        const std::size_t lb = rng() % 150;
        for (std::size_t i = 0; i < la; ++i) a.push_back(rng() & 1 ? '1' : '0');
        for (std::size_t i = 0; i < lb; ++i) b.push_back(rng() & 1 ? '1' : '0');
        const BitString ba = BitString::parse(a);
        const BitString bb = BitString::parse(b);
        CHECK(concat(ba, bb).to_string() == a + b);
        CHECK((ba < bb) == (a < b));
        CHECK((ba == bb) == (a == b));
        const std::size_t cut = la == 0 ? 0 : rng() % la;
        CHECK(ba.prefix(cut).to_string() == a.substr(0, cut));
        CHECK(ba.suffix(cut).to_string() == a.substr(cut));
    }
}

TEST_CASE("to_integer reads MSB first") {
    CHECK(BitString::parse("101").to_integer() == 5);
    CHECK(BitString::parse("").to_integer() == 0);
    const BitString big = BitString::parse(std::string(70, '1'));
    CHECK(big.to_integer() == (mpz_class(1) << 70) - 1);
}

TEST_CASE("dyadic rationals are canonical") {
    CHECK(DyadicRational::parse("62/2^6").to_string() == "31/2^5");
    CHECK(DyadicRational::parse("4/2^3") == DyadicRational::parse("1/2^1"));
    CHECK(DyadicRational::parse("3").to_string() == "3/2^0");
    CHECK(DyadicRational::zero().to_string() == "0/2^0");
    CHECK_THROWS(DyadicRational::parse("1/3"));
    CHECK_THROWS(DyadicRational::parse("-1/2^1"));

    const DyadicRational a = DyadicRational::parse("3/2^4");
    const DyadicRational b = DyadicRational::parse("5/2^2");
    CHECK((a + b).to_string() == "23/2^4");
    CHECK((b - a).to_string() == "17/2^4");
    CHECK((a * b).to_string() == "15/2^6");
    CHECK_THROWS_AS(a - b, std::domain_error);
    CHECK(a < b);
    CHECK(b.mod_one().to_string() == "1/2^2");
    CHECK(a.scaled_pow2(2).to_string() == "3/2^2");
    CHECK(a.to_double() == doctest::Approx(0.1875));
}

TEST_CASE("dyadic arithmetic agrees with GMP rationals") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const unsigned long m1 = rng() % 100000;
        const unsigned long m2 = rng() % 100000;
        const unsigned e1 = rng() % 70;
        const unsigned e2 = rng() % 70;
        const DyadicRational a(mpz_class(m1), e1);
        const DyadicRational b(mpz_class(m2), e2);
        mpq_class qa(mpz_class(m1), mpz_class(1) << e1);
        mpq_class qb(mpz_class(m2), mpz_class(1) << e2);
        qa.canonicalize();
        qb.canonicalize();
        auto as_q = [](const DyadicRational &d) {
            mpq_class q(d.numerator(), mpz_class(1) << static_cast<mp_bitcnt_t>(d.exponent()));
            q.canonicalize();
            return q;
        };
        CHECK(as_q(a + b) == qa + qb);
        CHECK(as_q(a * b) == qa * qb);
        CHECK(((a <=> b) < 0) == (qa < qb));
    }
}

TEST_CASE("bits_to_dyadic") {
    CHECK(bits_to_dyadic(BitString::parse("")) == DyadicRational::zero());
    CHECK(bits_to_dyadic(BitString::parse("1")).to_string() == "1/2^1");
    CHECK(bits_to_dyadic(BitString::parse("01")).to_string() == "1/2^2");
    CHECK(bits_to_dyadic(BitString::parse("0110")).to_string() == "3/2^3");
    // Trailing zeros do not change the value.
    CHECK(bits_to_dyadic(BitString::parse("0")) == bits_to_dyadic(BitString::parse("")));
    CHECK(bits_to_dyadic(BitString::parse("1100")) == bits_to_dyadic(BitString::parse("11")));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::string s;
        const std::size_t len = rng() % 90;
        for (std::size_t i = 0; i < len; ++i) s.push_back(rng() & 1 ? '1' : '0');
        const DyadicRational d = bits_to_dyadic(BitString::parse(s));
        mpq_class q(d.numerator(), mpz_class(1) << static_cast<mp_bitcnt_t>(d.exponent()));
        q.canonicalize();
        CHECK(q == oracle::bits_value(s));
    }
}

TEST_CASE("phase fractions wrap modulo one turn") {
    const PhaseFraction a = PhaseFraction::parse("3/2^2");
    const PhaseFraction b = PhaseFraction::parse("1/2^1");
    CHECK(dyadic_add_mod1(a, b).to_string() == "1/2^2");
    CHECK(a.negated().to_string() == "1/2^2");
    CHECK(PhaseFraction::parse("0").negated().is_zero());
    CHECK(PhaseFraction::from_grid(-1, 4).to_string() == "15/2^4");
    CHECK(PhaseFraction::from_grid(17, 4).to_string() == "1/2^4");
    CHECK(PhaseFraction::parse("5/2^2") == PhaseFraction::parse("1/2^2"));
}

TEST_CASE("fnv1a is stable") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}
