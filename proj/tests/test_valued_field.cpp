#include "pfd/valued_field.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pfd;

namespace {

// digits of n mod p^cap, computed with GMP
std::vector<std::int64_t> padic_digits(mpz_class n, std::int64_t p, int cap) {
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(cap));
    n %= mod;
    if (n < 0) n += mod;
    std::vector<std::int64_t> d;
    for (int k = 0; k < cap; ++k) {
        mpz_class r = n % p;
        d.push_back(r.get_si());
        n /= p;
    }
    return d;
}

FieldElement random_element(const FieldParams& K, std::mt19937_64& rng, int lo = 0) {
    std::vector<std::pair<Rational, std::int64_t>> t;
    std::uniform_int_distribution<std::int64_t> dig(0, K.p - 1);
    for (std::int64_t k = lo * K.scale(); k < K.cap_index(); k += 1 + static_cast<std::int64_t>(rng() % 3))
        t.push_back({K.exponent_of(k), dig(rng)});
    return FieldElement::make(K, t);
}

}  // namespace

TEST(ValuedField, IntegerDigitsMatchGmpExpansion) {
    std::mt19937_64 rng(1);
    for (std::int64_t p : {2, 3, 5, 7}) {
        FieldParams K(p, false, 0, Rational(12));
        for (int i = 0; i < 50; ++i) {
            std::int64_t n = static_cast<std::int64_t>(rng() % 2000000) - 1000000;
            auto x = FieldElement::from_int(K, n);
            auto d = padic_digits(mpz_class(static_cast<long>(n)), p, 12);
            for (int k = 0; k < 12; ++k) EXPECT_EQ(x.digit_at(Rational(k)), d[static_cast<std::size_t>(k)]) << n;
        }
    }
}

TEST(ValuedField, RingOperationsAgreeWithIntegers) {
    std::mt19937_64 rng(2);
    for (std::int64_t p : {2, 3, 5}) {
        FieldParams K(p, false, 0, Rational(10));
        for (int i = 0; i < 100; ++i) {
            std::int64_t a = static_cast<std::int64_t>(rng() % 20001) - 10000;
            std::int64_t b = static_cast<std::int64_t>(rng() % 20001) - 10000;
            auto A = FieldElement::from_int(K, a), B = FieldElement::from_int(K, b);
            EXPECT_EQ(A + B, FieldElement::from_int(K, a + b));
            EXPECT_EQ(A - B, FieldElement::from_int(K, a - b));
            EXPECT_EQ(A * B, FieldElement::from_int(K, a * b));
        }
    }
}

TEST(ValuedField, RationalTimesDenominatorIsNumerator) {
    FieldParams K(3, false, 0, Rational(10));
    for (std::int64_t a = -20; a <= 20; ++a)
        for (std::int64_t b : {1, 2, 4, 5, 7, 3, 9}) {
            auto q = FieldElement::from_rational(K, Rational(a, b));
            // 1/3 loses digits above cap - 1
            auto lhs = (q * FieldElement::from_int(K, b)).truncate_below(Rational(8));
            EXPECT_EQ(lhs, FieldElement::from_int(K, a).truncate_below(Rational(8))) << a << "/" << b;
            if (a != 0) EXPECT_EQ(q.valuation(), Valuation(Rational(vp_int(a, 3) - vp_int(b, 3))));
        }
}

TEST(ValuedField, ValuationOfFractionalMonomials) {
    FieldParams K(2, false, 3, Rational(8));
    for (int k = -8; k < 40; ++k) {
        auto x = FieldElement::monomial(K, Rational(k, 8), 1);
        EXPECT_EQ(x.valuation(), Valuation(Rational(k, 8)));
        auto y = FieldElement::monomial(K, Rational(3, 8), 1);
        if (Rational(k + 3, 8) < K.cap) EXPECT_EQ(x * y, FieldElement::monomial(K, Rational(k + 3, 8), 1));
    }
    EXPECT_THROW(FieldElement::monomial(K, Rational(1, 16), 1), Error);
}

TEST(ValuedField, RingAxiomsProperty) {
    std::mt19937_64 rng(3);
    for (bool cp : {false, true})
        for (std::int64_t p : {2, 3}) {
            FieldParams K(p, cp, 2, Rational(6));
            for (int i = 0; i < 40; ++i) {
                auto a = random_element(K, rng), b = random_element(K, rng), c = random_element(K, rng);
                EXPECT_EQ(a + b, b + a);
                EXPECT_EQ(a * b, b * a);
                EXPECT_EQ((a + b) + c, a + (b + c));
                EXPECT_EQ((a * b) * c, a * (b * c));
                EXPECT_EQ(a * (b + c), a * b + a * c);
                EXPECT_TRUE((a - a).is_zero());
                EXPECT_GE((a + b).valuation(), std::min(a.valuation(), b.valuation()));
                if (!a.is_zero() && !b.is_zero() && a.valuation().value() + b.valuation().value() < K.cap)
                    EXPECT_EQ((a * b).valuation(), a.valuation() + b.valuation());
            }
        }
}

TEST(ValuedField, CharacteristicPHasNoCarries) {
    FieldParams F(3, true, 0, Rational(8));
    auto one = FieldElement::one(F);
    auto three = one + one + one;
    EXPECT_TRUE(three.is_zero());
    std::mt19937_64 rng(4);
    for (int i = 0; i < 30; ++i) {
        auto a = random_element(F, rng), b = random_element(F, rng);
        // Frobenius is additive
        EXPECT_EQ((a + b).pow(3), a.pow(3) + b.pow(3));
    }
}

TEST(ValuedField, InverseOfUnits) {
    std::mt19937_64 rng(5);
    for (bool cp : {false, true}) {
        FieldParams K(5, cp, 1, Rational(6));
        for (int i = 0; i < 50; ++i) {
            auto a = random_element(K, rng) + FieldElement::from_int(K, 1 + static_cast<std::int64_t>(rng() % 4));
            if (a.valuation() != Valuation(0)) continue;
            EXPECT_EQ(a * a.invert(), FieldElement::one(K));
        }
    }
    EXPECT_THROW(FieldElement::zero(FieldParams(5, false, 1, Rational(6))).invert(), Error);
}

TEST(ValuedField, NegativeValuationInverseExactBelowShiftedCap) {
    FieldParams K(2, false, 0, Rational(10));
    auto x = FieldElement::monomial(K, Rational(-2), 1) + FieldElement::from_int(K, 3);
    auto prod = x * x.invert();
    EXPECT_EQ(prod.truncate_below(Rational(8)), FieldElement::one(K));
}

TEST(ValuedField, BinomialValuationMatchesKummer) {
    for (std::int64_t p : {2, 3, 5})
        for (int h = 1; h <= 3; ++h) {
            std::int64_t ph = ipow(p, h);
            for (std::int64_t i = 1; i < ph; ++i) {
                mpz_class b;
                mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(ph), static_cast<unsigned long>(i));
                int v = 0;
                while (b % p == 0) {
                    b /= p;
                    ++v;
                }
                EXPECT_EQ(binomial_valuation(p, h, i), Rational(v));
            }
        }
}

TEST(ValuedField, MismatchedParamsThrow) {
    auto a = FieldElement::one(FieldParams(2, false, 0, Rational(8)));
    auto b = FieldElement::one(FieldParams(3, false, 0, Rational(8)));
    EXPECT_THROW(a + b, Error);
    EXPECT_THROW(FieldParams(4, false, 0, Rational(8)), Error);
}
