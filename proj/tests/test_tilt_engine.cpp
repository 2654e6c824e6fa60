#include "pfd/tilt_engine.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pfd;

namespace {

// c^(p^k) converges to the Teichmuller lift
FieldElement teich_by_powers(const FieldParams& K, std::int64_t c) {
    FieldElement x = FieldElement::from_int(K, c);
    for (int k = 0; k < 2 * floor(K.cap) + 2; ++k) x = x.pow(static_cast<std::uint64_t>(K.p));
    return x;
}

FieldElement random_flat(const FieldParams& F, std::mt19937_64& rng, int depth, bool unit) {
    std::vector<std::pair<Rational, std::int64_t>> t;
    std::int64_t step = ipow(F.p, depth);
    std::int64_t k0 = unit ? 0 : step * static_cast<std::int64_t>(rng() % 3);
    t.push_back({F.exponent_of(k0), 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(F.p - 1))});
    for (std::int64_t k = k0 + step; k < F.cap_index(); k += step)
        if (rng() % 2) t.push_back({F.exponent_of(k), static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(F.p))});
    return FieldElement::make(F, t);
}

}  // namespace

TEST(TiltEngine, TeichmullerMatchesPowerLimit) {
    for (std::int64_t p : {2, 3, 5, 7}) {
        FieldParams K(p, false, 0, Rational(8));
        for (std::int64_t c = 1; c < p; ++c) {
            auto w = teichmuller(K, c);
            EXPECT_EQ(w, teich_by_powers(K, c));
            EXPECT_EQ(w.digit_at(Rational(0)), c);
        }
    }
}

TEST(TiltEngine, SharpOfMonomialIsTeichmullerTimesPower) {
    for (std::int64_t p : {2, 3, 5}) {
        FieldParams F(p, true, 2, Rational(6));
        for (std::int64_t c = 1; c < p; ++c)
            for (int k = 0; k < 8; ++k) {
                Rational e(k, 1);
                auto t = flat_of_monomial(F, c, e, 2);
                EXPECT_EQ(sharp(t), teich_by_powers(F.sharp(), c).shift(e)) << p << " " << c << " " << k;
            }
    }
}

TEST(TiltEngine, SharpIsMultiplicativeOnMonomials) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 60; ++i) {
        std::int64_t p = (i % 3 == 0) ? 2 : (i % 3 == 1 ? 3 : 5);
        FieldParams F(p, true, 2, Rational(6));
        auto mono = [&] {
            std::int64_t c = 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p - 1));
            return flat_of_monomial(F, c, Rational(static_cast<std::int64_t>(rng() % 3)), 2);
        };
        auto a = mono(), b = mono();
        EXPECT_EQ(sharp(mul(a, b)), sharp(a) * sharp(b));
    }
}

TEST(TiltEngine, AdditiveCongruenceOnCompatibleElements) {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 40; ++i) {
        std::int64_t p = i % 2 ? 2 : 3;
        FieldParams F(p, true, 2, Rational(5));
        auto t = from_flat(random_flat(F, rng, 2, i % 4 == 0), 2);
        check_integrity(t);
        EXPECT_TRUE(additive_congruence_check(t));
    }
}

TEST(TiltEngine, TamperedSequenceFailsIntegrity) {
    FieldParams F(3, true, 2, Rational(6));
    auto t = flat_of_monomial(F, 2, Rational(1), 2);
    check_integrity(t);
    auto bad = t;
    bad.sequence[1] += FieldElement::monomial(bad.sequence[1].params(), Rational(3), 1);
    EXPECT_THROW(check_integrity(bad), Error);
    auto short_seq = t;
    short_seq.sequence.pop_back();
    EXPECT_THROW(check_integrity(short_seq), Error);
    EXPECT_THROW(flat_of_monomial(F, 1, Rational(0), 3), Error);
}

TEST(TiltEngine, UnitTransferCertificate) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
        std::int64_t p = i % 2 ? 3 : 2;
        // level 4, digits below 1 at level 2 so that depth 2 roots exist
        FieldParams K(p, false, 4, Rational(4));
        std::vector<std::pair<Rational, std::int64_t>> t{{Rational(0), 1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p - 1))}};
        for (std::int64_t k = 1; k < K.cap_index(); ++k)
            if ((k >= K.scale() || k % (p * p) == 0) && rng() % 3 == 0) t.push_back({K.exponent_of(k), static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p))});
        auto a = FieldElement::make(K, t);
        auto u = unit_transfer(a, 2);
        EXPECT_GE(u.certificate, Valuation(1));
        EXPECT_TRUE(u.residue_roundtrip);
    }
    FieldParams K(2, false, 2, Rational(6));
    EXPECT_THROW(unit_transfer(FieldElement::monomial(K, Rational(1, 4), 1), 2), Error);
}

TEST(TiltEngine, B1PerfChecks) {
    for (std::int64_t p : {2, 3})
        for (int h : {1, 2}) {
            auto cs = verify_b1perf(b1perf_maps(p, h, Rational(12)));
            ASSERT_EQ(cs.size(), 3u);
            for (const auto& c : cs) EXPECT_TRUE(c.ok) << p << " " << h << " " << c.name << " " << c.witness;
        }
    EXPECT_THROW(b1perf_maps(2, 1, Rational(1)), Error);
}

TEST(TiltEngine, B1PerfReductionRelation) {
    auto d = b1perf_maps(3, 1, Rational(8));
    auto w = TateSeries::variable(d.A, "w"), u = TateSeries::variable(d.A, "u");
    auto pi = FieldElement::from_int(d.field, 3);
    auto one = TateSeries::constant(d.A, FieldElement::one(d.field));
    EXPECT_EQ(b1perf_reduce(d, w.pow(3)), u.scalar_mul(pi) + one);
}
