#include "corpus.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace pfd;

namespace {

std::vector<FaceMap> subset(const std::vector<FaceMap>& all, std::size_t mask) {
    std::vector<FaceMap> S;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (mask >> i & 1) S.push_back(all[i]);
    return S;
}

}  // namespace

TEST(Monomials, BasisSizesAndOrder) {
    for (int n = 1; n <= 3; ++n)
        for (int D = 0; D <= 4; ++D) {
            MonomialBasis b(n, D);
            mpz_class want;
            mpz_bin_uiui(want.get_mpz_t(), static_cast<unsigned long>(n + D), static_cast<unsigned long>(n));
            EXPECT_EQ(b.size(), want.get_ui());
            for (std::size_t i = 0; i < b.size(); ++i) {
                EXPECT_EQ(b.index(b[i]), i);
                if (i) EXPECT_TRUE(grevlex_less(b[i - 1], b[i]));
            }
            MonomialBasis box(n, D, true);
            std::size_t side = static_cast<std::size_t>(D + 1), total = 1;
            for (int k = 0; k < n; ++k) total *= side;
            EXPECT_EQ(box.size(), total);
        }
    MonomialBasis b(2, 2);
    EXPECT_EQ(b.index({3, 0}), MonomialBasis::npos);
    // grevlex: x*z < y^2 in three variables
    EXPECT_TRUE(grevlex_less({1, 0, 1}, {0, 2, 0}));
}

TEST(FaceMaps, JoinAndCompatibility) {
    auto F = all_faces(2);
    EXPECT_EQ(F.size(), 9u);
    EXPECT_EQ(all_faces(3).size(), 27u);
    for (const auto& a : F)
        for (const auto& b : F) {
            bool want = true;
            for (int i = 1; i <= 2; ++i)
                if (a.value(i) && b.value(i) && *a.value(i) != *b.value(i)) want = false;
            EXPECT_EQ(compatible(a, b), want);
            if (!want) {
                EXPECT_THROW(join(a, b), Error);
                continue;
            }
            auto j = join(a, b);
            EXPECT_EQ(j, join(b, a));
            for (int i = 1; i <= 2; ++i) EXPECT_EQ(j.value(i), a.value(i) ? a.value(i) : b.value(i));
        }
    EXPECT_THROW(FaceMap({1, 1}, {0, 1}), Error);
    EXPECT_THROW(validate_faces({FaceMap({3}, {0})}, 2), Error);
    EXPECT_EQ(FaceMap({1, 2}, {0, 1}).str(), "{t1=0,t2=1}");
}

TEST(FaceIdeals, KnownGenerators) {
    auto a = intersect({FaceMap({1}, {0}), FaceMap({1}, {1})}, 1, 4);
    ASSERT_EQ(a.generators.size(), 1u);
    EXPECT_EQ(a.generators[0].str(), "t1^2 - t1");
    auto b = intersect({FaceMap({1}, {0}), FaceMap({2}, {1})}, 2, 4);
    ASSERT_EQ(b.generators.size(), 1u);
    EXPECT_EQ(b.generators[0].str(), "t1*t2 - t1");
    // no constraints: the whole slice
    EXPECT_EQ(intersect({}, 2, 2).dim(), 6u);
}

TEST(FaceIdeals, IntersectMatchesEvaluationOracle) {
    for (int n = 1; n <= 2; ++n) {
        auto F = all_faces(n);
        for (std::size_t mask = 0; mask < (1u << F.size()); mask += (n == 1 ? 1 : 5)) {
            auto S = subset(F, mask);
            auto r = intersect(S, n, 3);
            EXPECT_EQ(r.dim(), oracles::ideal_dim(S, n, 3)) << "n=" << n << " mask=" << mask;
            for (const auto& g : r.generators)
                for (const auto& s : S) EXPECT_TRUE(oracles::vanishes_on(g, s, n, 3)) << g.str() << " on " << s.str();
            Matrix re = expand_generators(r.generators, r.basis);
            if (r.dim()) EXPECT_TRUE(same_span(re, r.span));
        }
    }
}

TEST(FaceIdeals, ModularLawAndExactnessSmall) {
    auto F = all_faces(1);
    for (std::size_t mask = 0; mask < (1u << F.size()); ++mask) {
        auto S = subset(F, mask);
        EXPECT_TRUE(exactness_check(S, 1, 4).ok()) << mask;
        for (const auto& eta : F) EXPECT_TRUE(modular_law_check(S, eta, 1, 4).ok) << mask << eta.str();
    }
    auto F2 = all_faces(2);
    for (std::size_t mask = 3; mask < 512; mask += 37) {
        auto S = subset(F2, mask);
        EXPECT_TRUE(exactness_check(S, 2, 3).ok()) << mask;
        EXPECT_TRUE(modular_law_check(S, F2[mask % 9], 2, 3).ok) << mask;
    }
}

TEST(Lift, InterpolationOnOneCoordinate) {
    FieldParams K(2, false, 3, Rational(8));
    auto P = make_params(K, {"x", "t1"}, 8, {3, 0});
    auto x = TateSeries::variable(P, "x"), t1 = TateSeries::variable(P, "t1");
    auto pi = FieldElement::from_int(K, 2);
    auto a = x.scalar_mul(pi) + x * x, b = x.pow(3);
    auto r = lift({{FaceMap({1}, {0}), a}, {FaceMap({1}, {1}), b}}, TateSeries(P), {1}, 1);
    EXPECT_EQ(r.f, a + (b - a) * t1);
    EXPECT_EQ(r.C.c, 0);
}

TEST(Lift, FacesExactAndDistanceBound) {
    std::mt19937_64 rng(11);
    FieldParams K(3, false, 1, Rational(6));
    auto P = make_params(K, {"x", "t1", "t2"}, 8, {1, 0, 0});
    auto F = all_faces(2);
    auto rnd = [&](int minval) {
        TateSeries s(P);
        for (int i = 0; i < 4; ++i) {
            Exps e{corpus::pick(rng, 0, 6), corpus::pick(rng, 0, 2) * 3, corpus::pick(rng, 0, 2) * 3};
            s.add_term(e, FieldElement::monomial(K, Rational(corpus::pick(rng, 3 * minval, 3 * minval + 6), 3), 1));
        }
        return s;
    };
    for (int t = 0; t < 25; ++t) {
        auto S = subset(F, static_cast<std::size_t>(corpus::pick(rng, 1, 511)));
        auto g = rnd(0), h = rnd(2);
        std::vector<std::pair<FaceMap, TateSeries>> fv;
        for (const auto& s : S) fv.emplace_back(s, restrict_face(g + h, s, {1, 2}));
        auto r = lift(fv, g, {1, 2}, 2);
        for (const auto& [s, v] : fv) EXPECT_EQ(restrict_face(r.f, s, {1, 2}), v);
        Valuation din = Valuation::infinity();
        for (const auto& [s, v] : fv) din = std::min(din, gauss_norm(v - restrict_face(g, s, {1, 2})));
        EXPECT_EQ(din, r.dist_in);
        if (!din.is_infinite()) EXPECT_GE(gauss_norm(r.f - g), Valuation(din.value() - Rational(r.C.c)));
    }
}

TEST(Lift, IncompatibleFamilyRejected) {
    FieldParams K(2, false, 0, Rational(6));
    auto P = make_params(K, {"t1", "t2"}, 6);
    auto one = TateSeries::constant(P, FieldElement::one(K));
    TateSeries zero(P);
    try {
        lift({{FaceMap({1}, {0}), zero}, {FaceMap({2}, {0}), one}}, zero, {0, 1}, 1);
        ADD_FAILURE() << "incompatible faces accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Constraint);
    }
}

TEST(Lift, ConstantOfFullBoundary) {
    std::vector<FaceMap> boundary{FaceMap({1}, {0}), FaceMap({1}, {1}), FaceMap({2}, {0}), FaceMap({2}, {1})};
    EXPECT_EQ(lift_constant(boundary, 2, 4, 2).C, Rational(1));
}

TEST(Approximation, CoincidencesMatchDirectRestriction) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto c = corpus::tuple_case(40 + seed);
        auto co = detect_coincidences(c.s, c.tower);
        std::set<std::tuple<std::size_t, std::size_t, FaceMap>> got;
        for (const auto& x : co) got.insert({x.alpha, x.beta, x.sigma});
        for (std::size_t a = 0; a < c.s.size(); ++a)
            for (std::size_t b = a + 1; b < c.s.size(); ++b)
                for (const auto& s : all_faces(c.n)) {
                    if (s.empty()) continue;
                    bool same = restrict_face(c.s[a], s, c.tower.cube_vars) == restrict_face(c.s[b], s, c.tower.cube_vars);
                    EXPECT_EQ(got.count({a, b, s}) == 1, same) << seed << " " << a << b << s.str();
                }
    }
}

TEST(Approximation, SeededJobsSatisfyConditions) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto c = corpus::tuple_case(seed);
        auto r = approximate_tuple(c.s, c.epsilon, c.tower);
        EXPECT_TRUE(r.ok()) << seed;
        for (std::size_t a = 0; a < c.s.size(); ++a) {
            EXPECT_GT(gauss_norm(c.s[a] - r.s_tilde[a]), Valuation(c.epsilon));
            EXPECT_LE(r.s_tilde[a].support_level(c.tower.tower_vars), r.h);
        }
    }
}

TEST(Approximation, VerifierRejectsBrokenTuple) {
    auto c = corpus::tuple_case(3);
    auto r = approximate_tuple(c.s, c.epsilon, c.tower);
    auto co = detect_coincidences(c.s, c.tower);
    auto broken = r.s_tilde;
    broken[0] += TateSeries::constant(c.tower.ring, FieldElement::one(c.tower.ring->field));
    auto checks = verify_approximation(c.s, broken, c.epsilon, c.tower, r.h, co);
    EXPECT_FALSE(all_ok(checks));
    for (const auto& ch : checks)
        if (!ch.ok) EXPECT_FALSE(ch.witness.empty()) << ch.name;
}

namespace {

struct HomotopyCase {
    PolySystem sys;
    std::vector<MapData> maps;
    ParamsPtr P;
};

// s - t + t^2 = 0 near the origin; maps t = low + u(u-1) * high, s = t - t^2
HomotopyCase homotopy_case(std::uint64_t seed, int nmaps) {
    FieldParams K(2, false, 3, Rational(8));
    auto S = make_params(K, {"s", "t"}, 8);
    auto s = TateSeries::variable(S, "s"), t = TateSeries::variable(S, "t");
    HomotopyCase c;
    c.sys.params = S;
    c.sys.sigma = {"s"};
    c.sys.tau = {"t"};
    c.sys.polys = {s - t + t * t};
    c.sys.sigma_center = {FieldElement::zero(K)};
    c.sys.tau_center = {FieldElement::zero(K)};
    c.P = make_params(K, {"x", "u1"}, 8, {3, 0});
    std::mt19937_64 rng(seed);
    auto rnd = [&](int terms) {
        TateSeries r(c.P);
        for (int i = 0; i < terms; ++i) {
            int lev = static_cast<int>(rng() % 4);
            Exps e{static_cast<std::int64_t>(rng() % ((1u << lev) + 1)) * (8 >> lev), 0};
            r.add_term(e, FieldElement::monomial(K, Rational(1 + 2 * lev + static_cast<int>(rng() % 4), 8) + 1, 1));
        }
        return r;
    };
    auto u = TateSeries::variable(c.P, "u1");
    auto one = TateSeries::constant(c.P, FieldElement::one(K));
    TateSeries low(c.P);
    low.add_term(Exps{8, 0}, FieldElement::monomial(K, Rational(2), 1));
    TateSeries tt = low + u * (u - one) * rnd(3);
    for (int k = 0; k < nmaps; ++k) {
        MapData m;
        m.t = {tt};
        m.s = {tt - tt * tt};
        c.maps.push_back(m);
        tt = tt + u * (u - one) * rnd(2);
    }
    return c;
}

}  // namespace

TEST(Homotopy, SingleMapFactorization) {
    auto c = homotopy_case(3, 1);
    auto P0 = make_params(c.P->field, {"x"}, 8, {3});
    MapData m;
    m.t = {restrict_face(c.maps[0].t[0], FaceMap({1}, {0}), {1}).embed(P0)};
    m.s = {restrict_face(c.maps[0].s[0], FaceMap({1}, {0}), {1}).embed(P0)};
    auto r = homotopy_factor(m, c.sys, EpsilonPolicy{});
    for (const auto& ch : r.checks) EXPECT_TRUE(ch.ok) << ch.name << " " << ch.witness;
}

TEST(Homotopy, TupleAgreesOnFacesAndIsConstantOnTheta1) {
    auto c = homotopy_case(3, 2);
    auto r = homotopy_tuple(c.maps, c.sys, {"u1"}, EpsilonPolicy{});
    for (const auto& ch : r.checks) EXPECT_TRUE(ch.ok) << ch.name << " " << ch.witness;
    ASSERT_EQ(r.H.size(), 2u);
    for (const auto& H : r.H)
        for (const auto& ch : H.checks) EXPECT_TRUE(ch.ok) << ch.name << " " << ch.witness;
}
