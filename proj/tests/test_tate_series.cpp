#include "pfd/tate_series.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pfd;

namespace {

TateSeries random_series(const ParamsPtr& R, std::mt19937_64& rng, int terms, int maxdeg, int minval = 0) {
    TateSeries f(R);
    const auto& K = R->field;
    for (int i = 0; i < terms; ++i) {
        Exps e(R->nvars(), 0);
        for (std::size_t v = 0; v < R->nvars(); ++v) {
            std::int64_t step = R->var_step(v);
            e[v] = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(maxdeg * K.scale() / step + 1)) * step;
        }
        std::vector<std::pair<Rational, std::int64_t>> t;
        for (int k = 0; k < 3; ++k) t.push_back({Rational(minval + k), static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(K.p))});
        f.add_term(e, FieldElement::make(K, t));
    }
    return f;
}

// schoolbook product on raw term maps
std::map<Exps, FieldElement> naive_product(const TateSeries& a, const TateSeries& b) {
    std::map<Exps, FieldElement> out;
    std::int64_t cap = a.params().deg_cap_index();
    for (const auto& [ea, ca] : a.terms())
        for (const auto& [eb, cb] : b.terms()) {
            Exps e(ea.size());
            std::int64_t d = 0;
            for (std::size_t i = 0; i < e.size(); ++i) d += (e[i] = ea[i] + eb[i]);
            if (d > cap) continue;
            auto it = out.find(e);
            if (it == out.end()) out.emplace(e, ca * cb);
            else it->second += ca * cb;
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace

TEST(TateSeries, ProductMatchesSchoolbook) {
    std::mt19937_64 rng(1);
    for (bool cp : {false, true}) {
        auto R = make_params(FieldParams(3, cp, 1, Rational(8)), {"x", "y"}, 6, {1, 0});
        for (int t = 0; t < 30; ++t) {
            auto a = random_series(R, rng, 6, 3), b = random_series(R, rng, 6, 3);
            EXPECT_EQ((a * b).terms(), naive_product(a, b));
        }
    }
}

TEST(TateSeries, SerialAndParallelKernelsAgree) {
    std::mt19937_64 rng(2);
    auto R = make_params(FieldParams(2, false, 2, Rational(10)), {"x", "y", "z"}, 8);
    for (int t = 0; t < 10; ++t) {
        auto a = random_series(R, rng, 30, 3), b = random_series(R, rng, 30, 3);
        EXPECT_EQ(kernels::mul_serial(a, b), kernels::mul_parallel(a, b));
    }
}

TEST(TateSeries, RingAxiomsProperty) {
    std::mt19937_64 rng(3);
    auto R = make_params(FieldParams(2, false, 1, Rational(8)), {"x", "y"}, 20);
    for (int t = 0; t < 20; ++t) {
        auto a = random_series(R, rng, 4, 2), b = random_series(R, rng, 4, 2), c = random_series(R, rng, 4, 2);
        EXPECT_EQ(a * (b + c), a * b + a * c);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * b, b * a);
        EXPECT_TRUE((a - a).is_zero());
    }
}

TEST(TateSeries, GaussNormIsMultiplicativeOnUntruncatedProducts) {
    std::mt19937_64 rng(4);
    auto R = make_params(FieldParams(5, false, 0, Rational(12)), {"x", "y"}, 20);
    for (int t = 0; t < 30; ++t) {
        auto a = random_series(R, rng, 4, 3, static_cast<int>(rng() % 3));
        auto b = random_series(R, rng, 4, 3, static_cast<int>(rng() % 3));
        if (a.is_zero() || b.is_zero()) continue;
        EXPECT_EQ(gauss_norm(a * b), gauss_norm(a) + gauss_norm(b));
    }
}

TEST(TateSeries, SetVariableEvaluates) {
    std::mt19937_64 rng(5);
    auto R = make_params(FieldParams(3, false, 0, Rational(8)), {"x", "t"}, 8);
    auto x = TateSeries::variable(R, "x");
    for (int k = 0; k < 20; ++k) {
        auto f = random_series(R, rng, 6, 3);
        // f(x, 1) = sum over t-exponents of the x-coefficients
        TateSeries want(R);
        for (const auto& [e, c] : f.terms()) want.add_term({e[0], 0}, c);
        EXPECT_EQ(f.set_variable(1, 1), want);
        TateSeries want0(R);
        for (const auto& [e, c] : f.terms())
            if (e[1] == 0) want0.add_term(e, c);
        EXPECT_EQ(f.set_variable(1, 0), want0);
        EXPECT_EQ(f.face_restrict(1, 1).params().vars, std::vector<std::string>{"x"});
    }
    (void)x;
}

TEST(TateSeries, SubstituteShiftMatchesBinomial) {
    auto R = make_params(FieldParams(2, false, 0, Rational(10)), {"x"}, 8);
    auto x = TateSeries::variable(R, "x");
    auto one = TateSeries::constant(R, FieldElement::one(R->field));
    for (std::uint64_t n = 0; n <= 6; ++n) {
        auto f = x.pow(n);
        auto g = substitute(f, {{"x", x + one}}, R);
        TateSeries want(R);
        for (std::uint64_t k = 0; k <= n; ++k) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), n, k);
            want.add_term({static_cast<std::int64_t>(k)}, FieldElement::from_int(R->field, b.get_si()));
        }
        EXPECT_EQ(g, want) << n;
    }
}

TEST(TateSeries, LevelsTruncateAndSupport) {
    FieldParams K(2, false, 3, Rational(8));
    auto R = make_params(K, {"x", "t"}, 8, {3, 0});
    TateSeries f(R);
    f.add_term({1, 0}, FieldElement::one(K));   // x^{1/8}
    f.add_term({4, 8}, FieldElement::one(K));   // x^{1/2} t
    f.add_term({8, 0}, FieldElement::one(K));   // x
    EXPECT_EQ(f.support_level({0}), 3);
    EXPECT_EQ(f.truncate_level(1, {0}).size(), 2u);
    EXPECT_EQ(f.truncate_level(0, {0}).size(), 1u);
    EXPECT_EQ(index_level(4, K), 1);
    EXPECT_EQ(index_level(6, K), 2);
    auto g = f.frobenius_pullback({0});
    EXPECT_EQ(g.support_level({0}), 2);
    // variables at level 0 reject fractional exponents
    EXPECT_THROW(TateSeries::monomial(R, {Rational(0), Rational(1, 2)}, FieldElement::one(K)), Error);
}

TEST(TateSeries, InvertSeries) {
    std::mt19937_64 rng(6);
    auto R = make_params(FieldParams(3, false, 0, Rational(8)), {"x", "y"}, 6);
    for (int t = 0; t < 15; ++t) {
        auto u = random_series(R, rng, 4, 2, 1);
        auto f = TateSeries::constant(R, FieldElement::from_int(R->field, 2)) + u;
        auto g = invert_series(f);
        EXPECT_EQ(f * g, TateSeries::constant(R, FieldElement::one(R->field)));
    }
}

TEST(TateSeries, EmbedIsRingMap) {
    std::mt19937_64 rng(7);
    auto R = make_params(FieldParams(2, false, 1, Rational(8)), {"x", "y"}, 6);
    auto S = make_params(FieldParams(2, false, 2, Rational(8)), {"x", "y", "z"}, 6);
    for (int t = 0; t < 10; ++t) {
        auto a = random_series(R, rng, 5, 2), b = random_series(R, rng, 5, 2);
        EXPECT_EQ((a * b).embed(S), a.embed(S) * b.embed(S));
        EXPECT_EQ((a + b).embed(S), a.embed(S) + b.embed(S));
        EXPECT_EQ(a.embed(S).size(), a.size());
    }
    EXPECT_THROW(TateSeries::variable(S, "z").embed(R), Error);
}
