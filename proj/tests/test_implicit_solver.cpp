#include "corpus.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace pfd;

namespace {

// Fixed-point iteration tau <- rhs(sigma, tau) at a generous cap, independent of the solver.
std::vector<TateSeries> fixed_point(const PolySystem& sys, int D, const Rational& cap) {
    const std::size_t n = sys.n(), m = sys.m();
    FieldParams K = sys.params->field.with_cap(cap);
    auto R = make_params(K, sys.sigma, D);
    std::vector<TateSeries> F(m, TateSeries(R));
    for (int it = 0; it <= D; ++it) {
        std::vector<TateSeries> next(m, TateSeries(R));
        for (std::size_t i = 0; i < m; ++i) {
            // stored digits of P are exact; negate after lifting to the big cap
            for (const auto& [e, c0] : sys.polys[i].terms()) {
                FieldElement c = -c0.with_cap(cap);
                if (e[n + i] == 1 && c0 == FieldElement::one(c0.params())) {
                    bool lin = true;
                    for (std::size_t k = 0; k < e.size(); ++k)
                        if (k != n + i && e[k] != 0) lin = false;
                    if (lin) continue;
                }
                Exps J(e.begin(), e.begin() + static_cast<long>(n));
                TateSeries term = TateSeries::monomial_index(R, J, c);
                for (std::size_t j = 0; j < m; ++j) term = term * F[j].pow(static_cast<std::uint64_t>(e[n + j]));
                next[i] += term;
            }
        }
        F = next;
    }
    return F;
}

std::map<Exps, FieldElement> at_cap(const TateSeries& f, const std::vector<int>& idx, const Rational& cap) {
    std::map<Exps, FieldElement> out;
    for (const auto& [e, c] : f.terms()) {
        Exps k;
        for (int i : idx) k.push_back(e[static_cast<std::size_t>(i)]);
        auto v = c.with_cap(cap);
        if (!v.is_zero()) out.emplace(k, v);
    }
    return out;
}

std::int64_t catalan(int n) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(2 * n), static_cast<unsigned long>(n));
    return mpz_class(b / (n + 1)).get_si();
}

}  // namespace

TEST(ImplicitSolver, CatalanMatchesNewtonOracle) {
    auto oracle = oracles::newton_catalan(8);
    for (std::int64_t p : {2, 3, 5}) {
        auto sys = corpus::catalan_system(p);
        auto F = solve_at_point(sys, 8);
        auto f = F.truncated()[0];
        for (int d = 0; d <= 8; ++d) {
            ASSERT_EQ(oracle[static_cast<std::size_t>(d)].get_den(), 1);
            Exps e(f.params().nvars(), 0);
            e[static_cast<std::size_t>(F.sigma_idx[0])] = d;
            EXPECT_EQ(f.coefficient(e), FieldElement::from_int(f.field(), oracle[static_cast<std::size_t>(d)].get_num().get_si()))
                << "p=" << p << " d=" << d;
        }
    }
}

TEST(ImplicitSolver, RandomSystemsMatchFixedPointOracle) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto sys = corpus::random_system(100 + seed);
        auto F = solve_at_point(sys, 8);
        auto oracle = fixed_point(sys, 8, Rational(64));
        auto Ft = F.truncated();
        std::vector<int> all(sys.n());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        for (std::size_t i = 0; i < sys.m(); ++i)
            EXPECT_EQ(at_cap(Ft[i], F.sigma_idx, Rational(16)), at_cap(oracle[i], all, Rational(16))) << "seed " << seed;
        EXPECT_TRUE(residual_check(sys, F).ok) << "seed " << seed;
    }
}

TEST(ImplicitSolver, ResidualDetectsCorruptedSeries) {
    auto sys = corpus::catalan_system(2);
    auto F = solve_at_point(sys, 8);
    Exps e(F.ring->nvars(), 0);
    e[static_cast<std::size_t>(F.sigma_idx[0])] = 3;
    F.F[0].add_term(e, FieldElement::one(F.ring->field));
    auto r = residual_check(sys, F);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.witness.empty());
}

TEST(ImplicitSolver, StatedBoundFailsOnNaturalExample) {
    // t = a s + b t^2, v(a) = v(b) = -1: d_2 = a^2 b has valuation -3
    FieldParams K(2, false, 0, Rational(16));
    auto R = make_params(K, {"s", "t"}, 8);
    auto s = TateSeries::variable(R, "s"), t = TateSeries::variable(R, "t");
    auto a = FieldElement::monomial(K, Rational(-1), 1);
    PolySystem sys;
    sys.params = R;
    sys.sigma = {"s"};
    sys.tau = {"t"};
    sys.polys = {t - s.scalar_mul(a) - (t * t).scalar_mul(a)};
    sys.sigma_center = {FieldElement::zero(K)};
    sys.tau_center = {FieldElement::zero(K)};
    NormalizedSystem ns = normalize_system(sys, working_cap(K.cap, 8, Rational(1)));
    auto F = solve_formal(ns, 8);
    auto r = certify_bounds(F, ns);
    EXPECT_EQ(r.v_piB, Rational(1));
    EXPECT_FALSE(r.bound_ok);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_NE(r.witness->find("v=-3"), std::string::npos);
    EXPECT_TRUE(r.tree_bound_ok);
    // Catalan-times-powers oracle: d_n = Cat_{n-1} a^n b^(n-1), v = -(2n - 1)
    Exps e(F.ring->nvars(), 0);
    for (int d = 1; d <= 8; ++d) {
        e[static_cast<std::size_t>(F.sigma_idx[0])] = d;
        EXPECT_EQ(F.F[0].coefficient(e).valuation(), Valuation(Rational(-(2 * d - 1)) + vp_int(catalan(d - 1), 2)))
            << d;
    }
}

TEST(ImplicitSolver, CatalanSatisfiesStatedBound) {
    auto sys = corpus::catalan_system(3);
    NormalizedSystem ns = normalize_system(sys, working_cap(sys.params->field.cap, 8, Rational(0)));
    auto r = certify_bounds(solve_formal(ns, 8), ns);
    EXPECT_TRUE(r.bound_ok);
    EXPECT_EQ(r.violations, 0u);
    EXPECT_GT(r.coefficients_checked, 0u);
}

TEST(ImplicitSolver, PullbackFunctionalEquation) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto sys = corpus::random_system(300 + seed);
        auto F0 = solve_at_point(sys, 8);
        auto F1 = solve_at_point(pullback_system(sys, 1), 8);
        auto F2 = solve_at_point(pullback_system(sys, 2), 8);
        EXPECT_TRUE(pullback_check(F0, F1).ok);
        EXPECT_TRUE(pullback_check(F1, F2).ok);
    }
}

TEST(ImplicitSolver, PullbackCheckRejectsUnrelatedSeries) {
    auto F0 = solve_at_point(corpus::catalan_system(2), 8);
    auto F1 = solve_at_point(corpus::catalan_system(2), 8);
    auto r = pullback_check(F0, F1);
    EXPECT_FALSE(r.ok);
    EXPECT_FALSE(r.witness.empty());
}

TEST(ImplicitSolver, SingularJacobianIsRejected) {
    FieldParams K(2, false, 0, Rational(8));
    auto R = make_params(K, {"s", "t"}, 8);
    auto s = TateSeries::variable(R, "s"), t = TateSeries::variable(R, "t");
    PolySystem sys;
    sys.params = R;
    sys.sigma = {"s"};
    sys.tau = {"t"};
    sys.polys = {t * t - s};
    sys.sigma_center = {FieldElement::zero(K)};
    sys.tau_center = {FieldElement::zero(K)};
    EXPECT_THROW(solve_at_point(sys, 4), Error);
}

TEST(ImplicitSolver, RadiusGrowthStepReachesThreshold) {
    auto r = radius_growth_step(Rational(5, 2), 2);
    EXPECT_EQ(r.next, Rational(3, 2));
    EXPECT_EQ(r.steps_to_target, 3);
    EXPECT_EQ(radius_growth_step(Rational(1, 4), 3).steps_to_target, 0);
    EXPECT_EQ(radius_growth_step(Rational(1, 3), 3).steps_to_target, 1);
    EXPECT_THROW(radius_growth_step(Rational(-1), 2), Error);
}
