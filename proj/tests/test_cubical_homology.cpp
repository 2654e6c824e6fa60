#include "pfd/cubical_homology.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

using namespace pfd;

namespace {

// plain Gaussian elimination, kept separate from the library's rref
std::size_t oracle_rank(const Matrix& m) {
    std::vector<std::vector<mpq_class>> a(m.rows(), std::vector<mpq_class>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) a[i][j] = m(i, j);
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols() && r < a.size(); ++c) {
        std::size_t piv = r;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[r]);
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            if (a[i][c] == 0) continue;
            mpq_class f = a[i][c] / a[r][c];
            for (std::size_t j = c; j < m.cols(); ++j) a[i][j] -= f * a[r][j];
        }
        ++r;
    }
    return r;
}

std::size_t oracle_homology(const ChainComplexView& v, int n) {
    std::size_t dn = v.dim(n);
    std::size_t rank_out = n > 0 ? oracle_rank(v.diff[static_cast<std::size_t>(n)]) : 0;
    std::size_t rank_in = n < v.nmax ? oracle_rank(v.diff[static_cast<std::size_t>(n + 1)]) : 0;
    return dn - rank_out - rank_in;
}

std::size_t components(std::size_t nv, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    std::vector<std::size_t> parent(nv);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (auto [a, b] : edges) parent[find(a)] = find(b);
    std::size_t c = 0;
    for (std::size_t i = 0; i < nv; ++i) c += find(i) == i;
    return c;
}

}  // namespace

TEST(Cubical, ConstantModuleHomology) {
    auto m = constant_module(3, 2);
    EXPECT_FALSE(identity_violation(m).has_value());
    auto N = build_complex(m, ComplexKind::Normalized);
    EXPECT_EQ(N.dim(0), 2u);
    for (int n = 1; n <= 3; ++n) EXPECT_EQ(N.dim(n), 0u);
    EXPECT_EQ(homology(N, 0), 2u);
    EXPECT_TRUE(compare_N_C(m).ok);
}

TEST(Cubical, GraphHomologyMatchesComponentsAndCycleRank) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 12; ++t) {
        std::size_t nv = 1 + rng() % 5, ne = rng() % 6;
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (std::size_t e = 0; e < ne; ++e) edges.emplace_back(rng() % nv, rng() % nv);
        auto m = graph_module(nv, edges, 3);
        ASSERT_FALSE(identity_violation(m).has_value());
        std::size_t C = components(nv, edges);
        for (auto kind : {ComplexKind::Normalized, ComplexKind::Simple}) {
            auto v = build_complex(m, kind);
            EXPECT_EQ(homology(v, 0), C);
            EXPECT_EQ(homology(v, 1), ne + C - nv);
            EXPECT_EQ(homology(v, 2), 0u);
        }
    }
}

TEST(Cubical, HomologyMatchesOracleRanks) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        auto m = random_module(seed, 3, 6);
        for (auto kind : {ComplexKind::Full, ComplexKind::Simple, ComplexKind::Normalized}) {
            auto v = build_complex(m, kind);
            for (int n = 0; n <= 3; ++n) EXPECT_EQ(homology(v, n), oracle_homology(v, n)) << seed << complex_kind_name(kind) << n;
            for (int n = 2; n <= 3; ++n)
                EXPECT_TRUE((v.diff[static_cast<std::size_t>(n - 1)] * v.diff[static_cast<std::size_t>(n)]).is_zero());
        }
    }
}

TEST(Cubical, NormalizedEqualsSimpleOnRandomModules) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto m = random_module(seed, 3, 6);
        ASSERT_FALSE(identity_violation(m).has_value());
        for (auto d : m.dims) EXPECT_LE(d, 6u);
        EXPECT_TRUE(compare_N_C(m).ok) << seed;
    }
}

TEST(Cubical, HomologyInvariantUnderBasisChange) {
    auto m = graph_module(3, {{0, 1}, {1, 2}, {2, 0}}, 2);
    std::vector<Matrix> g;
    for (int n = 0; n <= 2; ++n) {
        Matrix x = Matrix::identity(m.dims[static_cast<std::size_t>(n)]);
        for (std::size_t i = 0; i + 1 < x.rows(); ++i) x(i, i + 1) = 2;
        g.push_back(x);
    }
    auto b = change_basis(m, g);
    EXPECT_FALSE(identity_violation(b).has_value());
    auto v = build_complex(b, ComplexKind::Normalized);
    EXPECT_EQ(homology(v, 0), 1u);
    EXPECT_EQ(homology(v, 1), 1u);
}

TEST(Cubical, TamperedFaceIsReported) {
    auto m = graph_module(2, {{0, 1}}, 2);
    m.face(2, 1, 0)(0, 0) += 1;
    auto w = identity_violation(m);
    ASSERT_TRUE(w.has_value());
    EXPECT_FALSE(w->empty());
    EXPECT_THROW(build_complex(m, ComplexKind::Normalized), Error);
}

TEST(Cubical, PolynomialModuleHomology) {
    // d = 0 is the constant module
    auto v0 = build_complex(polynomial_module(2, 0), ComplexKind::Normalized);
    EXPECT_EQ(homology(v0, 0), 1u);
    // d >= 1: the boundary of t_1 kills the constants
    for (int d = 1; d <= 3; ++d) {
        auto m = polynomial_module(2, d);
        EXPECT_FALSE(identity_violation(m).has_value());
        auto v = build_complex(m, ComplexKind::Normalized);
        EXPECT_EQ(homology(v, 0), 0u) << d;
        EXPECT_EQ(homology(v, 0), oracle_homology(v, 0));
        EXPECT_EQ(homology(v, 1), oracle_homology(v, 1));
    }
    EXPECT_TRUE(compare_N_C(polynomial_module(2, 2)).ok);
    // truncation mismatch at nmax = 3, degree 2
    auto r = compare_N_C(polynomial_module(3, 2));
    EXPECT_FALSE(r.ok);
    EXPECT_EQ(r.h_normalized[2], 0u);
    EXPECT_EQ(r.h_simple[2], 1u);
}

TEST(Cubical, CylinderIdentity) {
    for (int deg = 0; deg <= 3; ++deg) {
        auto r = cylinder_homotopy_check(polynomial_cylinder(3, deg), 7, 20);
        EXPECT_TRUE(r.ok) << deg;
        EXPECT_EQ(r.vectors_checked, 3u * 20u);
    }
    EXPECT_TRUE(cylinder_homotopy_check(constant_cylinder(3), 1, 10).ok);
}

TEST(Cubical, CylinderIdentityFailsForWrongHomotopy) {
    auto bad = polynomial_cylinder(2, 2);
    bad.s[1] = bad.s[1].scaled(2);
    try {
        cylinder_homotopy_check(bad, 1, 10);
        ADD_FAILURE() << "non-commuting data accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Integrity);
    }
    // swapped inclusions still commute with faces, so the identity itself fails
    auto d = polynomial_cylinder(2, 2);
    for (auto& x : d.inc) std::swap(x[0], x[1]);
    auto r = cylinder_homotopy_check(d, 1, 10);
    EXPECT_FALSE(r.ok);
    bool witnessed = false;
    for (const auto& c : r.checks)
        if (!c.ok) witnessed = !c.witness.empty();
    EXPECT_TRUE(witnessed);
}

TEST(Cubical, UnitContractionFaces) {
    FieldParams K(2, false, 1, Rational(6));
    auto R = make_params(K, {"t1", "t2"}, 6);
    auto t1 = TateSeries::variable(R, "t1");
    auto one = TateSeries::constant(R, FieldElement::one(K));
    auto f = one + (t1 * (one - t1)).scalar_mul(FieldElement::from_int(K, 2));
    auto H = unit_contraction(f);
    auto idx = static_cast<std::size_t>(H.params().var_index("t2"));
    EXPECT_EQ(H.set_variable(idx, 1), TateSeries::constant(H.params_ptr(), FieldElement::one(K)));
    EXPECT_EQ(H.face_restrict(idx, 0).embed(R), f);
}

TEST(Cubical, UnitComplexSmall) {
    for (std::int64_t p : {2, 3}) {
        UnitComplexParams up;
        up.field = FieldParams(p, false, 1, Rational(4));
        up.var_level = 0;
        up.trunc = 5;
        up.nmax = 2;
        up.samples = 2;
        auto r = unit_complex(up);
        EXPECT_TRUE(r.ok()) << p;
        EXPECT_EQ(r.homology[0], static_cast<std::size_t>(p - 1));
        EXPECT_EQ(r.homology[1], 0u);
    }
}
