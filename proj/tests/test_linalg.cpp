#include "pfd/errors.hpp"
#include "pfd/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace pfd;

namespace {

Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int range = 5) {
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<int>(rng() % static_cast<unsigned>(2 * range + 1)) - range;
    return m;
}

// rank = size of the largest nonzero minor; brute force for tiny matrices
mpq_class det(std::vector<std::vector<mpq_class>> a) {
    std::size_t n = a.size();
    if (n == 0) return 1;
    mpq_class d = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (a[0][j] == 0) continue;
        std::vector<std::vector<mpq_class>> minor;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<mpq_class> row;
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(a[i][k]);
            minor.push_back(row);
        }
        d += (j % 2 ? -1 : 1) * a[0][j] * det(minor);
    }
    return d;
}

std::size_t minor_rank(const Matrix& m) {
    std::size_t best = 0;
    std::size_t R = m.rows(), C = m.cols();
    for (std::size_t rm = 1; rm < (1u << R); ++rm)
        for (std::size_t cm = 1; cm < (1u << C); ++cm) {
            std::size_t k = static_cast<std::size_t>(__builtin_popcountll(rm));
            if (k != static_cast<std::size_t>(__builtin_popcountll(cm)) || k <= best) continue;
            std::vector<std::vector<mpq_class>> a;
            for (std::size_t i = 0; i < R; ++i) {
                if (!(rm >> i & 1)) continue;
                std::vector<mpq_class> row;
                for (std::size_t j = 0; j < C; ++j)
                    if (cm >> j & 1) row.push_back(m(i, j));
                a.push_back(row);
            }
            if (det(a) != 0) best = k;
        }
    return best;
}

}  // namespace

TEST(Linalg, RankMatchesMinorOracle) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 60; ++t) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
        Matrix m = random_matrix(rng, r, c, 2);
        if (t % 3 == 0 && r > 1)
            for (std::size_t j = 0; j < c; ++j) m(r - 1, j) = m(0, j) * 2;
        EXPECT_EQ(rank(m), minor_rank(m));
    }
}

TEST(Linalg, NullspaceIsKernel) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 40; ++t) {
        Matrix m = random_matrix(rng, 1 + rng() % 5, 1 + rng() % 7);
        Matrix N = nullspace(m);
        EXPECT_EQ(N.cols() + rank(m), m.cols());
        EXPECT_TRUE((m * N).is_zero());
        EXPECT_EQ(rank(N), N.cols());
    }
}

TEST(Linalg, SolveAndInverse) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 30; ++t) {
        std::size_t n = 1 + rng() % 5;
        Matrix m = random_matrix(rng, n, n);
        if (rank(m) < n) continue;
        Matrix inv = inverse(m);
        EXPECT_EQ(m * inv, Matrix::identity(n));
        Matrix b = random_matrix(rng, n, 2), x;
        ASSERT_TRUE(solve(m, b, x));
        EXPECT_EQ(m * x, b);
    }
    Matrix sing(2, 2);
    EXPECT_THROW(inverse(sing), Error);
    Matrix b(2, 1);
    b(0, 0) = 1;
    Matrix x;
    EXPECT_FALSE(solve(sing, b, x));
}

TEST(Linalg, SpanIntersectionDimension) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; ++t) {
        std::size_t d = 6;
        Matrix a = random_matrix(rng, d, 1 + rng() % 4), b = random_matrix(rng, d, 1 + rng() % 4);
        Matrix I = intersect_spans(a, b);
        // dim(A ∩ B) = dim A + dim B - dim(A + B)
        EXPECT_EQ(I.cols(), rank(a) + rank(b) - rank(Matrix::hstack(a, b)));
        Matrix x;
        if (I.cols()) {
            EXPECT_TRUE(solve(a, I, x));
            EXPECT_TRUE(solve(b, I, x));
        }
        EXPECT_TRUE(same_span(a, column_basis(a)));
    }
}

TEST(Linalg, ParallelRrefMatchesSerial) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        Matrix m = random_matrix(rng, 10 + rng() % 10, 10 + rng() % 15, 9);
        auto s = kernels::rref_serial(m), p = kernels::rref_parallel(m);
        EXPECT_EQ(s.R, p.R);
        EXPECT_EQ(s.pivots, p.pivots);
    }
}
