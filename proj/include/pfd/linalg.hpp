#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <vector>

namespace pfd {

// Dense row-major matrix over Q.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
    static Matrix identity(std::size_t n);

    std::size_t rows() const { return r_; }
    std::size_t cols() const { return c_; }
    mpq_class& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
    const mpq_class& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

    Matrix transpose() const;
    bool is_zero() const;
    std::vector<mpq_class> apply(const std::vector<mpq_class>& v) const;
    // Columns [c0, c1).
    Matrix column_block(std::size_t c0, std::size_t c1) const;
    Matrix select_columns(const std::vector<std::size_t>& idx) const;
    Matrix select_rows(const std::vector<std::size_t>& idx) const;
    static Matrix hstack(const Matrix& a, const Matrix& b);
    static Matrix vstack(const Matrix& a, const Matrix& b);

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    Matrix scaled(const mpq_class& s) const;
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    std::size_t r_ = 0, c_ = 0;
    std::vector<mpq_class> a_;
};

struct Echelon {
    Matrix R;                          // reduced row echelon form
    std::vector<std::size_t> pivots;   // pivot column of each nonzero row
    std::size_t rank() const { return pivots.size(); }
};

Echelon rref(const Matrix& m);
std::size_t rank(const Matrix& m);
// Columns form a basis of {x : m x = 0}.
Matrix nullspace(const Matrix& m);
// Columns form a basis of the column space (subset of the original columns).
Matrix column_basis(const Matrix& m);
// Solves m x = b for each column of b; returns false when inconsistent.
bool solve(const Matrix& m, const Matrix& b, Matrix& x);
// Inverse of a square invertible matrix; throws on singular input.
Matrix inverse(const Matrix& m);
// Column spaces equal.
bool same_span(const Matrix& a, const Matrix& b);
// Basis (columns) of the intersection of two column spaces.
Matrix intersect_spans(const Matrix& a, const Matrix& b);

namespace kernels {
Echelon rref_serial(const Matrix& m);
Echelon rref_parallel(const Matrix& m);
}  // namespace kernels

}  // namespace pfd
