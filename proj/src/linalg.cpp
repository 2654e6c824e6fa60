#include "pfd/linalg.hpp"

#include "pfd/errors.hpp"

#include <algorithm>

namespace pfd {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(c_, r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const mpq_class& x) { return x == 0; });
}

std::vector<mpq_class> Matrix::apply(const std::vector<mpq_class>& v) const {
    if (v.size() != c_) fail(ErrorKind::Value, "matrix-vector size mismatch");
    std::vector<mpq_class> out(r_);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < c_; ++j)
            if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
    return out;
}

Matrix Matrix::column_block(std::size_t c0, std::size_t c1) const {
    Matrix m(r_, c1 - c0);
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = c0; j < c1; ++j) m(i, j - c0) = (*this)(i, j);
    return m;
}

Matrix Matrix::select_columns(const std::vector<std::size_t>& idx) const {
    Matrix m(r_, idx.size());
    for (std::size_t i = 0; i < r_; ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
    return m;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(idx.size(), c_);
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < c_; ++j) m(i, j) = (*this)(idx[i], j);
    return m;
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_) fail(ErrorKind::Value, "hstack row mismatch");
    Matrix m(a.r_, a.c_ + b.c_);
    for (std::size_t i = 0; i < a.r_; ++i) {
        for (std::size_t j = 0; j < a.c_; ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.c_; ++j) m(i, a.c_ + j) = b(i, j);
    }
    return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.c_) fail(ErrorKind::Value, "vstack column mismatch");
    Matrix m(a.r_ + b.r_, a.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
        for (std::size_t j = 0; j < a.c_; ++j) m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.r_; ++i)
        for (std::size_t j = 0; j < a.c_; ++j) m(a.r_ + i, j) = b(i, j);
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.c_ != b.r_) fail(ErrorKind::Value, "matrix product size mismatch");
    Matrix m(a.r_, b.c_);
    for (std::size_t i = 0; i < a.r_; ++i)
        for (std::size_t k = 0; k < a.c_; ++k) {
            const mpq_class& x = a(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.c_; ++j)
                if (b(k, j) != 0) m(i, j) += x * b(k, j);
        }
    return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) fail(ErrorKind::Value, "matrix sum size mismatch");
    Matrix m = a;
    for (std::size_t k = 0; k < m.a_.size(); ++k) m.a_[k] += b.a_[k];
    return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) fail(ErrorKind::Value, "matrix difference size mismatch");
    Matrix m = a;
    for (std::size_t k = 0; k < m.a_.size(); ++k) m.a_[k] -= b.a_[k];
    return m;
}

Matrix Matrix::scaled(const mpq_class& s) const {
    Matrix m = *this;
    for (auto& x : m.a_) x *= s;
    return m;
}

namespace kernels {

namespace {

template <bool Parallel>
Echelon rref_impl(const Matrix& m) {
    Echelon e{m, {}};
    Matrix& R = e.R;
    const std::size_t rows = R.rows(), cols = R.cols();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t piv = rows;
        for (std::size_t i = row; i < rows; ++i)
            if (R(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv == rows) continue;
        if (piv != row)
            for (std::size_t j = 0; j < cols; ++j) std::swap(R(piv, j), R(row, j));
        mpq_class inv = 1 / R(row, col);
        for (std::size_t j = col; j < cols; ++j) R(row, j) *= inv;
        const std::ptrdiff_t nrows = static_cast<std::ptrdiff_t>(rows);
#pragma omp parallel for schedule(dynamic, 4) if (Parallel)
        for (std::ptrdiff_t ii = 0; ii < nrows; ++ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            if (i == row || R(i, col) == 0) continue;
            mpq_class f = R(i, col);
            for (std::size_t j = col; j < cols; ++j)
                if (R(row, j) != 0) R(i, j) -= f * R(row, j);
        }
        e.pivots.push_back(col);
        ++row;
    }
    return e;
}

}  // namespace

Echelon rref_serial(const Matrix& m) { return rref_impl<false>(m); }
Echelon rref_parallel(const Matrix& m) { return rref_impl<true>(m); }

}  // namespace kernels

Echelon rref(const Matrix& m) {
    if (m.rows() * m.cols() >= 20000) return kernels::rref_parallel(m);
    return kernels::rref_serial(m);
}

std::size_t rank(const Matrix& m) { return rref(m).rank(); }

Matrix nullspace(const Matrix& m) {
    Echelon e = rref(m);
    const std::size_t n = m.cols();
    std::vector<bool> is_piv(n, false);
    for (auto c : e.pivots) is_piv[c] = true;
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < n; ++j)
        if (!is_piv[j]) free.push_back(j);
    Matrix K(n, free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
        K(free[k], k) = 1;
        for (std::size_t r = 0; r < e.pivots.size(); ++r) K(e.pivots[r], k) = -e.R(r, free[k]);
    }
    return K;
}

Matrix column_basis(const Matrix& m) { return m.select_columns(rref(m).pivots); }

bool solve(const Matrix& m, const Matrix& b, Matrix& x) {
    Matrix aug = Matrix::hstack(m, b);
    Echelon e = rref(aug);
    const std::size_t n = m.cols();
    for (auto c : e.pivots)
        if (c >= n) return false;
    x = Matrix(n, b.cols());
    for (std::size_t r = 0; r < e.pivots.size(); ++r)
        for (std::size_t k = 0; k < b.cols(); ++k) x(e.pivots[r], k) = e.R(r, n + k);
    return true;
}

Matrix inverse(const Matrix& m) {
    if (m.rows() != m.cols()) fail(ErrorKind::Value, "inverse of a non-square matrix");
    Matrix x;
    if (!solve(m, Matrix::identity(m.rows()), x) || rank(m) != m.rows())
        fail(ErrorKind::Singularity, "singular matrix");
    return x;
}

bool same_span(const Matrix& a, const Matrix& b) {
    std::size_t ra = rank(a), rb = rank(b);
    if (ra != rb) return false;
    return rank(Matrix::hstack(a, b)) == ra;
}

Matrix intersect_spans(const Matrix& a, const Matrix& b) {
    Matrix A = column_basis(a), B = column_basis(b);
    // A x = B y  <=>  [A | -B] (x, y) = 0
    Matrix K = nullspace(Matrix::hstack(A, B.scaled(-1)));
    Matrix X(A.cols(), K.cols());
    for (std::size_t i = 0; i < A.cols(); ++i)
        for (std::size_t k = 0; k < K.cols(); ++k) X(i, k) = K(i, k);
    return column_basis(A * X);
}

}  // namespace pfd
