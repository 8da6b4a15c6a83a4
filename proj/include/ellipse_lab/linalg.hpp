#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "precision.hpp"

namespace ellipse_lab {

/// Dense row-major matrix of multiprecision reals.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, unsigned digits10)
        : rows_(rows), cols_(cols), data_(rows * cols, make_real(0, digits10)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Real& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    mpfr_ptr raw(std::size_t i, std::size_t j) { return data_[i * cols_ + j].backend().data(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Real> data_;
};

/// Positive row and column scale factors. Computed once from a sample matrix
/// and then frozen, so a determinant that depends smoothly on a parameter
/// stays smooth after scaling and keeps its sign.
struct Equilibration {
    std::vector<Real> row;
    std::vector<Real> col;
};

/// Factors that bring every row, then every column, to unit max |entry|.
inline Equilibration unit_max_equilibration(const Matrix& m) {
    Equilibration eq;
    eq.row.resize(m.rows());
    eq.col.resize(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Real big = abs(m(i, 0));
        for (std::size_t j = 1; j < m.cols(); ++j)
            if (abs(m(i, j)) > big) big = abs(m(i, j));
        eq.row[i] = big == 0 ? Real(1) : Real(1 / big);
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
        Real big = 0;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            Real v = abs(m(i, j)) * eq.row[i];
            if (v > big) big = v;
        }
        eq.col[j] = big == 0 ? Real(1) : Real(1 / big);
    }
    return eq;
}

inline void apply_equilibration(Matrix& m, const Equilibration& eq) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            mpfr_mul(m.raw(i, j), m.raw(i, j), eq.row[i].backend().data(), MPFR_RNDN);
            mpfr_mul(m.raw(i, j), m.raw(i, j), eq.col[j].backend().data(), MPFR_RNDN);
        }
}

/// Determinant by LU with partial pivoting; consumes the matrix.
inline Real determinant(Matrix m) {
    const std::size_t n = m.rows();
    if (n != m.cols()) throw DomainError("determinant: matrix is not square");
    if (n == 0) return make_real(1, 20);
    const unsigned prec = m(0, 0).precision();
    Real det = make_real(1, prec);
    Real factor = make_real(0, prec);
    Real tmp = make_real(0, prec);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (mpfr_cmpabs(m.raw(i, k), m.raw(piv, k)) > 0) piv = i;
        }
        if (mpfr_zero_p(m.raw(piv, k))) return make_real(0, prec);
        if (piv != k) {
            for (std::size_t j = k; j < n; ++j) mpfr_swap(m.raw(k, j), m.raw(piv, j));
            det = -det;
        }
        mpfr_mul(det.backend().data(), det.backend().data(), m.raw(k, k), MPFR_RNDN);
        for (std::size_t i = k + 1; i < n; ++i) {
            if (mpfr_zero_p(m.raw(i, k))) continue;
            mpfr_div(factor.backend().data(), m.raw(i, k), m.raw(k, k), MPFR_RNDN);
            for (std::size_t j = k + 1; j < n; ++j) {
                mpfr_mul(tmp.backend().data(), factor.backend().data(), m.raw(k, j), MPFR_RNDN);
                mpfr_sub(m.raw(i, j), m.raw(i, j), tmp.backend().data(), MPFR_RNDN);
            }
        }
    }
    return det;
}

/// Solves the square system A x = b by Gaussian elimination with full
/// pivoting. Throws SingularError when a pivot vanishes relative to the
/// working precision.
inline std::vector<Real> solve_full_pivot(Matrix a, std::vector<Real> b) {
    const std::size_t n = a.rows();
    if (n != a.cols() || b.size() != n) throw DomainError("solve_full_pivot: shape mismatch");
    if (n == 0) return {};
    const unsigned prec = a(0, 0).precision();
    std::vector<std::size_t> col_perm(n);
    std::iota(col_perm.begin(), col_perm.end(), 0);

    Real scale = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (abs(a(i, j)) > scale) scale = abs(a(i, j));
    if (scale == 0) throw SingularError("solve_full_pivot: zero matrix");
    const Real tiny = scale * pow10_at(-static_cast<long>(prec) + 3, prec);

    Real factor = make_real(0, prec), tmp = make_real(0, prec);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pr = k, pc = k;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j)
                if (mpfr_cmpabs(a.raw(i, j), a.raw(pr, pc)) > 0) {
                    pr = i;
                    pc = j;
                }
        if (abs(a(pr, pc)) <= tiny) throw SingularError("solve_full_pivot: matrix is singular to working precision");
        if (pr != k) {
            for (std::size_t j = 0; j < n; ++j) mpfr_swap(a.raw(k, j), a.raw(pr, j));
            std::swap(b[k], b[pr]);
        }
        if (pc != k) {
            for (std::size_t i = 0; i < n; ++i) mpfr_swap(a.raw(i, k), a.raw(i, pc));
            std::swap(col_perm[k], col_perm[pc]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            mpfr_div(factor.backend().data(), a.raw(i, k), a.raw(k, k), MPFR_RNDN);
            for (std::size_t j = k + 1; j < n; ++j) {
                mpfr_mul(tmp.backend().data(), factor.backend().data(), a.raw(k, j), MPFR_RNDN);
                mpfr_sub(a.raw(i, j), a.raw(i, j), tmp.backend().data(), MPFR_RNDN);
            }
            b[i] -= factor * b[k];
        }
    }
    std::vector<Real> y(n);
    for (std::size_t k = n; k-- > 0;) {
        Real s = b[k];
        for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * y[j];
        y[k] = s / a(k, k);
    }
    std::vector<Real> x(n);
    for (std::size_t k = 0; k < n; ++k) x[col_perm[k]] = std::move(y[k]);
    return x;
}

/// Least-squares solution of an over-determined system via modified
/// Gram-Schmidt QR (no normal equations).
inline std::vector<Real> solve_least_squares(const Matrix& a, const std::vector<Real>& b) {
    const std::size_t rows = a.rows(), cols = a.cols();
    if (rows < cols || b.size() != rows) throw DomainError("solve_least_squares: shape mismatch");
    const unsigned prec = a(0, 0).precision();
    std::vector<std::vector<Real>> q(cols, std::vector<Real>(rows));
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) q[j][i] = a(i, j);
    Matrix r(cols, cols, prec);
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            Real dot = make_real(0, prec);
            for (std::size_t i = 0; i < rows; ++i) dot += q[k][i] * q[j][i];
            r(k, j) = dot;
            for (std::size_t i = 0; i < rows; ++i) q[j][i] -= dot * q[k][i];
        }
        Real norm = make_real(0, prec);
        for (std::size_t i = 0; i < rows; ++i) norm += q[j][i] * q[j][i];
        norm = sqrt(norm);
        Real orig = make_real(0, prec);
        for (std::size_t i = 0; i < rows; ++i) orig += a(i, j) * a(i, j);
        if (norm == 0 || norm <= sqrt(orig) * pow10_at(-static_cast<long>(prec) + 3, prec)) {
            throw SingularError("solve_least_squares: rank-deficient design matrix");
        }
        r(j, j) = norm;
        for (std::size_t i = 0; i < rows; ++i) q[j][i] /= norm;
    }
    std::vector<Real> qtb(cols);
    for (std::size_t j = 0; j < cols; ++j) {
        Real dot = make_real(0, prec);
        for (std::size_t i = 0; i < rows; ++i) dot += q[j][i] * b[i];
        qtb[j] = dot;
    }
    std::vector<Real> x(cols);
    for (std::size_t k = cols; k-- > 0;) {
        Real s = qtb[k];
        for (std::size_t j = k + 1; j < cols; ++j) s -= r(k, j) * x[j];
        x[k] = s / r(k, k);
    }
    return x;
}

}  // namespace ellipse_lab
