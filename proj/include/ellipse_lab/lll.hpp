#pragma once

// LLL reduction in exact integer arithmetic (the integral variant: Gram-Schmidt
// data kept as the integers d_i and lambda_ij = d_j mu_ij, no rationals and
// no floating point).

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

#include "errors.hpp"

namespace ellipse_lab {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;
using IntMatrix = std::vector<std::vector<Integer>>;

class DependentRowsError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline Integer dot(const std::vector<Integer>& a, const std::vector<Integer>& b) {
    Integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

/// Nearest integer to num/den for den > 0, halves rounded up.
inline Integer round_div(const Integer& num, const Integer& den) {
    Integer twice = 2 * num + den;
    Integer q = twice / (2 * den);
    if (twice < 0 && q * 2 * den != twice) q -= 1;  // floor for negatives
    return q;
}

}  // namespace detail

/// Reduces the rows of `rows` with Lovasz parameter `delta` in (1/4, 1].
/// Throws DependentRowsError if the rows are linearly dependent.
inline IntMatrix lll_reduce(IntMatrix rows, const Rational& delta = Rational(3, 4)) {
    if (delta <= Rational(1, 4) || delta > 1) throw DomainError("lll_reduce: delta must lie in (1/4, 1]");
    const std::size_t n = rows.size();
    if (n == 0) return rows;
    const std::size_t dim = rows[0].size();
    for (const auto& r : rows)
        if (r.size() != dim) throw DomainError("lll_reduce: ragged matrix");
    if (n > dim) throw DependentRowsError("lll_reduce: more rows than columns");

    const Integer p = numerator(delta), q = denominator(delta);
    // d[0] = 1, d[i] = Gram determinant of the first i rows (1-based i).
    std::vector<Integer> d(n + 1, 0);
    std::vector<std::vector<Integer>> lam(n, std::vector<Integer>(n, 0));
    d[0] = 1;

    auto gram_schmidt_row = [&](std::size_t k) {
        for (std::size_t j = 0; j <= k; ++j) {
            Integer u = detail::dot(rows[k], rows[j]);
            for (std::size_t i = 0; i < j; ++i) u = (d[i + 1] * u - lam[k][i] * lam[j][i]) / d[i];
            if (j < k) {
                lam[k][j] = u;
            } else {
                if (u == 0) throw DependentRowsError("lll_reduce: rows are linearly dependent");
                d[k + 1] = u;
            }
        }
    };
    auto reduce = [&](std::size_t k, std::size_t l) {
        if (2 * abs(lam[k][l]) <= d[l + 1]) return;
        Integer r = detail::round_div(lam[k][l], d[l + 1]);
        for (std::size_t c = 0; c < dim; ++c) rows[k][c] -= r * rows[l][c];
        lam[k][l] -= r * d[l + 1];
        for (std::size_t i = 0; i < l; ++i) lam[k][i] -= r * lam[l][i];
    };
    std::size_t kmax = 0;
    auto swap_rows = [&](std::size_t k) {
        std::swap(rows[k], rows[k - 1]);
        for (std::size_t j = 0; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
        const Integer l = lam[k][k - 1];
        const Integer b = (d[k - 1] * d[k + 1] + l * l) / d[k];
        for (std::size_t i = k + 1; i <= kmax; ++i) {
            Integer t = lam[i][k];
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - l * t) / d[k];
            lam[i][k - 1] = (b * t + l * lam[i][k]) / d[k + 1];
        }
        d[k] = b;
    };

    gram_schmidt_row(0);
    std::size_t k = 1;
    while (k < n) {
        if (k > kmax) {
            kmax = k;
            gram_schmidt_row(k);
        }
        reduce(k, k - 1);
        // Lovasz: d_k d_{k-2} >= delta d_{k-1}^2 - lambda^2, in 1-based d.
        if (q * d[k + 1] * d[k - 1] < p * d[k] * d[k] - q * lam[k][k - 1] * lam[k][k - 1]) {
            swap_rows(k);
            if (k > 1) --k;
            continue;
        }
        for (std::size_t l = k - 1; l-- > 0;) reduce(k, l);
        ++k;
    }
    return rows;
}

/// Gram-Schmidt coefficients mu and squared norms B of the rows, exactly.
struct GramSchmidt {
    std::vector<std::vector<Rational>> mu;
    std::vector<Rational> norm2;
};

inline GramSchmidt gram_schmidt(const IntMatrix& rows) {
    const std::size_t n = rows.size();
    GramSchmidt gs{std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, 0)), std::vector<Rational>(n, 0)};
    std::vector<std::vector<Rational>> star(n);
    for (std::size_t i = 0; i < n; ++i) {
        star[i].assign(rows[i].begin(), rows[i].end());
        for (std::size_t j = 0; j < i; ++j) {
            Rational num = 0;
            for (std::size_t c = 0; c < rows[i].size(); ++c) num += Rational(rows[i][c]) * star[j][c];
            if (gs.norm2[j] == 0) throw DependentRowsError("gram_schmidt: dependent rows");
            gs.mu[i][j] = num / gs.norm2[j];
            for (std::size_t c = 0; c < star[i].size(); ++c) star[i][c] -= gs.mu[i][j] * star[j][c];
        }
        for (const auto& v : star[i]) gs.norm2[i] += v * v;
    }
    return gs;
}

/// True when the rows are size-reduced and satisfy the Lovasz condition.
inline bool is_lll_reduced(const IntMatrix& rows, const Rational& delta = Rational(3, 4)) {
    if (rows.empty()) return true;
    GramSchmidt gs = gram_schmidt(rows);
    const Rational half(1, 2);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (abs(gs.mu[i][j]) > half) return false;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const Rational& m = gs.mu[k][k - 1];
        if (gs.norm2[k] < (delta - m * m) * gs.norm2[k - 1]) return false;
    }
    return true;
}

}  // namespace ellipse_lab
