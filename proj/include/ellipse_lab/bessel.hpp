#pragma once

#include <cmath>
#include <vector>

#include "precision.hpp"

namespace ellipse_lab {

namespace detail {

/// Rough natural log of |J_n(x)| (Debye asymptotics above the turning point,
/// O(1) amplitude below it). Only used to size recurrences and guard digits.
inline double log_bessel_j_estimate(double n, double x) {
    if (x <= 0) return n == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    if (n <= x + 1.0) return -0.5 * std::log(std::max(1.0, x));
    if (x < 1e-3 * n) {
        // Leading series term: (x/2)^n / n!
        return n * std::log(x / 2.0) - std::lgamma(n + 1.0);
    }
    double alpha = std::acosh(n / x);
    double t = std::tanh(alpha);
    return -n * (alpha - t) - 0.5 * std::log(2.0 * M_PI * n * std::max(t, 1e-6));
}

/// Start order for Miller's backward recurrence so that orders up to `n_max`
/// come out with about `digits` correct digits. The relative error of the
/// normalised values is of the order of J_start(x) itself.
inline unsigned miller_start_order(unsigned n_max, double x, unsigned digits) {
    const double need = (digits + 5.0) * std::log(10.0);
    double ref = std::min(log_bessel_j_estimate(n_max, x), 0.0);
    unsigned n = std::max<unsigned>(n_max, static_cast<unsigned>(std::ceil(x))) + 10;
    unsigned step = std::max<unsigned>(4, n / 32);
    while (true) {
        double est = log_bessel_j_estimate(n, x);
        if (est <= ref - need && est <= -need) break;
        n += step;
    }
    return n + (n & 1u);
}

struct SeriesValue {
    Real value;
    double log10_max_term;
};

/// Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!) at `work_digits`.
inline SeriesValue bessel_j_series(unsigned n, const Real& x_in, unsigned work_digits) {
    Real x = with_precision(x_in, work_digits);
    Real half = x / 2;
    Real q = half * half;
    Real term = make_real(1, work_digits);
    for (unsigned i = 1; i <= n; ++i) {
        term *= half;
        term /= i;
    }
    Real sum = term;
    double max_log = log10_abs(term);
    for (unsigned long k = 1;; ++k) {
        term *= q;
        term /= k * (k + n);
        term = -term;
        sum += term;
        double lt = log10_abs(term);
        max_log = std::max(max_log, lt);
        if (term == 0) break;
        if (static_cast<double>(k) > 0.5 * static_cast<double>(x) &&
            lt < max_log - work_digits - 2) {
            break;
        }
    }
    return {sum, max_log};
}

/// J_0(x), J_1(x), ..., J_{n_max}(x) by Miller's backward recurrence,
/// normalised with J_0 + 2 sum J_{2k} = 1.
inline std::vector<Real> bessel_j_miller(unsigned n_max, const Real& x_in, unsigned work_digits,
                                         unsigned extra_start = 0) {
    std::vector<Real> out(n_max + 1);
    if (x_in == 0) {
        for (unsigned i = 0; i <= n_max; ++i) out[i] = make_real(i == 0 ? 1 : 0, work_digits);
        return out;
    }
    const double xd = static_cast<double>(x_in);
    unsigned start = miller_start_order(n_max, xd, work_digits) + extra_start;
    start += start & 1u;

    Real x = with_precision(x_in, work_digits);
    Real inv2x = make_real(2, work_digits);
    inv2x /= x;
    Real next = make_real(0, work_digits);   // p_{n+1}
    Real cur = make_real(1, work_digits);    // p_n
    Real prev = make_real(0, work_digits);
    Real norm = make_real(0, work_digits);
    Real tmp = make_real(0, work_digits);
    for (auto& v : out) v = make_real(0, work_digits);

    // cur holds p_start; walk down to p_0.
    for (unsigned n = start; n > 0; --n) {
        if (n <= n_max) mpfr_set(out[n].backend().data(), cur.backend().data(), MPFR_RNDN);
        if (n % 2 == 0) mpfr_add(norm.backend().data(), norm.backend().data(), cur.backend().data(), MPFR_RNDN);
        // p_{n-1} = (2n/x) p_n - p_{n+1}
        mpfr_mul_ui(tmp.backend().data(), inv2x.backend().data(), n, MPFR_RNDN);
        mpfr_mul(tmp.backend().data(), tmp.backend().data(), cur.backend().data(), MPFR_RNDN);
        mpfr_sub(prev.backend().data(), tmp.backend().data(), next.backend().data(), MPFR_RNDN);
        mpfr_swap(next.backend().data(), cur.backend().data());
        mpfr_swap(cur.backend().data(), prev.backend().data());
    }
    mpfr_set(out[0].backend().data(), cur.backend().data(), MPFR_RNDN);
    // norm = sum_{k>=1} p_{2k}; total = p_0 + 2 norm
    mpfr_mul_2ui(norm.backend().data(), norm.backend().data(), 1, MPFR_RNDN);
    mpfr_add(norm.backend().data(), norm.backend().data(), cur.backend().data(), MPFR_RNDN);
    for (auto& v : out) mpfr_div(v.backend().data(), v.backend().data(), norm.backend().data(), MPFR_RNDN);
    return out;
}

inline bool use_series(double x, unsigned digits) {
    return x <= std::max(30.0, 0.5 * digits);
}

}  // namespace detail

/// J_n(x) for integer n >= 0 and real x >= 0, correct to ctx.digits()
/// (relative when |J_n(x)| >= 1, absolute otherwise).
/// Throws PrecisionError when the result cannot be certified even after one
/// retry with doubled guard digits.
inline Real bessel_j(int n, const Real& x, const PrecisionContext& ctx) {
    if (n < 0) throw DomainError("bessel_j: negative order");
    if (x < 0) throw DomainError("bessel_j: negative argument");
    const auto order = static_cast<unsigned>(n);
    const double xd = static_cast<double>(x);

    auto attempt = [&](const PrecisionContext& c, Real& result) -> bool {
        const int target = -static_cast<int>(c.digits()) - static_cast<int>(c.guard_digits()) / 2;
        if (detail::use_series(xd, c.digits())) {
            unsigned extra = static_cast<unsigned>(std::ceil(xd * 0.4342944819032518)) + 2;
            auto s = detail::bessel_j_series(order, x, c.working_digits() + extra);
            double scale = std::max(0.0, log10_abs(s.value));
            double err = s.log10_max_term - (c.working_digits() + extra) - scale;
            result = with_precision(s.value, c.working_digits());
            return err <= target;
        }
        auto a = detail::bessel_j_miller(order, x, c.working_digits());
        auto b = detail::bessel_j_miller(order, x, c.working_digits(), 20 + order / 8);
        Real diff = a[order] - b[order];
        double scale = std::max(0.0, log10_abs(b[order]));
        result = with_precision(b[order], c.working_digits());
        return diff == 0 || log10_abs(diff) - scale <= target;
    };

    Real result;
    if (attempt(ctx, result)) return result;
    if (attempt(ctx.with_doubled_guard(), result)) return with_precision(result, ctx.working_digits());
    throw PrecisionError("bessel_j: cannot certify J_" + std::to_string(n) + "(" +
                         format_sci(x, 10) + ") to " + std::to_string(ctx.digits()) + " digits");
}

/// J_0(x), J_2(x), ..., J_{2(count-1)}(x) at `work_digits`; the collocation
/// basis needs all even orders at one argument.
inline std::vector<Real> bessel_j_even_orders(unsigned count, const Real& x, unsigned work_digits) {
    const unsigned n_max = 2 * (count - 1);
    std::vector<Real> all;
    if (detail::use_series(static_cast<double>(x), work_digits) && count <= 2) {
        all.resize(n_max + 1);
        unsigned extra = static_cast<unsigned>(std::ceil(static_cast<double>(x) * 0.4343)) + 2;
        for (unsigned n = 0; n <= n_max; n += 2) {
            all[n] = with_precision(detail::bessel_j_series(n, x, work_digits + extra).value, work_digits);
        }
    } else {
        all = detail::bessel_j_miller(std::max(n_max, 1u), x, work_digits);
    }
    std::vector<Real> even(count);
    for (unsigned k = 0; k < count; ++k) even[k] = std::move(all[2 * k]);
    return even;
}

}  // namespace ellipse_lab
