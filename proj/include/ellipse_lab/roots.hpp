#pragma once

#include <cstddef>
#include <functional>

#include "precision.hpp"

namespace ellipse_lab {

struct RootResult {
    Real root;
    Real lo;   ///< final bracket, f(lo) and f(hi) of opposite sign
    Real hi;
    int evaluations = 0;
};

namespace detail {

inline int sign_of(const Real& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

template <class F, class DF>
RootResult find_root_impl(F&& f, DF* df, const Real& lo_in, const Real& hi_in, const PrecisionContext& ctx) {
    const unsigned w = ctx.working_digits();
    Real a = with_precision(lo_in, w);
    Real b = with_precision(hi_in, w);
    if (a > b) std::swap(a, b);
    RootResult out;
    Real fa = f(a);
    Real fb = f(b);
    out.evaluations = 2;
    if (fa == 0) return {a, a, a, out.evaluations};
    if (fb == 0) return {b, b, b, out.evaluations};
    if (sign_of(fa) == sign_of(fb)) {
        throw InvalidBracketError("find_root: no sign change on [" + format_sci(a, 12) + ", " +
                                  format_sci(b, 12) + "]");
    }

    const Real tol = pow10_at(-static_cast<long>(ctx.digits()), w);
    const Real coarse = pow10_at(-10, w);
    const int cap = 20 * static_cast<int>(ctx.digits()) + 60;
    auto width_ok = [&](const Real& t) -> bool {
        Real scale = abs(a) > abs(b) ? abs(a) : abs(b);
        return (b - a) <= t * scale;
    };

    // Robust phase.
    while (!width_ok(coarse)) {
        if (out.evaluations > cap) throw NonConvergenceError("find_root: bisection cap reached");
        Real m = (a + b) / 2;
        Real fm = f(m);
        ++out.evaluations;
        if (fm == 0) return {m, m, m, out.evaluations};
        if (sign_of(fm) == sign_of(fa)) {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
    }

    // Fast phase: Newton when a derivative is supplied, Illinois-weighted
    // regula falsi otherwise. Iterates are kept at least h inside the bracket
    // so that it shrinks from both sides.
    Real x_cur = abs(fa) < abs(fb) ? a : b;
    Real f_cur = abs(fa) < abs(fb) ? fa : fb;
    Real wa = fa, wb = fb;  // Illinois weights
    int last_side = 0;
    while (!width_ok(tol)) {
        if (out.evaluations > cap) throw NonConvergenceError("find_root: iteration cap reached");
        Real h = tol * abs(x_cur) / 4;
        Real x_new;
        if constexpr (!std::is_same_v<DF, std::nullptr_t>) {
            x_new = x_cur - f_cur / (*df)(x_cur);
        } else {
            x_new = (a * wb - b * wa) / (wb - wa);
        }
        if (x_new < a || x_new > b) x_new = (a + b) / 2;
        if (b - a > 4 * h) {
            if (x_new < a + h) x_new = a + h;
            if (x_new > b - h) x_new = b - h;
        }
        Real f_new = f(x_new);
        ++out.evaluations;
        if (f_new == 0) return {x_new, x_new, x_new, out.evaluations};
        if (sign_of(f_new) == sign_of(fa)) {
            a = x_new;
            fa = wa = f_new;
            if (last_side == -1) wb /= 2;
            last_side = -1;
        } else {
            b = x_new;
            fb = wb = f_new;
            if (last_side == 1) wa /= 2;
            last_side = 1;
        }
        x_cur = x_new;
        f_cur = f_new;
    }
    out.root = x_cur;
    if (x_cur < a || x_cur > b) out.root = (a + b) / 2;
    out.lo = a;
    out.hi = b;
    return out;
}

}  // namespace detail

/// Root of a continuous f on a sign-changing bracket, localised to relative
/// width 10^-ctx.digits(). Bisection to ten digits, then Illinois-weighted regula falsi.
template <class F>
RootResult find_root(F&& f, const Real& lo, const Real& hi, const PrecisionContext& ctx) {
    return detail::find_root_impl<F, std::nullptr_t>(std::forward<F>(f), nullptr, lo, hi, ctx);
}

/// As find_root, with Newton steps from the analytic derivative `df`.
template <class F, class DF>
RootResult find_root(F&& f, DF df, const Real& lo, const Real& hi, const PrecisionContext& ctx) {
    return detail::find_root_impl<F, DF>(std::forward<F>(f), &df, lo, hi, ctx);
}

}  // namespace ellipse_lab
