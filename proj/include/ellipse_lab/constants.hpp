#pragma once

#include "bessel.hpp"
#include "precision.hpp"
#include "roots.hpp"

namespace ellipse_lab {

/// pi, the first zero j01 of J_0, and rho = j01^2 (the unit-disk fundamental
/// eigenvalue). Computed once per context and cached.
inline const FundamentalConstants& fundamental_constants(const PrecisionContext& ctx) {
    return ctx.cached_constants([&] {
        const unsigned w = ctx.working_digits();
        // Root localised past the working precision so all carried digits are good.
        PrecisionContext root_ctx(w, ctx.guard_digits());
        auto j0 = [&](const Real& x) { return bessel_j(0, x, root_ctx); };
        auto dj0 = [&](const Real& x) { return Real(-bessel_j(1, x, root_ctx)); };
        auto res = find_root(j0, dj0, make_real(2, w), make_real(3, w), root_ctx);
        FundamentalConstants c;
        c.pi = pi_at(w);
        c.j01 = with_precision(res.root, w);
        c.rho = c.j01 * c.j01;
        return c;
    });
}

}  // namespace ellipse_lab
