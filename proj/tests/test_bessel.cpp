#include "support.hpp"

#include <random>

#include "ellipse_lab/bessel.hpp"
#include "ellipse_lab/constants.hpp"

using namespace ellipse_lab;
using ellipse_lab::testing::digits_vs;

namespace {

// Plain ascending series at a generous precision, as an independent oracle.
Real series_oracle(unsigned n, const Real& x_in, unsigned digits) {
    const unsigned w = 2 * digits + 40 + static_cast<unsigned>(static_cast<double>(x_in) * 0.9);
    Real x = with_precision(x_in, w);
    Real half = x / 2, q = -half * half;
    Real term = make_real(1, w);
    for (unsigned k = 1; k <= n; ++k) term = term * half / k;
    Real sum = term;
    Real eps = pow10_at(-static_cast<long>(w), w);
    for (unsigned k = 1;; ++k) {
        term = term * q / (k * (k + n));
        sum += term;
        if (abs(term) < eps * abs(sum) && k > static_cast<double>(x)) break;
    }
    return sum;
}

}  // namespace

TEST(BesselJ, AtOrigin) {
    PrecisionContext ctx(30);
    EXPECT_EQ(bessel_j(0, ctx.make(0), ctx), 1);
    EXPECT_EQ(bessel_j(3, ctx.make(0), ctx), 0);
}

TEST(BesselJ, J1AtOne) {
    PrecisionContext ctx(60);
    EXPECT_GE(digits_vs(bessel_j(1, ctx.make(1), ctx),
                        "0.4400505857449335159596822037189149131273723019927652511367581717801382"),
              60);
}

TEST(BesselJ, VanishesAtFirstZero) {
    PrecisionContext ctx(50);
    const auto& k = fundamental_constants(ctx);
    EXPECT_LT(abs(bessel_j(0, k.j01, ctx)), pow10_at(-50, ctx.working_digits()));
}

TEST(BesselJ, LargeArgumentAndHighOrder) {
    PrecisionContext ctx(60);
    EXPECT_GE(digits_vs(bessel_j(6, ctx.parse("37.5"), ctx),
                        "-0.1146384330735667300635344903094934093745969037214957686418111335738508"),
              60);
    EXPECT_GE(digits_vs(bessel_j(20, ctx.parse("3.25"), ctx),
                        "0.000000000000005972766393830537696537733153947973423705333686276102725938731933778667"),
              60);
}

TEST(BesselJ, AgreesWithSeriesOracle) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(0.0, 60.0);
    std::uniform_int_distribution<int> un(0, 40);
    PrecisionContext ctx(40);
    for (int i = 0; i < 40; ++i) {
        Real x = ctx.make(ux(rng));
        unsigned n = static_cast<unsigned>(un(rng));
        Real got = bessel_j(static_cast<int>(n), x, ctx);
        Real ref = series_oracle(n, x, 40);
        Real err = abs(got - ref) / std::max(Real(1), Real(abs(ref)));
        EXPECT_LT(err, pow10_at(-40, 80)) << "n=" << n << " x=" << format_sci(x, 12);
    }
}

TEST(BesselJ, EvenOrderTableMatchesSingleCalls) {
    PrecisionContext ctx(40);
    Real x = ctx.parse("17.25");
    auto table = bessel_j_even_orders(12, x, ctx.working_digits());
    ASSERT_EQ(table.size(), 12u);
    for (unsigned k = 0; k < 12; ++k)
        EXPECT_GE(agreeing_digits(table[k], bessel_j(static_cast<int>(2 * k), x, ctx)), 40) << k;
}

TEST(BesselJ, RecurrenceResidual) {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ux(0.01, 50.0);
    std::uniform_int_distribution<int> un(1, 20);
    const unsigned digits = 40;
    PrecisionContext ctx(digits);
    for (int i = 0; i < 200; ++i) {
        Real x = ctx.make(ux(rng));
        int n = un(rng);
        Real jn = bessel_j(n, x, ctx);
        Real res = bessel_j(n - 1, x, ctx) + bessel_j(n + 1, x, ctx) - 2 * n / x * jn;
        Real bound = pow10_at(-static_cast<long>(digits - 5), ctx.working_digits()) * std::max(Real(1), Real(abs(jn)));
        EXPECT_LT(abs(res), bound) << "n=" << n << " x=" << format_sci(x, 12);
    }
}

TEST(BesselJ, DerivativeIdentityAtRoot) {
    const unsigned digits = 40;
    PrecisionContext ctx(digits);
    const auto& k = fundamental_constants(ctx);
    Real h = pow10_at(-static_cast<long>(digits / 2), ctx.working_digits());
    Real fd = (bessel_j(0, k.j01 + h, ctx) - bessel_j(0, k.j01 - h, ctx)) / (2 * h);
    EXPECT_GE(agreeing_digits(fd, Real(-bessel_j(1, k.j01, ctx))), static_cast<int>(digits / 2 - 3));
}

TEST(BesselJ, RejectsNegativeInputs) {
    PrecisionContext ctx(20);
    EXPECT_THROW(bessel_j(-1, ctx.make(1), ctx), DomainError);
    EXPECT_THROW(bessel_j(0, ctx.make(-1), ctx), DomainError);
}
