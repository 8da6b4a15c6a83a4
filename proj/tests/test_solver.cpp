#include "support.hpp"

#include "ellipse_lab/constants.hpp"
#include "ellipse_lab/known_series.hpp"
#include "ellipse_lab/solver.hpp"

using namespace ellipse_lab;
using ellipse_lab::testing::digits_vs;

namespace {

SolverConfig config(unsigned digits) {
    SolverConfig c;
    c.target_digits = digits;
    return c;
}

// Eigenfunction coefficients at the computed eigenvalue, normalized so the
// J_0 coefficient is 1: the first row of the collocation system is dropped
// and the rest solved.
std::vector<Real> mode_coefficients(const Real& lam, const std::vector<PolarPoint>& pts, unsigned m,
                                    const PrecisionContext& ctx) {
    Matrix a = collocation_matrix(lam, pts, m, ctx);
    const unsigned w = ctx.working_digits();
    Matrix sub(m - 1, m - 1, w);
    std::vector<Real> rhs(m - 1);
    for (unsigned i = 1; i < m; ++i) {
        rhs[i - 1] = -a(i, 0);
        for (unsigned j = 1; j < m; ++j) sub(i - 1, j - 1) = a(i, j);
    }
    auto c = solve_full_pivot(sub, rhs);
    c.insert(c.begin(), make_real(1, w));
    return c;
}

}  // namespace

TEST(BoundaryPoints, CircleHasUnitRadius) {
    PrecisionContext ctx(30);
    EllipseShape circle(ctx.make(0), Convention::ConstantArea);
    for (const auto& p : boundary_points(circle, 3, PointDistribution::UniformParameter, ctx))
        EXPECT_LT(abs(p.r - 1), pow10_at(-30, ctx.working_digits()));
}

TEST(BoundaryPoints, SinglePointAtQuarterPi) {
    PrecisionContext ctx(30);
    const Real pi = pi_at(ctx.working_digits());
    for (auto dist : {PointDistribution::UniformParameter, PointDistribution::ChebyshevParameter}) {
        auto t = boundary_parameters(1, dist, ctx.working_digits());
        ASSERT_EQ(t.size(), 1u);
        EXPECT_LT(abs(t[0] - pi / 4), pow10_at(-30, ctx.working_digits()));
    }
}

TEST(BoundaryPoints, OnTheEllipseInsideTheQuarter) {
    PrecisionContext ctx(40);
    const Real half_pi = pi_at(ctx.working_digits()) / 2;
    for (auto conv : {Convention::ConstantArea, Convention::ConstantSemiMajor}) {
        EllipseShape shape(ctx.parse("0.8"), conv);
        const Real a = shape.semi_major(ctx), b = shape.semi_minor(ctx);
        auto pts = boundary_points(shape, 4, PointDistribution::ChebyshevParameter, ctx);
        auto ts = boundary_parameters(4, PointDistribution::ChebyshevParameter, ctx.working_digits());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Real x = pts[i].r * cos(pts[i].theta), y = pts[i].r * sin(pts[i].theta);
            EXPECT_LT(abs(x * x / (a * a) + y * y / (b * b) - 1), pow10_at(-40, ctx.working_digits()));
            EXPECT_GT(pts[i].theta, 0);
            EXPECT_LT(pts[i].theta, half_pi);
            if (i > 0) {
                EXPECT_GT(ts[i], ts[i - 1]);
            }
        }
        // Chebyshev parameters are symmetric about pi/4
        EXPECT_LT(abs(ts[0] + ts[3] - half_pi), pow10_at(-40, ctx.working_digits()));
    }
}

TEST(CollocationMatrix, CircleDeterminantVanishesAtRho) {
    PrecisionContext ctx(40);
    const auto& k = fundamental_constants(ctx);
    EllipseShape circle(ctx.make(0), Convention::ConstantArea);
    auto pts = boundary_points(circle, 1, PointDistribution::UniformParameter, ctx);
    Matrix m = collocation_matrix(k.rho, pts, 1, ctx);
    EXPECT_LT(abs(m(0, 0)), pow10_at(-40, ctx.working_digits()));
    EXPECT_GT(abs(collocation_matrix(k.rho * 1.01, pts, 1, ctx)(0, 0)), 1e-3);
}

TEST(CollocationMatrix, EntriesAreBesselTimesCosine) {
    PrecisionContext ctx(30);
    EllipseShape shape(ctx.parse("0.6"), Convention::ConstantArea);
    auto pts = boundary_points(shape, 5, PointDistribution::ChebyshevParameter, ctx);
    Real lam = ctx.parse("6.1");
    Matrix m = collocation_matrix(lam, pts, 5, ctx);
    Real kappa = sqrt(lam);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (unsigned j = 0; j < 5; ++j) {
            Real expect = bessel_j(static_cast<int>(2 * j), kappa * pts[i].r, ctx) * cos(2 * j * pts[i].theta);
            EXPECT_LT(abs(m(i, j) - expect), pow10_at(-30, ctx.working_digits())) << i << "," << j;
        }
    PolarPoint axis{ctx.parse("1.2"), ctx.make(0)};
    Matrix row = collocation_matrix(lam, std::vector<PolarPoint>{axis}, 3, ctx);
    for (unsigned j = 0; j < 3; ++j)
        EXPECT_LT(abs(row(0, j) - bessel_j(static_cast<int>(2 * j), kappa * axis.r, ctx)),
                  pow10_at(-30, ctx.working_digits()));
    EXPECT_THROW(collocation_matrix(ctx.make(-1), pts, 5, ctx), DomainError);
}

TEST(SolveFundamental, CircleIsRho) {
    PrecisionContext ctx(60);
    auto rec = solve_fundamental(EllipseShape(ctx.make(0), Convention::ConstantArea), config(50), ctx);
    EXPECT_GE(rec.digits_claimed, 50u);
    EXPECT_GE(digits_vs(rec.lambda, "5.783185962946784521175995758455807035071441806423685587087123714456064"), 50);
    EXPECT_EQ(rec.solver.collocation_count, rec.solver.basis_size);
}

TEST(SolveFundamental, MaclaurinPartialSumNearCircle) {
    PrecisionContext ctx(30);
    auto rec = solve_fundamental(EllipseShape(ctx.parse("0.1"), Convention::ConstantArea), config(30), ctx);
    const auto& k = fundamental_constants(ctx);
    Real e2 = ctx.parse("0.01"), pw = ctx.make(1), sum = ctx.make(0);
    for (int nu = 0; nu <= 13; ++nu) {
        sum += known::maclaurin_coefficient(nu, k.rho) * pw;
        pw *= e2;
    }
    EXPECT_GE(agreeing_digits(Real(rec.lambda / k.rho), sum), 27);
}

TEST(SolveFundamental, AsymptoticPartialSumNearStrip) {
    PrecisionContext ctx(30);
    EllipseShape shape(ctx.parse("0.9998"), Convention::ConstantSemiMajor);
    auto rec = solve_fundamental(shape, config(25), ctx);
    const Real s = shape.stretch(ctx), pi = pi_at(ctx.working_digits());
    Real sum = ctx.make(0), pw = pow(s, -2);
    for (int nu = -2; nu <= 5; ++nu) {
        sum += known::asymptotic_coefficient(nu, pi) * pw;
        pw *= s;
    }
    // the gap is the first omitted term, c_6 stretch^6
    Real gap = rec.lambda - sum;
    Real c6 = parse_real(known::kAsymptoticNumeric[8], ctx.working_digits());
    EXPECT_LT(abs(gap / rec.lambda), 6e-11);
    EXPECT_GT(gap / (c6 * pow(s, 6)), 0.9);
    EXPECT_LT(gap / (c6 * pow(s, 6)), 1.1);
}

TEST(SolveFundamental, ConventionInvariance) {
    PrecisionContext ctx(30);
    for (const char* e : {"0.3", "0.9", "0.99"}) {
        auto a = solve_fundamental(EllipseShape(ctx.parse(e), Convention::ConstantArea), config(30), ctx);
        auto p = solve_fundamental(EllipseShape(ctx.parse(e), Convention::ConstantSemiMajor), config(30), ctx);
        auto converted = convert_eigenvalue(a, Convention::ConstantSemiMajor);
        EXPECT_GE(agreeing_digits(converted.lambda, p.lambda), 28) << e;
    }
}

TEST(SolveFundamental, LadderDifferencesShrink) {
    PrecisionContext ctx(30);
    SolverConfig c = config(30);
    c.basis_size = 6;
    c.ladder_step = 2;
    auto rep = solve_fundamental_report(EllipseShape(ctx.parse("0.5"), Convention::ConstantArea), c, ctx);
    ASSERT_GE(rep.rungs.size(), 4u);
    for (std::size_t i = 2; i < rep.rungs.size(); ++i) {
        Real d_prev = abs(rep.rungs[i - 1].lambda - rep.rungs[i - 2].lambda);
        Real d_cur = abs(rep.rungs[i].lambda - rep.rungs[i - 1].lambda);
        EXPECT_LE(d_cur, d_prev * 1.0001) << "rung " << i;
    }
}

TEST(SolveFundamental, MidpointResidualIsSmall) {
    PrecisionContext ctx(30);
    EllipseShape shape(ctx.parse("0.6"), Convention::ConstantArea);
    auto rep = solve_fundamental_report(shape, config(30), ctx);
    const unsigned m = rep.record.solver.basis_size;
    PrecisionContext wctx(rep.working_digits + 20, 5);
    auto pts = boundary_points(shape, m, PointDistribution::ChebyshevParameter, wctx);
    Real lam = with_precision(rep.record.lambda, wctx.working_digits());
    auto c = mode_coefficients(lam, pts, m, wctx);
    // midpoints in the parameter between consecutive matching points
    auto ts = boundary_parameters(m, PointDistribution::ChebyshevParameter, wctx.working_digits());
    const Real a = shape.semi_major(wctx), b = shape.semi_minor(wctx), kappa = sqrt(lam);
    Real worst = 0;
    for (unsigned i = 0; i + 1 < m; ++i) {
        Real t = (ts[i] + ts[i + 1]) / 2;
        Real x = a * cos(t), y = b * sin(t);
        Real r = sqrt(x * x + y * y), th = atan2(y, x);
        Real u = 0;
        for (unsigned k = 0; k < m; ++k) u += c[k] * bessel_j(static_cast<int>(2 * k), kappa * r, wctx) * cos(2 * k * th);
        worst = std::max(worst, Real(abs(u)));
    }
    // u(0) = c_0 J_0(0) = 1 is the interior normalization
    EXPECT_LT(worst, pow10_at(-static_cast<long>(rep.record.digits_claimed), wctx.working_digits()));
}

TEST(SolveFundamental, IncreasesWithEccentricity) {
    PrecisionContext ctx(15);
    Real prev = 0;
    for (const char* e : {"0", "0.1", "0.3", "0.5", "0.7", "0.9", "0.97", "0.99", "0.997", "0.9999"}) {
        auto rec = solve_fundamental(EllipseShape(ctx.parse(e), Convention::ConstantArea), config(15), ctx);
        EXPECT_GT(rec.lambda, prev) << e;
        prev = rec.lambda;
    }
}

TEST(SolveFundamental, RejectsBadInputs) {
    PrecisionContext ctx(20);
    EXPECT_THROW(solve_fundamental(EllipseShape(ctx.parse("0.9999996"), Convention::ConstantArea), config(15), ctx),
                 DomainError);
    SolverConfig rect = config(15);
    rect.basis_size = 8;
    rect.collocation_count = 10;
    EXPECT_THROW(solve_fundamental(EllipseShape(ctx.parse("0.5"), Convention::ConstantArea), rect, ctx), DomainError);
    EXPECT_THROW(solve_fundamental(EllipseShape(ctx.parse("0.5"), Convention::ConstantArea), config(60), ctx),
                 DomainError);
}

TEST(SolveFundamental, TinyPadGivesNoSignChange) {
    PrecisionContext ctx(20);
    SolverConfig c = config(15);
    c.basis_size = 2;
    c.bracket_pad = 1e-30;
    EXPECT_THROW(solve_fundamental(EllipseShape(ctx.parse("0.9"), Convention::ConstantArea), c, ctx),
                 NoSignChangeError);
}

TEST(SolveFundamental, ShortLadderFailsCertification) {
    PrecisionContext ctx(40);
    SolverConfig c = config(40);
    c.basis_size = 4;
    c.max_rungs = 2;
    EXPECT_THROW(solve_fundamental(EllipseShape(ctx.parse("0.5"), Convention::ConstantArea), c, ctx),
                 CertificationError);
}
