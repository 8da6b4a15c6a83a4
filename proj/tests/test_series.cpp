#include "support.hpp"

#include <algorithm>
#include <functional>

#include "ellipse_lab/constants.hpp"
#include "ellipse_lab/known_series.hpp"
#include "ellipse_lab/series.hpp"

using namespace ellipse_lab;

namespace {

// Records whose dependent value is exactly f(x) under the model's variables.
std::vector<EigenvalueRecord> synthetic(const std::vector<std::string>& es, Convention conv,
                                        const std::function<Real(const Real&)>& f, const PrecisionContext& ctx,
                                        unsigned claim) {
    std::vector<EigenvalueRecord> out;
    for (const auto& s : es) {
        EllipseShape shape(ctx.parse(s), conv);
        Real lam;
        if (conv == Convention::ConstantArea) {
            lam = f(shape.eccentricity()) * fundamental_constants(ctx).rho;
        } else {
            lam = f(shape.stretch(ctx));
        }
        out.push_back({shape, lam, claim, SolverMeta{8, 8, PointDistribution::ChebyshevParameter}});
    }
    return out;
}

Real quartic(const Real& x) { return 1 + 3 * x * x + 5 * pow(x, 4); }

}  // namespace

TEST(SeriesModel, Validation) {
    SeriesModel m = maclaurin_model(4);
    EXPECT_EQ(m.exponents, (std::vector<int>{0, 2, 4, 6}));
    EXPECT_NO_THROW(m.validate());
    m.exponents = {0, 3};
    EXPECT_THROW(m.validate(), DomainError);
    SeriesModel a = asymptotic_model(3);
    EXPECT_EQ(a.exponents, (std::vector<int>{-2, -1, 0}));
    EXPECT_EQ(a.convention(), Convention::ConstantSemiMajor);
    a.exponents = {-3, -1};
    EXPECT_THROW(a.validate(), DomainError);
    SeriesModel k = maclaurin_model(3);
    k.known_prefix = {{2, Real(1)}};
    EXPECT_THROW(k.validate(), DomainError);
    EXPECT_EQ(coefficient_index(maclaurin_model(1), 6), 3);
    EXPECT_EQ(coefficient_index(asymptotic_model(1), -1), -1);
}

TEST(FitInterpolating, ExactPolynomialRecovery) {
    PrecisionContext ctx(50);
    auto recs = synthetic({"0.1", "0.2", "0.3"}, Convention::ConstantArea, quartic, ctx, 50);
    auto fit = fit_interpolating(recs, maclaurin_model(3), ctx);
    ASSERT_EQ(fit.coefficients.size(), 3u);
    const int want[] = {1, 3, 5};
    for (int i = 0; i < 3; ++i) EXPECT_LT(abs(fit.coefficients[i] - want[i]), pow10_at(-48, ctx.working_digits()));
    for (unsigned d : fit.trusted_digits) {
        EXPECT_LE(d, 48u);
        EXPECT_GE(d, 44u);
    }
    EXPECT_EQ(fit.data_fingerprint.size(), 16u);
}

TEST(FitInterpolating, KnownPrefixIsSubtracted) {
    PrecisionContext ctx(50);
    auto recs = synthetic({"0.1", "0.2"}, Convention::ConstantArea, quartic, ctx, 50);
    SeriesModel m = maclaurin_model(3);
    m.known_prefix = {{0, ctx.make(1)}};
    auto fit = fit_interpolating(recs, m, ctx);
    ASSERT_EQ(fit.coefficients.size(), 2u);
    EXPECT_LT(abs(fit.coefficients[0] - 3), pow10_at(-47, ctx.working_digits()));
    EXPECT_LT(abs(fit.coefficients[1] - 5), pow10_at(-47, ctx.working_digits()));
}

TEST(FitInterpolating, AsymptoticClosedFormsFromSyntheticData) {
    PrecisionContext ctx(60);
    const Real pi = pi_at(ctx.working_digits());
    auto f = [&](const Real& s) {
        Real sum = 0;
        for (int nu = -2; nu <= 5; ++nu) sum += known::asymptotic_coefficient(nu, pi) * pow(s, nu);
        return sum;
    };
    auto recs = synthetic({"0.9998", "0.9999", "0.99993", "0.99995", "0.99997", "0.99998", "0.99999", "0.999995"},
                          Convention::ConstantSemiMajor, f, ctx, 60);
    SeriesModel m = asymptotic_model(8);
    m.known_prefix = {{-2, Real(pi * pi / 4)}, {-1, Real(pi / 2)}};
    auto fit = fit_interpolating(recs, m, ctx);
    EXPECT_GE(ellipse_lab::testing::digits_vs(fit.coefficients[0], "0.75"), 40);
    EXPECT_GE(agreeing_digits(fit.coefficients[1], known::asymptotic_coefficient(1, pi)), 35);
}

TEST(FitInterpolating, Errors) {
    PrecisionContext ctx(30);
    auto recs = synthetic({"0.1", "0.2"}, Convention::ConstantArea, quartic, ctx, 30);
    EXPECT_THROW(fit_interpolating(recs, maclaurin_model(3), ctx), InsufficientDataError);
    auto dup = synthetic({"0.1", "0.1", "0.2"}, Convention::ConstantArea, quartic, ctx, 30);
    EXPECT_THROW(fit_interpolating(dup, maclaurin_model(3), ctx), SingularError);
    EXPECT_THROW(fit_interpolating(recs, asymptotic_model(2), ctx), ConventionMismatchError);
}

TEST(FitInterpolating, ReproducesInputsAndIgnoresOrder) {
    PrecisionContext ctx(40);
    auto f = [](const Real& x) { return Real(exp(x * x)); };
    std::vector<std::string> es = {"0.05", "0.1", "0.15", "0.2", "0.25", "0.3", "0.35"};
    auto recs = synthetic(es, Convention::ConstantArea, f, ctx, 40);
    SeriesModel m = maclaurin_model(7);
    auto fit = fit_interpolating(recs, m, ctx);
    const Real rho = fundamental_constants(ctx).rho;
    for (const auto& r : recs)
        EXPECT_GE(agreeing_digits(evaluate_series(fit, r.shape.eccentricity(), ctx), Real(r.lambda / rho)), 38);
    auto shuffled = recs;
    std::reverse(shuffled.begin(), shuffled.end());
    std::rotate(shuffled.begin(), shuffled.begin() + 3, shuffled.end());
    auto fit2 = fit_interpolating(shuffled, m, ctx);
    for (std::size_t i = 0; i < fit.coefficients.size(); ++i)
        EXPECT_GE(agreeing_digits(fit2.coefficients[i], fit.coefficients[i]), 30) << i;
    EXPECT_EQ(fit.data_fingerprint, fit2.data_fingerprint);
}

TEST(FitInterpolating, OverdeterminedFitIsLeastSquares) {
    PrecisionContext ctx(40);
    auto recs = synthetic({"0.1", "0.2", "0.3", "0.4", "0.5"}, Convention::ConstantArea, quartic, ctx, 40);
    auto fit = fit_interpolating(recs, maclaurin_model(3), ctx);
    EXPECT_LT(abs(fit.coefficients[2] - 5), pow10_at(-35, ctx.working_digits()));
}

TEST(TrustedDigits, FollowThePerturbation) {
    PrecisionContext ctx(60);
    auto recs = synthetic({"0.1", "0.2", "0.3"}, Convention::ConstantArea, quartic, ctx, 60);
    auto d = estimate_trusted_digits(recs, maclaurin_model(3), ctx, pow10_at(-40, ctx.working_digits()));
    for (unsigned v : d) {
        EXPECT_LE(v, 40u);
        EXPECT_GE(v, 36u);
    }
    // a coefficient that is zero in truth flips sign under perturbation
    auto flat = synthetic({"0.1", "0.2"}, Convention::ConstantArea, [](const Real&) { return Real(1); }, ctx, 60);
    auto z = estimate_trusted_digits(flat, maclaurin_model(2), ctx, pow10_at(-40, ctx.working_digits()));
    EXPECT_EQ(z[1], 0u);
}

TEST(TrustedDigits, CappedByTheDataClaim) {
    PrecisionContext ctx(60);
    auto recs = synthetic({"0.1", "0.2", "0.3"}, Convention::ConstantArea, quartic, ctx, 20);
    auto fit = fit_interpolating(recs, maclaurin_model(3), ctx);
    for (unsigned d : fit.trusted_digits) EXPECT_LE(d, 18u);
}

TEST(TruncationDigits, SeeTheMissingTerm) {
    PrecisionContext ctx(50);
    // y = 1 + x^2 + x^4 + 10^-8 x^6, fitted with three terms
    auto f = [&](const Real& x) { return Real(1 + x * x + pow(x, 4) + pow10_at(-8, 80) * pow(x, 6)); };
    auto recs = synthetic({"0.1", "0.2", "0.3", "0.4"}, Convention::ConstantArea, f, ctx, 50);
    auto t = estimate_truncation_digits(recs, maclaurin_model(4), ctx);
    ASSERT_EQ(t.size(), 4u);
    EXPECT_GE(t[0], 12u);
    EXPECT_LE(t[0], 16u);
}

TEST(Deflation, ExposesTheNextCoefficient) {
    PrecisionContext ctx(50);
    const Real c = ctx.parse("0.118224561342087016");
    auto f = [&](const Real& x) { return Real(1 + c * pow(x, 4)); };
    auto recs = synthetic({"0.01", "0.02", "0.03"}, Convention::ConstantArea, f, ctx, 50);
    SeriesModel m = maclaurin_model(5);
    m.known_prefix = {{0, ctx.make(1)}, {2, ctx.make(0)}};
    auto pts = deflate_known(recs, m, ctx);
    for (const auto& p : pts) EXPECT_GE(agreeing_digits(p.y, c), 45);
    auto direct = fit_interpolating(recs, m, ctx);
    auto deflated = fit_deflated(pts, m, ctx);
    ASSERT_EQ(deflated.size(), direct.coefficients.size());
    for (std::size_t i = 0; i < deflated.size(); ++i)
        EXPECT_LT(abs(deflated[i] - direct.coefficients[i]), pow10_at(-30, ctx.working_digits()));
    SeriesModel none = maclaurin_model(3);
    EXPECT_THROW(deflate_known(recs, none, ctx), DomainError);
}

TEST(Deflation, AsymptoticDataLeavesC3) {
    PrecisionContext ctx(60);
    const Real pi = pi_at(ctx.working_digits());
    auto f = [&](const Real& s) {
        Real sum = 0;
        for (int nu = -2; nu <= 5; ++nu) sum += known::asymptotic_coefficient(nu, pi) * pow(s, nu);
        return sum;
    };
    auto recs = synthetic({"0.9999", "0.99999", "0.999995"}, Convention::ConstantSemiMajor, f, ctx, 60);
    SeriesModel m = asymptotic_model(8);
    for (int nu = -2; nu <= 2; ++nu) m.known_prefix.push_back({nu, known::asymptotic_coefficient(nu, pi)});
    const std::string c3 = "0.435383650779955252940603845025457624";
    auto pts = deflate_known(recs, m, ctx);
    // the deflated values approach c_3 as the stretch shrinks
    EXPECT_GE(ellipse_lab::testing::digits_vs(pts.back().y, c3), 2);
    EXPECT_GE(ellipse_lab::testing::digits_vs(fit_deflated(pts, m, ctx)[0], c3), 36);
}

TEST(EvaluateSeries, SimpleValues) {
    PrecisionContext ctx(30);
    SeriesModel m = maclaurin_model(3);
    std::vector<Real> c = {ctx.make(1), ctx.make(7), ctx.make(9)};
    EXPECT_EQ(evaluate_series(m, c, ctx.make(0), ctx), 1);
    SeriesModel a = asymptotic_model(1);
    const Real pi = pi_at(ctx.working_digits());
    std::vector<Real> lead = {Real(pi * pi / 4)};
    EXPECT_GE(agreeing_digits(evaluate_series(a, lead, ctx.parse("0.5"), ctx), Real(pi * pi)), 30);
    EXPECT_THROW(evaluate_series(m, lead, ctx.make(0), ctx), DomainError);
}

TEST(EvaluateSeries, MaclaurinTableAgreesWithRoundedValues) {
    PrecisionContext ctx(40);
    const Real rho = fundamental_constants(ctx).rho;
    for (int nu = 2; nu <= 13; ++nu)
        EXPECT_GE(ellipse_lab::testing::digits_vs(known::maclaurin_coefficient(nu, rho),
                                                  std::string(known::kMaclaurinNumeric[nu - 2])),
                  18)
            << nu;
}
