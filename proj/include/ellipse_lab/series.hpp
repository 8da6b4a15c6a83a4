#pragma once

// Power-series models of eigenvalue data:
//
//   EvenEccentricity: lambda_0 / rho = sum_nu C_nu e^(2 nu)     (constant area)
//   Stretch:          lambda'_0      = sum_nu c_nu stretch^nu   (constant semi-major)
//
// Exponents are stored as powers of the abscissa itself, so C_nu sits at
// exponent 2 nu. Fits interpolate (or least-squares fit) the unknown
// coefficients after the known prefix has been subtracted.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "constants.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "records_io.hpp"

namespace ellipse_lab {

enum class SeriesVariable { EvenEccentricity, Stretch };
enum class DependentVariable { LambdaOverRho, LambdaPrime };

struct KnownTerm {
    int exponent;
    Real value;
};

struct SeriesModel {
    SeriesVariable variable = SeriesVariable::EvenEccentricity;
    std::vector<int> exponents;
    DependentVariable dependent = DependentVariable::LambdaOverRho;
    std::vector<KnownTerm> known_prefix;

    void validate() const {
        if (exponents.empty()) throw DomainError("series model has no exponents");
        for (std::size_t i = 1; i < exponents.size(); ++i)
            if (exponents[i] <= exponents[i - 1]) throw DomainError("series exponents must increase strictly");
        for (int p : exponents) {
            if (variable == SeriesVariable::EvenEccentricity && (p < 0 || p % 2 != 0))
                throw DomainError("eccentricity series uses even, nonnegative exponents");
            if (variable == SeriesVariable::Stretch && p < -2)
                throw DomainError("stretch series exponents start at -2");
        }
        if (known_prefix.size() > exponents.size()) throw DomainError("known prefix longer than the model");
        for (std::size_t i = 0; i < known_prefix.size(); ++i)
            if (known_prefix[i].exponent != exponents[i])
                throw DomainError("known terms must be a prefix of the exponent schedule");
    }

    std::vector<int> unknown_exponents() const {
        return {exponents.begin() + static_cast<std::ptrdiff_t>(known_prefix.size()), exponents.end()};
    }

    Convention convention() const {
        return dependent == DependentVariable::LambdaOverRho ? Convention::ConstantArea
                                                             : Convention::ConstantSemiMajor;
    }
};

/// Maclaurin model: C_0..C_{count-1}, i.e. exponents 0, 2, ..., 2(count-1).
inline SeriesModel maclaurin_model(unsigned count) {
    SeriesModel m{SeriesVariable::EvenEccentricity, {}, DependentVariable::LambdaOverRho, {}};
    for (unsigned nu = 0; nu < count; ++nu) m.exponents.push_back(2 * static_cast<int>(nu));
    return m;
}

/// Asymptotic model: c_-2..c_{count-3}.
inline SeriesModel asymptotic_model(unsigned count) {
    SeriesModel m{SeriesVariable::Stretch, {}, DependentVariable::LambdaPrime, {}};
    for (unsigned k = 0; k < count; ++k) m.exponents.push_back(static_cast<int>(k) - 2);
    return m;
}

/// Coefficient index nu of an exponent (C_nu at e^(2 nu), c_nu at stretch^nu).
inline int coefficient_index(const SeriesModel& m, int exponent) {
    return m.variable == SeriesVariable::EvenEccentricity ? exponent / 2 : exponent;
}

struct SeriesFit {
    SeriesModel model;
    std::vector<Real> coefficients;  ///< for model.unknown_exponents()
    std::vector<unsigned> trusted_digits;
    std::string data_fingerprint;
};

/// Abscissa/ordinate pair of a record under a model.
struct DataPoint {
    Real x;
    Real y;
};

/// Stable hash of the records' text form, to tie a fit to its data.
inline std::string records_fingerprint(std::span<const EigenvalueRecord> records) {
    std::vector<std::string> lines;
    lines.reserve(records.size());
    for (const auto& r : records) lines.push_back(format_record(r));
    std::sort(lines.begin(), lines.end());
    // FNV-1a, 64 bit.
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& l : lines) {
        for (unsigned char c : l) {
            h ^= c;
            h *= 1099511628211ull;
        }
        h ^= '\n';
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::vector<DataPoint> model_data(std::span<const EigenvalueRecord> records, const SeriesModel& model,
                                         const PrecisionContext& ctx) {
    const unsigned w = ctx.working_digits();
    const Real rho = model.dependent == DependentVariable::LambdaOverRho ? fundamental_constants(ctx).rho
                                                                          : ctx.make(1);
    std::vector<DataPoint> pts;
    pts.reserve(records.size());
    for (const auto& r : records) {
        if (r.shape.convention() != model.convention()) {
            throw ConventionMismatchError("record at e = " + format_fixed(r.shape.eccentricity(), 20, true) +
                                          " uses convention " + std::string(convention_tag(r.shape.convention())) +
                                          ", model needs " + std::string(convention_tag(model.convention())));
        }
        Real x = model.variable == SeriesVariable::EvenEccentricity ? with_precision(r.shape.eccentricity(), w)
                                                                     : r.shape.stretch(ctx);
        Real y = with_precision(r.lambda, w);
        if (model.dependent == DependentVariable::LambdaOverRho) y /= rho;
        pts.push_back({std::move(x), std::move(y)});
    }
    return pts;
}

inline Real sum_terms(std::span<const int> exponents, std::span<const Real> coefficients, const Real& x) {
    Real acc = with_precision(Real(0), x.precision());
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        Real p = x;
        mpfr_pow_si(p.backend().data(), x.backend().data(), exponents[i], MPFR_RNDN);
        acc += coefficients[i] * p;
    }
    return acc;
}

/// Partial sum of the model with the given coefficients for every exponent
/// (known prefix values are not used here).
inline Real evaluate_series(const SeriesModel& model, std::span<const Real> coefficients, const Real& x,
                            const PrecisionContext& ctx) {
    if (coefficients.size() != model.exponents.size())
        throw DomainError("evaluate_series: need one coefficient per exponent");
    return sum_terms(model.exponents, coefficients, with_precision(x, ctx.working_digits()));
}

/// Partial sum using the known prefix followed by fitted coefficients.
inline Real evaluate_series(const SeriesFit& fit, const Real& x, const PrecisionContext& ctx) {
    std::vector<Real> all;
    for (const auto& k : fit.model.known_prefix) all.push_back(k.value);
    all.insert(all.end(), fit.coefficients.begin(), fit.coefficients.end());
    return evaluate_series(fit.model, all, x, ctx);
}

namespace detail {

/// Solves for the unknown coefficients given model data (y already net of
/// the known prefix). Abscissae are rescaled to max |x| = 1 before forming
/// powers.
inline std::vector<Real> solve_series_system(const std::vector<DataPoint>& pts, std::span<const int> exps,
                                             unsigned w) {
    const std::size_t n = pts.size(), m = exps.size();
    if (m == 0) return {};
    if (n < m) {
        throw InsufficientDataError("series fit needs at least " + std::to_string(m) + " records, got " +
                                    std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (pts[i].x == pts[j].x) throw SingularError("series fit: duplicate abscissa");
    Real scale = make_real(0, w);
    for (const auto& p : pts)
        if (abs(p.x) > scale) scale = abs(p.x);
    if (scale == 0) throw SingularError("series fit: all abscissae are zero");
    Matrix a(n, m, w);
    std::vector<Real> b(n);
    Real u = make_real(0, w);
    for (std::size_t i = 0; i < n; ++i) {
        u = pts[i].x / scale;
        for (std::size_t j = 0; j < m; ++j) mpfr_pow_si(a.raw(i, j), u.backend().data(), exps[j], MPFR_RNDN);
        b[i] = with_precision(pts[i].y, w);
    }
    std::vector<Real> d = n == m ? solve_full_pivot(std::move(a), std::move(b)) : solve_least_squares(a, b);
    for (std::size_t j = 0; j < m; ++j) {
        Real s = make_real(0, w);
        mpfr_pow_si(s.backend().data(), scale.backend().data(), exps[j], MPFR_RNDN);
        d[j] /= s;
    }
    return d;
}

inline std::vector<DataPoint> net_of_known(std::vector<DataPoint> pts, const SeriesModel& model) {
    std::vector<int> ke;
    std::vector<Real> kv;
    for (const auto& k : model.known_prefix) {
        ke.push_back(k.exponent);
        kv.push_back(k.value);
    }
    for (auto& p : pts) p.y -= sum_terms(ke, kv, p.x);
    return pts;
}

inline unsigned worst_claim(std::span<const EigenvalueRecord> records) {
    unsigned w = std::numeric_limits<unsigned>::max();
    for (const auto& r : records) w = std::min(w, r.digits_claimed);
    return records.empty() ? 0 : w;
}

inline std::vector<Real> fit_coefficients(std::span<const EigenvalueRecord> records, const SeriesModel& model,
                                          const PrecisionContext& ctx, const Real* relative_shift) {
    auto pts = model_data(records, model, ctx);
    if (relative_shift)
        for (auto& p : pts) p.y *= 1 + *relative_shift;
    pts = net_of_known(std::move(pts), model);
    return solve_series_system(pts, model.unknown_exponents(), ctx.working_digits());
}

}  // namespace detail

/// Digits of each fitted coefficient that survive multiplying every data
/// value by (1 +- relative_perturbation).
inline std::vector<unsigned> estimate_trusted_digits(std::span<const EigenvalueRecord> records,
                                                     const SeriesModel& model, const PrecisionContext& ctx,
                                                     const Real& relative_perturbation) {
    model.validate();
    const Real p = with_precision(relative_perturbation, ctx.working_digits());
    const Real mp = -p;
    auto up = detail::fit_coefficients(records, model, ctx, &p);
    auto down = detail::fit_coefficients(records, model, ctx, &mp);
    std::vector<unsigned> out(up.size(), 0);
    for (std::size_t i = 0; i < up.size(); ++i) {
        if ((up[i] > 0) != (down[i] > 0) || up[i] == 0 || down[i] == 0) continue;
        Real diff = up[i] - down[i];
        if (diff == 0) {
            out[i] = ctx.digits();
            continue;
        }
        double d = std::floor(-(log10_abs(diff) - log10_abs(up[i])));
        out[i] = d > 0 ? static_cast<unsigned>(std::min<double>(d, ctx.digits())) : 0u;
    }
    return out;
}

/// Interpolating (square) or least-squares (over-determined) fit of the
/// unknown coefficients. Trusted digits come from a perturbation of one unit
/// in the last claimed digit of the data, capped at the worst record's
/// claim minus 2.
inline SeriesFit fit_interpolating(std::span<const EigenvalueRecord> records, const SeriesModel& model,
                                   const PrecisionContext& ctx) {
    model.validate();
    SeriesFit fit{model, detail::fit_coefficients(records, model, ctx, nullptr), {}, records_fingerprint(records)};
    const unsigned worst = detail::worst_claim(records);
    const unsigned cap = worst > 2 ? worst - 2 : 0;
    if (!fit.coefficients.empty()) {
        Real pert = pow10_at(-static_cast<long>(worst), ctx.working_digits());
        fit.trusted_digits = estimate_trusted_digits(records, model, ctx, pert);
        for (auto& d : fit.trusted_digits) d = std::min(d, cap);
    }
    return fit;
}

/// Digits of each fitted coefficient that agree with a fit one term shorter
/// on all but the record farthest from the expansion point. Measures the
/// truncation error, which the perturbation estimate cannot see.
inline std::vector<unsigned> estimate_truncation_digits(std::span<const EigenvalueRecord> records,
                                                        const SeriesModel& model, const PrecisionContext& ctx) {
    model.validate();
    auto full = detail::fit_coefficients(records, model, ctx, nullptr);
    std::vector<unsigned> out(full.size(), 0);
    if (full.size() < 2) return out;
    SeriesModel shorter = model;
    shorter.exponents.pop_back();
    std::vector<EigenvalueRecord> fewer(records.begin(), records.end());
    // Drop the record with the largest abscissa (largest e for Maclaurin,
    // smallest e for the stretch series).
    auto far = std::max_element(fewer.begin(), fewer.end(), [&](const auto& a, const auto& b) {
        bool by_e = model.variable == SeriesVariable::EvenEccentricity;
        return by_e ? a.shape.eccentricity() < b.shape.eccentricity()
                    : a.shape.eccentricity() > b.shape.eccentricity();
    });
    if (fewer.size() > shorter.unknown_exponents().size()) fewer.erase(far);
    auto part = detail::fit_coefficients(fewer, shorter, ctx, nullptr);
    for (std::size_t i = 0; i < part.size(); ++i) {
        if (full[i] == 0) continue;
        out[i] = static_cast<unsigned>(std::max(0, matched_digits(part[i], full[i], static_cast<int>(ctx.digits()))));
    }
    return out;
}

/// Deflation: y -> (y - sum of known terms) / x^p, p the first unknown
/// exponent, so the next unknown coefficient becomes the constant term.
/// Returned as data points (x, transformed y).
inline std::vector<DataPoint> deflate_known(std::span<const EigenvalueRecord> records, const SeriesModel& model,
                                            const PrecisionContext& ctx) {
    model.validate();
    if (model.known_prefix.empty()) throw DomainError("deflate_known: no known terms");
    if (model.known_prefix.size() == model.exponents.size())
        throw DomainError("deflate_known: every exponent is already known");
    const int next = model.exponents[model.known_prefix.size()];
    auto pts = detail::net_of_known(model_data(records, model, ctx), model);
    for (auto& p : pts) {
        Real xp = p.x;
        mpfr_pow_si(xp.backend().data(), p.x.backend().data(), next, MPFR_RNDN);
        if (xp == 0 || log10_abs(xp) < -static_cast<double>(ctx.working_digits()) * 4)
            throw DomainError("deflate_known: x^" + std::to_string(next) + " underflows");
        p.y /= xp;
    }
    return pts;
}

/// Ordinary polynomial fit in x of deflated data: the constant term is the
/// next unknown coefficient, the others follow at increasing exponents.
inline std::vector<Real> fit_deflated(const std::vector<DataPoint>& pts, const SeriesModel& model,
                                      const PrecisionContext& ctx) {
    auto unknown = model.unknown_exponents();
    std::vector<int> shifted;
    for (int p : unknown) shifted.push_back(p - unknown.front());
    return detail::solve_series_system(pts, shifted, ctx.working_digits());
}

}  // namespace ellipse_lab
