#pragma once

// Fundamental Dirichlet eigenvalue of the ellipse by boundary point matching
// (method of particular solutions). Trial functions
//
//     u(r, theta) = sum_{k<M} a_k J_{2k}(sqrt(lambda) r) cos(2 k theta)
//
// satisfy the Helmholtz equation exactly and carry the double even symmetry
// of the fundamental mode, so only the first-quadrant arc is matched. The
// eigenvalue is the sign change of the (row and column equilibrated)
// collocation determinant nearest to a series-based seed; a ladder of basis
// sizes M, M+4, ... certifies the digits.

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bessel.hpp"
#include "constants.hpp"
#include "geometry.hpp"
#include "known_series.hpp"
#include "linalg.hpp"
#include "roots.hpp"

namespace ellipse_lab {

/// Largest eccentricity the solver accepts.
inline constexpr double kMaxEccentricity = 0.9999995;

struct SolverConfig {
    unsigned basis_size = 0;         ///< first rung of the ladder; 0 picks one from the shape
    unsigned collocation_count = 0;  ///< N; 0 means N = M (square collocation)
    unsigned target_digits = 30;
    PointDistribution distribution = PointDistribution::ChebyshevParameter;
    double bracket_pad = 0.05;       ///< relative half-width limit of the initial bracket
    unsigned ladder_step = 4;
    unsigned max_rungs = 60;
    unsigned working_digits = 0;     ///< 0 picks one from the shape and target
};

struct PolarPoint {
    Real r;
    Real theta;
};

/// Parameter values t in (0, pi/2) of the matching points on the quarter arc
/// x = a cos t, y = b sin t.
inline std::vector<Real> boundary_parameters(unsigned n, PointDistribution dist, unsigned digits10) {
    if (n == 0) throw DomainError("boundary_points: need at least one point");
    const Real pi = pi_at(digits10);
    std::vector<Real> t(n);
    for (unsigned i = 1; i <= n; ++i) {
        if (dist == PointDistribution::UniformParameter) {
            t[i - 1] = pi / 2 * (make_real(2 * i - 1, digits10) / (2 * n));
        } else {
            Real c = cos(pi * (2 * i - 1) / (2 * n));
            t[i - 1] = pi / 4 * (1 - c);
        }
    }
    return t;
}

inline std::vector<PolarPoint> boundary_points(const EllipseShape& shape, unsigned n, PointDistribution dist,
                                               const PrecisionContext& ctx) {
    const unsigned w = ctx.working_digits();
    const Real a = shape.semi_major(ctx);
    const Real b = shape.semi_minor(ctx);
    std::vector<PolarPoint> pts;
    pts.reserve(n);
    for (const Real& t : boundary_parameters(n, dist, w)) {
        Real x = a * cos(t);
        Real y = b * sin(t);
        pts.push_back({sqrt(x * x + y * y), atan2(y, x)});
    }
    return pts;
}

/// Entry (i, k) = J_{2k}(sqrt(lambda) r_i) cos(2 k theta_i), k = 0..M-1.
inline Matrix collocation_matrix(const Real& lambda, std::span<const PolarPoint> points, unsigned m,
                                 const PrecisionContext& ctx) {
    if (lambda <= 0) throw DomainError("collocation_matrix: lambda must be positive");
    if (m == 0) throw DomainError("collocation_matrix: empty basis");
    const unsigned w = ctx.working_digits();
    const Real kappa = sqrt(with_precision(lambda, w));
    Matrix mat(points.size(), m, w);
    Real c2 = make_real(0, w), ck = make_real(0, w), ckm1 = make_real(0, w), tmp = make_real(0, w);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        auto jv = bessel_j_even_orders(m, kappa * p.r, w);
        // cos(2k theta) by the Chebyshev recurrence in cos(2 theta).
        c2 = cos(2 * with_precision(p.theta, w));
        ckm1 = make_real(1, w);
        ck = c2;
        for (unsigned k = 0; k < m; ++k) {
            if (k == 0) {
                mpfr_set(mat.raw(i, 0), jv[0].backend().data(), MPFR_RNDN);
                continue;
            }
            if (k >= 2) {
                // c_k = 2 c2 c_{k-1} - c_{k-2}
                mpfr_mul(tmp.backend().data(), c2.backend().data(), ck.backend().data(), MPFR_RNDN);
                mpfr_mul_2ui(tmp.backend().data(), tmp.backend().data(), 1, MPFR_RNDN);
                mpfr_sub(tmp.backend().data(), tmp.backend().data(), ckm1.backend().data(), MPFR_RNDN);
                mpfr_swap(ckm1.backend().data(), ck.backend().data());
                mpfr_swap(ck.backend().data(), tmp.backend().data());
            }
            mpfr_mul(mat.raw(i, k), jv[k].backend().data(), ck.backend().data(), MPFR_RNDN);
        }
    }
    return mat;
}

/// Signed collocation determinant after fixed row/column scaling; its zero
/// crossing in lambda locates the eigenvalue.
inline Real collocation_determinant(const Real& lambda, std::span<const PolarPoint> points, unsigned m,
                                    const Equilibration& eq, const PrecisionContext& ctx) {
    Matrix mat = collocation_matrix(lambda, points, m, ctx);
    apply_equilibration(mat, eq);
    return determinant(std::move(mat));
}

/// Scaling taken from the matrix at `lambda` (rows, then columns, to unit max).
inline Equilibration collocation_equilibration(const Real& lambda, std::span<const PolarPoint> points, unsigned m,
                                               const PrecisionContext& ctx) {
    return unit_max_equilibration(collocation_matrix(lambda, points, m, ctx));
}

/// Series estimate of the eigenvalue in the shape's convention, with a rough
/// relative error (size of the last term kept).
struct EigenvalueSeed {
    Real lambda;
    double rel_error;
};

inline EigenvalueSeed series_seed(const EllipseShape& shape, const PrecisionContext& ctx) {
    const auto& k = fundamental_constants(ctx);
    const Real e = with_precision(shape.eccentricity(), ctx.working_digits());
    const Real stretch = shape.stretch(ctx);
    // Both partial sums, under the constant-area convention; the one whose
    // last kept term is smaller wins.
    Real mac = ctx.make(0);
    double mac_rel = 0;
    {
        Real e2 = e * e, pw = ctx.make(1);
        for (int nu = 0; nu <= 13; ++nu) {
            Real term = known::maclaurin_coefficient(nu, k.rho) * pw;
            mac += term;
            pw *= e2;
            if (nu == 13) mac_rel = static_cast<double>(abs(term) / mac);
        }
        mac *= k.rho;
    }
    Real asy = ctx.make(0);
    double asy_rel = 0;
    {
        Real pw = pow(stretch, -2);
        for (int nu = -2; nu <= 5; ++nu) {
            Real term = known::asymptotic_coefficient(nu, k.pi) * pw;
            asy += term;
            pw *= stretch;
            if (nu == 5) asy_rel = static_cast<double>(abs(term) / asy);
        }
        asy *= stretch;  // lambda_0 = lambda'_0 * stretch
    }
    const bool use_mac = mac_rel <= asy_rel;
    const Real& lam_area = use_mac ? mac : asy;
    const double rel = use_mac ? mac_rel : asy_rel;
    Real lam = shape.convention() == Convention::ConstantArea ? lam_area : Real(lam_area / stretch);
    return {lam, std::max(rel, 1e-300)};
}

/// Basis size that usually resolves `digits` digits; the ladder corrects it.
/// Fitted to measured convergence: near the circle the expansion coefficients
/// decay geometrically, for thin ellipses the size grows like kappa^(3/4).
inline unsigned suggested_basis_size(const EllipseShape& shape, unsigned digits) {
    const double e = static_cast<double>(shape.eccentricity());
    const double stretch = std::sqrt(1 - e * e);
    if (e < 1e-12) return 4;
    const double kappa = 1.5707963 / stretch + 1.0;  // about sqrt(lambda') for a = 1
    const double q = (1 - stretch) / (1 + stretch);
    double m_circ = digits * std::log(10.0) / std::max(1e-12, -std::log(q)) / 2 + 4;
    double m_thin = std::pow(kappa, 0.75) * (0.95 + 0.016 * digits) + 4;
    double m = std::min(m_circ, std::max(m_thin, 8.0));
    return static_cast<unsigned>(std::ceil(m));
}

/// Working precision for the determinant; thin ellipses lose digits to the
/// conditioning of the basis on the boundary.
inline unsigned suggested_working_digits(const EllipseShape& shape, unsigned digits, unsigned m) {
    const double e = static_cast<double>(shape.eccentricity());
    const double stretch = std::sqrt(1 - e * e);
    const double kappa = 1.5707963 / stretch + 1.0;
    const double loss = 0.6 * m * std::max(0.0, std::log10(kappa) - 1.6);
    return digits + 20 + static_cast<unsigned>(std::ceil(loss));
}

struct RungResult {
    unsigned m;
    Real lambda;
    int evaluations;
};

namespace detail {

/// Root of the collocation determinant nearest `seed`, found by widening a
/// bracket seed*(1 -+ delta) geometrically up to `pad`.
inline RungResult solve_rung(const EllipseShape& shape, unsigned m, const SolverConfig& cfg, const Real& seed_in,
                             double delta0, unsigned work_digits, unsigned root_digits) {
    const Real seed = with_precision(seed_in, work_digits);
    PrecisionContext wctx(work_digits, 5);
    auto pts = boundary_points(shape, m, cfg.distribution, wctx);
    const Equilibration eq = collocation_equilibration(seed, pts, m, wctx);
    int evals = 0;
    auto f = [&](const Real& lam) {
        ++evals;
        return collocation_determinant(lam, pts, m, eq, wctx);
    };
    const double floor_delta = std::pow(10.0, -static_cast<double>(root_digits));
    double delta = std::min(std::max(delta0, floor_delta), cfg.bracket_pad);
    Real lo, hi;
    bool found = false;
    Real f_seed = f(seed);
    if (f_seed == 0) return {m, seed, evals};
    while (true) {
        Real d = make_real(delta, work_digits);
        Real l1 = seed * (1 - d), h1 = seed * (1 + d);
        Real fl = f(l1), fh = f(h1);
        if ((fl > 0) != (f_seed > 0) || fl == 0) {
            lo = l1;
            hi = seed;
            found = true;
        } else if ((fh > 0) != (f_seed > 0) || fh == 0) {
            lo = seed;
            hi = h1;
            found = true;
        }
        if (found || delta >= cfg.bracket_pad) break;
        delta = std::min(delta * 100, cfg.bracket_pad);
    }
    if (!found) {
        throw NoSignChangeError("solve_fundamental: no determinant sign change within " +
                                std::to_string(cfg.bracket_pad) + " of seed " + format_sci(seed, 15) +
                                " (M = " + std::to_string(m) + ")");
    }
    PrecisionContext rctx(root_digits, std::max<unsigned>(5, work_digits > root_digits ? work_digits - root_digits : 5));
    auto res = find_root(f, lo, hi, rctx);
    return {m, res.root, evals};
}

}  // namespace detail

struct SolveReport {
    EigenvalueRecord record;
    std::vector<RungResult> rungs;
    unsigned working_digits = 0;
};

/// Fundamental eigenvalue under shape.convention(), certified to
/// config.target_digits by agreement of successive basis sizes.
inline SolveReport solve_fundamental_report(const EllipseShape& shape, const SolverConfig& config,
                                            const PrecisionContext& ctx) {
    if (static_cast<double>(shape.eccentricity()) > kMaxEccentricity) {
        throw DomainError("solve_fundamental: eccentricity above 0.9999995; use the asymptotic series instead");
    }
    if (config.target_digits + PrecisionContext::kMinGuard > ctx.digits() + ctx.guard_digits()) {
        throw DomainError("solve_fundamental: target digits exceed the context precision");
    }
    if (config.collocation_count != 0 && config.collocation_count != config.basis_size) {
        throw DomainError("solve_fundamental: only square collocation (N = M) is supported");
    }
    const unsigned target = config.target_digits;
    const unsigned m0 = std::max(2u, config.basis_size ? config.basis_size : suggested_basis_size(shape, target));
    const unsigned step = std::max(1u, config.ladder_step);

    auto seed = series_seed(shape, ctx);
    SolveReport report{{shape, seed.lambda, 0, {}}, {}, 0};
    Real current = seed.lambda;
    double delta = std::max(10 * seed.rel_error, 1e-40);
    int best_claim = -1;
    int stalls = 0;
    for (unsigned rung = 0; rung < config.max_rungs; ++rung) {
        const unsigned m = m0 + rung * step;
        const unsigned w = config.working_digits ? config.working_digits
                                                 : suggested_working_digits(shape, target, m);
        report.working_digits = w;
        auto r = detail::solve_rung(shape, m, config, current, delta, w, target + 6);
        report.rungs.push_back(r);
        current = r.lambda;
        if (report.rungs.size() >= 2) {
            const auto& prev = report.rungs[report.rungs.size() - 2];
            int agree = matched_digits(prev.lambda, r.lambda, static_cast<int>(target) + 6);
            int claim = agree - 2;
            delta = std::pow(10.0, -std::max(agree - 1, 0));
            if (claim >= static_cast<int>(target)) {
                report.record = EigenvalueRecord{shape, with_precision(r.lambda, ctx.working_digits()), target,
                                                 SolverMeta{m, m, config.distribution}};
                return report;
            }
            if (claim > best_claim) {
                best_claim = claim;
                stalls = 0;
            } else if (++stalls >= 3) {
                throw CertificationError("solve_fundamental: successive basis sizes stall at " +
                                         std::to_string(std::max(claim, 0)) + " digits (M = " +
                                         std::to_string(m) + ")");
            }
        } else {
            delta = 1e-12;
        }
    }
    throw CertificationError("solve_fundamental: ladder exhausted before reaching " + std::to_string(target) +
                             " digits");
}

inline EigenvalueRecord solve_fundamental(const EllipseShape& shape, const SolverConfig& config,
                                          const PrecisionContext& ctx) {
    return solve_fundamental_report(shape, config, ctx).record;
}

}  // namespace ellipse_lab
