#pragma once

#include <string>
#include <string_view>

#include "precision.hpp"

namespace ellipse_lab {

/// Which ellipse size accompanies a given eccentricity.
enum class Convention {
    ConstantArea,       ///< A = pi, a b = 1; eigenvalue lambda_0
    ConstantSemiMajor,  ///< a = 1, b = stretch, A' = pi * stretch; eigenvalue lambda'_0
};

inline std::string_view convention_tag(Convention c) {
    return c == Convention::ConstantArea ? "A" : "Aprime";
}

inline Convention parse_convention(std::string_view tag) {
    if (tag == "A" || tag == "area" || tag == "constant-area") return Convention::ConstantArea;
    if (tag == "Aprime" || tag == "semimajor" || tag == "constant-semimajor") return Convention::ConstantSemiMajor;
    throw ParseError("unknown convention '" + std::string(tag) + "' (expected A or Aprime)");
}

/// sqrt(1 - e^2), the ratio of semi-minor to semi-major axis.
inline Real stretch_from_ecc(const Real& e, const PrecisionContext& ctx) {
    if (e < 0 || e >= 1) throw DomainError("eccentricity must lie in [0, 1), got " + format_sci(e, 12));
    Real ew = with_precision(e, ctx.working_digits());
    return sqrt(1 - ew * ew);
}

inline Real ecc_from_stretch(const Real& stretch, const PrecisionContext& ctx) {
    if (stretch <= 0 || stretch > 1) throw DomainError("stretch must lie in (0, 1], got " + format_sci(stretch, 12));
    Real s = with_precision(stretch, ctx.working_digits());
    return sqrt(1 - s * s);
}

/// Ellipse shape. Eccentricity is the stored parameter; stretch and the
/// semi-axes are recomputed from it at the precision of use.
class EllipseShape {
public:
    EllipseShape(Real eccentricity, Convention convention)
        : e_(std::move(eccentricity)), convention_(convention) {
        if (e_ < 0 || e_ >= 1) throw DomainError("eccentricity must lie in [0, 1), got " + format_sci(e_, 12));
    }

    const Real& eccentricity() const { return e_; }
    Convention convention() const { return convention_; }

    Real stretch(const PrecisionContext& ctx) const { return stretch_from_ecc(e_, ctx); }

    Real semi_major(const PrecisionContext& ctx) const {
        if (convention_ == Convention::ConstantSemiMajor) return ctx.make(1);
        return 1 / sqrt(stretch(ctx));
    }
    Real semi_minor(const PrecisionContext& ctx) const {
        if (convention_ == Convention::ConstantSemiMajor) return stretch(ctx);
        return sqrt(stretch(ctx));
    }
    Real area(const PrecisionContext& ctx) const {
        Real pi = pi_at(ctx.working_digits());
        return convention_ == Convention::ConstantArea ? pi : Real(pi * stretch(ctx));
    }

    EllipseShape with_convention(Convention c) const { return EllipseShape(e_, c); }

private:
    Real e_;
    Convention convention_;
};

enum class PointDistribution { UniformParameter, ChebyshevParameter };

inline std::string_view distribution_tag(PointDistribution d) {
    return d == PointDistribution::ChebyshevParameter ? "cheb" : "uniform";
}

inline PointDistribution parse_distribution(std::string_view tag) {
    if (tag == "cheb" || tag == "chebyshev") return PointDistribution::ChebyshevParameter;
    if (tag == "uniform") return PointDistribution::UniformParameter;
    throw ParseError("unknown point distribution '" + std::string(tag) + "'");
}

struct SolverMeta {
    unsigned basis_size = 0;         ///< M
    unsigned collocation_count = 0;  ///< N
    PointDistribution distribution = PointDistribution::ChebyshevParameter;
};

/// One computed fundamental eigenvalue.
struct EigenvalueRecord {
    EllipseShape shape;
    Real lambda;  ///< lambda_0 under shape.convention()
    unsigned digits_claimed = 0;
    SolverMeta solver;
};

/// Re-expresses an eigenvalue in another area convention using the invariant
/// product (eigenvalue x area): lambda'_0 = lambda_0 / stretch.
inline EigenvalueRecord convert_eigenvalue(const EigenvalueRecord& rec, Convention target) {
    if (rec.shape.convention() == target) return rec;
    if (rec.digits_claimed < 2) throw DomainError("convert_eigenvalue: record claims too few digits");
    PrecisionContext ctx(std::max<unsigned>(rec.digits_claimed, PrecisionContext::kMinDigits));
    Real stretch = rec.shape.stretch(ctx);
    if (stretch == 0 || log10_abs(stretch) < -static_cast<double>(ctx.working_digits())) {
        throw DomainError("convert_eigenvalue: degenerate shape, stretch underflows");
    }
    Real lam = with_precision(rec.lambda, ctx.working_digits());
    EigenvalueRecord out{rec.shape.with_convention(target),
                         target == Convention::ConstantSemiMajor ? Real(lam / stretch) : Real(lam * stretch),
                         rec.digits_claimed - 1, rec.solver};
    return out;
}

}  // namespace ellipse_lab
