#pragma once

// Integer relations a_1 t + a_2 v_2 + ... + a_m v_m = 0 between a numeric
// target t and symbolic constants v_i (powers of pi or rho, and 1), found by
// LLL on the lattice [ I | round(S * (t, v_2, ..., v_m)) ].

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "constants.hpp"
#include "lll.hpp"
#include "precision.hpp"

namespace ellipse_lab {

/// One basis element: a power of the target (t, t^2, ...), the literal 1,
/// pi^k or rho^k.
struct BasisAtom {
    enum class Kind { Target, One, PiPower, RhoPower };
    Kind kind = Kind::One;
    int power = 0;

    static BasisAtom target(int k = 1) { return {Kind::Target, k}; }
    static BasisAtom one() { return {Kind::One, 0}; }
    static BasisAtom pi(int k) { return k == 0 ? one() : BasisAtom{Kind::PiPower, k}; }
    static BasisAtom rho(int k) { return k == 0 ? one() : BasisAtom{Kind::RhoPower, k}; }

    bool operator==(const BasisAtom&) const = default;
};

/// Writes an atom as text ("pi^-3", "rho^2", "1", "t"), the spelling accepted
/// by parse_basis.
inline std::string atom_name(const BasisAtom& a) {
    switch (a.kind) {
        case BasisAtom::Kind::Target: return a.power == 1 ? "t" : "t^" + std::to_string(a.power);
        case BasisAtom::Kind::One: return "1";
        case BasisAtom::Kind::PiPower: return a.power == 1 ? "pi" : "pi^" + std::to_string(a.power);
        case BasisAtom::Kind::RhoPower: return a.power == 1 ? "rho" : "rho^" + std::to_string(a.power);
    }
    return "?";
}

class ConstantBasis {
public:
    ConstantBasis() = default;
    explicit ConstantBasis(std::vector<BasisAtom> elements) : elements_(std::move(elements)) {
        for (std::size_t i = 0; i < elements_.size(); ++i)
            for (std::size_t j = i + 1; j < elements_.size(); ++j)
                if (elements_[i] == elements_[j]) throw DomainError("constant basis has a repeated element");
        if (std::count(elements_.begin(), elements_.end(), BasisAtom::target()) > 1)
            throw DomainError("constant basis holds the target more than once");
    }

    /// The usual layout: target first, then the given constants.
    static ConstantBasis with_target(std::vector<BasisAtom> constants) {
        constants.insert(constants.begin(), BasisAtom::target());
        return ConstantBasis(std::move(constants));
    }

    const std::vector<BasisAtom>& elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }

    /// Numeric values, the target taken from `target`.
    std::vector<Real> evaluate(const Real& target, const PrecisionContext& ctx) const {
        const unsigned w = ctx.working_digits();
        const auto& k = fundamental_constants(ctx);
        std::vector<Real> v;
        for (const auto& a : elements_) {
            switch (a.kind) {
                case BasisAtom::Kind::Target: v.push_back(pow(with_precision(target, w), a.power)); break;
                case BasisAtom::Kind::One: v.push_back(make_real(1, w)); break;
                case BasisAtom::Kind::PiPower: v.push_back(pow(k.pi, a.power)); break;
                case BasisAtom::Kind::RhoPower: v.push_back(pow(k.rho, a.power)); break;
            }
        }
        return v;
    }

private:
    std::vector<BasisAtom> elements_;
};

/// Parses a comma-separated basis such as "t, pi^-5, pi^-3, 1/pi, pi, pi^3",
/// "t,1,rho" or "t^2,t,1". "1/pi" and "1/rho" are accepted as pi^-1, rho^-1.
inline ConstantBasis parse_basis(std::string_view text) {
    std::vector<BasisAtom> atoms;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        std::string tok;
        for (char c : text.substr(pos, comma - pos))
            if (c != ' ' && c != '\t') tok += c;
        pos = comma + 1;
        if (tok.empty()) throw ParseError("empty element in basis '" + std::string(text) + "'");
        if (tok == "t" || tok == "target" || tok == "x") {
            atoms.push_back(BasisAtom::target());
            continue;
        }
        if (tok == "1") {
            atoms.push_back(BasisAtom::one());
            continue;
        }
        int sign = 1;
        if (tok.rfind("1/", 0) == 0) {
            sign = -1;
            tok = tok.substr(2);
        }
        std::string name = tok, power = "1";
        if (auto caret = tok.find('^'); caret != std::string::npos) {
            name = tok.substr(0, caret);
            power = tok.substr(caret + 1);
        }
        int k = 0;
        try {
            std::size_t used = 0;
            k = std::stoi(power, &used);
            if (used != power.size()) throw std::invalid_argument(power);
        } catch (const std::exception&) {
            throw ParseError("bad exponent in basis element '" + tok + "'");
        }
        if (name == "pi") {
            atoms.push_back(BasisAtom::pi(sign * k));
        } else if (name == "rho") {
            atoms.push_back(BasisAtom::rho(sign * k));
        } else if ((name == "t" || name == "target" || name == "x") && sign == 1 && k >= 1) {
            atoms.push_back(BasisAtom::target(k));
        } else {
            throw ParseError("unknown basis element '" + tok + "' (use t, t^k, 1, pi^k, rho^k)");
        }
        if (comma == text.size()) break;
    }
    ConstantBasis b(std::move(atoms));
    const auto& el = b.elements();
    if (std::find(el.begin(), el.end(), BasisAtom::target()) == el.end())
        throw ParseError("basis must contain the target 't'");
    if (!(el[0].kind == BasisAtom::Kind::Target)) throw ParseError("basis must start with a power of the target");
    return b;
}

enum class RelationStatus { Unambiguous, Ambiguous, NotFound };

inline std::string_view status_name(RelationStatus s) {
    switch (s) {
        case RelationStatus::Unambiguous: return "Unambiguous";
        case RelationStatus::Ambiguous: return "Ambiguous";
        case RelationStatus::NotFound: return "NotFound";
    }
    return "?";
}

struct IntegerRelation {
    std::vector<Integer> coefficients;
    ConstantBasis basis;
    unsigned target_digits_matched = 0;
    RelationStatus status = RelationStatus::NotFound;
};

struct RelationOptions {
    unsigned guard = 5;              ///< g: the lattice is scaled by 10^(D - g)
    unsigned margin = 3;             ///< residual must fall below 10^(-D + g + margin)
    unsigned min_matched = 25;       ///< evidence required for Unambiguous
    unsigned rescale_drop = 5;       ///< second run at 10^(D - g - rescale_drop)
    Rational delta = Rational(3, 4);
    Integer max_coefficient = Integer(1000000);
};

namespace detail {

inline Integer round_to_integer(const Real& x) {
    Real r = x;
    mpfr_round(r.backend().data(), x.backend().data());
    mpz_t z;
    mpz_init(z);
    mpfr_get_z(z, r.backend().data(), MPFR_RNDN);
    Integer out(z);
    mpz_clear(z);
    return out;
}

inline Real to_real(const Integer& z, unsigned digits10) {
    Real r = make_real(0, digits10);
    mpfr_set_z(r.backend().data(), z.backend().data(), MPFR_RNDN);
    return r;
}

/// gcd 1 and a positive leading (first nonzero) coefficient.
inline std::vector<Integer> normalize_relation(std::vector<Integer> a) {
    Integer g = 0;
    for (const auto& x : a) g = gcd(g, abs(x));
    if (g > 1)
        for (auto& x : a) x /= g;
    auto lead = std::find_if(a.begin(), a.end(), [](const Integer& x) { return x != 0; });
    if (lead != a.end() && *lead < 0)
        for (auto& x : a) x = -x;
    return a;
}

/// True when the basis holds a power of the target other than t itself, so a
/// relation is a polynomial equation for the target.
inline bool has_target_powers(const ConstantBasis& b) {
    for (const auto& a : b.elements())
        if (a.kind == BasisAtom::Kind::Target && a.power != 1) return true;
    return false;
}

inline std::size_t target_index(const ConstantBasis& b) {
    const auto& e = b.elements();
    auto it = std::find(e.begin(), e.end(), BasisAtom::target());
    if (it == e.end()) throw DomainError("constant basis has no target element");
    return static_cast<std::size_t>(it - e.begin());
}

struct Candidate {
    std::vector<Integer> coefficients;  // normalized
    Real residual;
};

/// Runs one lattice reduction at scale 10^scale_exp and returns the
/// candidates that pass the residual test, shortest first.
inline std::vector<Candidate> relation_candidates(const std::vector<Real>& values, const ConstantBasis& basis,
                                                  long scale_exp, const Real& threshold,
                                                  const RelationOptions& opt, unsigned w) {
    const std::size_t m = values.size();
    const Real scale = pow10_at(scale_exp, w);
    IntMatrix lattice(m, std::vector<Integer>(m + 1, 0));
    for (std::size_t i = 0; i < m; ++i) {
        lattice[i][i] = 1;
        lattice[i][m] = round_to_integer(values[i] * scale);
    }
    IntMatrix reduced;
    try {
        reduced = lll_reduce(std::move(lattice), opt.delta);
    } catch (const DependentRowsError&) {
        return {};
    }
    std::vector<Candidate> out;
    for (const auto& row : reduced) {
        std::vector<Integer> a(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(m));
        bool involves_target = false;
        for (std::size_t i = 0; i < m; ++i)
            involves_target = involves_target || (basis.elements()[i].kind == BasisAtom::Kind::Target && a[i] != 0);
        if (!involves_target) continue;
        bool small = true;
        for (const auto& x : a) small = small && abs(x) <= opt.max_coefficient;
        if (!small) continue;
        Real s = make_real(0, w);
        for (std::size_t i = 0; i < m; ++i) s += to_real(a[i], w) * values[i];
        if (abs(s) >= threshold) continue;
        out.push_back({normalize_relation(std::move(a)), abs(s)});
    }
    auto norm2 = [](const std::vector<Integer>& a) {
        Integer n = 0;
        for (const auto& x : a) n += x * x;
        return n;
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const Candidate& x, const Candidate& y) { return norm2(x.coefficients) < norm2(y.coefficients); });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Candidate& x, const Candidate& y) { return x.coefficients == y.coefficients; }),
              out.end());
    return out;
}

}  // namespace detail

namespace detail {

/// Root of sum_i a_i v_i(x) = 0 nearest `start`, by Newton's method; used
/// when the basis holds powers of the target.
inline Real polynomial_root(const IntegerRelation& rel, const Real& start, const PrecisionContext& ctx) {
    const unsigned w = ctx.working_digits();
    const auto& el = rel.basis.elements();
    const auto& k = fundamental_constants(ctx);
    Real c0 = make_real(0, w);  // constant part
    std::vector<std::pair<int, Real>> terms;  // target power, coefficient
    for (std::size_t i = 0; i < el.size(); ++i) {
        if (rel.coefficients[i] == 0) continue;
        const Real a = to_real(rel.coefficients[i], w);
        switch (el[i].kind) {
            case BasisAtom::Kind::Target: terms.push_back({el[i].power, a}); break;
            case BasisAtom::Kind::One: c0 += a; break;
            case BasisAtom::Kind::PiPower: c0 += a * pow(k.pi, el[i].power); break;
            case BasisAtom::Kind::RhoPower: c0 += a * pow(k.rho, el[i].power); break;
        }
    }
    if (terms.empty()) throw DomainError("degenerate relation: no target term");
    Real x = with_precision(start, w);
    const Real tol = pow10_at(-static_cast<long>(w) + 2, w);
    for (int it = 0; it < 200; ++it) {
        Real f = c0, df = make_real(0, w);
        for (const auto& [p, a] : terms) {
            f += a * pow(x, p);
            df += a * p * pow(x, p - 1);
        }
        if (df == 0) throw DomainError("relation polynomial has a critical point at the target");
        Real step = f / df;
        x -= step;
        if (abs(step) <= tol * std::max(Real(1), Real(abs(x)))) break;
    }
    return x;
}

}  // namespace detail

/// The target value implied by the relation, -sum_{i != t} a_i v_i / a_t.
/// Relations over powers of the target have no such formula; see
/// reconstruct_and_verify.
inline Real relation_value(const IntegerRelation& rel, const PrecisionContext& ctx) {
    const std::size_t t = detail::target_index(rel.basis);
    if (rel.coefficients.size() != rel.basis.size()) throw DomainError("relation and basis sizes differ");
    if (detail::has_target_powers(rel.basis)) throw DomainError("relation_value: basis holds powers of the target");
    if (rel.coefficients[t] == 0) throw DomainError("degenerate relation: target coefficient is zero");
    const unsigned w = ctx.working_digits();
    auto values = rel.basis.evaluate(make_real(0, w), ctx);
    Real s = make_real(0, w);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (i != t) s += detail::to_real(rel.coefficients[i], w) * values[i];
    return -s / detail::to_real(rel.coefficients[t], w);
}

/// Leading significant digits on which the relation's value reproduces
/// `target`; for a polynomial relation, its root nearest the target.
inline unsigned reconstruct_and_verify(const IntegerRelation& rel, const Real& target, const PrecisionContext& ctx) {
    if (rel.coefficients.size() != rel.basis.size()) throw DomainError("relation and basis sizes differ");
    Real v = detail::has_target_powers(rel.basis) ? detail::polynomial_root(rel, target, ctx) : relation_value(rel, ctx);
    const int cap = static_cast<int>(std::min<unsigned>(ctx.digits(), target.precision()));
    return static_cast<unsigned>(agreeing_digits(v, with_precision(target, ctx.working_digits()), cap));
}

/// Searches for a small integer relation involving `target`, which is
/// trusted to `trusted_digits` significant digits.
inline IntegerRelation find_relation(const Real& target, unsigned trusted_digits, const ConstantBasis& basis,
                                     const PrecisionContext& ctx, const RelationOptions& opt = {}) {
    if (trusted_digits < 10) throw PrecisionError("find_relation: need at least 10 trusted digits");
    if (basis.size() < 2) throw DomainError("find_relation: basis needs the target and at least one constant");
    detail::target_index(basis);  // validates
    const unsigned D = trusted_digits;
    // Constants are evaluated well beyond D so only the target carries error.
    PrecisionContext vctx(std::max(ctx.digits(), 2 * D + 10), ctx.guard_digits());
    const unsigned w = vctx.working_digits();
    const auto values = basis.evaluate(target, vctx);
    const long g = static_cast<long>(opt.guard);
    const Real threshold = pow10_at(-static_cast<long>(D) + g + static_cast<long>(opt.margin), w);
    auto first = detail::relation_candidates(values, basis, static_cast<long>(D) - g, threshold, opt, w);

    IntegerRelation out{{}, basis, 0, RelationStatus::NotFound};
    if (first.empty()) return out;
    out.coefficients = first.front().coefficients;
    // Evidence is measured against every digit the caller supplied, not
    // only the D it vouches for; agreement past the true accuracy of the
    // target is improbable, so the count stays honest.
    out.target_digits_matched = reconstruct_and_verify(out, target, vctx);

    bool ambiguous = first.size() > 1;
    if (!ambiguous && static_cast<long>(D) - g - static_cast<long>(opt.rescale_drop) > 0) {
        const long d2 = static_cast<long>(D) - static_cast<long>(opt.rescale_drop);
        const Real threshold2 = pow10_at(-d2 + g + static_cast<long>(opt.margin), w);
        auto second = detail::relation_candidates(values, basis, d2 - g, threshold2, opt, w);
        ambiguous = second.empty() || second.front().coefficients != out.coefficients;
    }
    out.status = (!ambiguous && out.target_digits_matched >= opt.min_matched) ? RelationStatus::Unambiguous
                                                                            : RelationStatus::Ambiguous;
    return out;
}

// ---- display -------------------------------------------------------------

namespace detail {

inline std::string superscript(long k) {
    static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
    std::string s = k < 0 ? "⁻" : "";
    std::string n = std::to_string(k < 0 ? -k : k);
    for (char c : n) s += digits[c - '0'];
    return s;
}

inline std::string symbol_power(const char* sym, long k) {
    return k == 1 ? std::string(sym) : std::string(sym) + superscript(k);
}

/// num/den * sym^k written the usual way, sign excluded (num > 0).
inline std::string term_text(const Integer& num, const Integer& den, const char* sym, long k) {
    const std::string n = num.str(), d = den.str();
    if (k == 0) return den == 1 ? n : n + "/" + d;
    if (k > 0) {
        std::string s = (num == 1 ? "" : n) + symbol_power(sym, k);
        return den == 1 ? s : s + "/" + d;
    }
    std::string p = symbol_power(sym, -k);
    if (den == 1) return n + "/" + p;
    return n + "/(" + d + p + ")";
}

}  // namespace detail

/// Closed form of the target implied by the relation, e.g.
/// "1971/(128π³) − 9/(16π) + 3π/80" or "(ρ−2)/32".
inline std::string closed_form(const IntegerRelation& rel_in) {
    const std::size_t t = detail::target_index(rel_in.basis);
    const auto& el = rel_in.basis.elements();
    if (rel_in.coefficients.size() != el.size()) return "?";
    const char* minus = "−";
    if (detail::has_target_powers(rel_in.basis)) {
        // A polynomial equation for the target, e.g. "t² − t − 1 = 0".
        std::string out;
        for (std::size_t i = 0; i < el.size(); ++i) {
            const Integer& c = rel_in.coefficients[i];
            if (c == 0) continue;
            std::string atom;
            switch (el[i].kind) {
                case BasisAtom::Kind::Target: atom = detail::symbol_power("t", el[i].power); break;
                case BasisAtom::Kind::One: break;
                case BasisAtom::Kind::PiPower: atom = detail::symbol_power("π", el[i].power); break;
                case BasisAtom::Kind::RhoPower: atom = detail::symbol_power("ρ", el[i].power); break;
            }
            const Integer mag = abs(c);
            std::string body = atom.empty() ? mag.str() : (mag == 1 ? "" : mag.str()) + atom;
            if (out.empty()) {
                out = (c < 0 ? std::string(minus) : "") + body;
            } else {
                out += (c < 0 ? std::string(" ") + minus + " " : std::string(" + ")) + body;
            }
        }
        return out + " = 0";
    }
    if (rel_in.coefficients[t] == 0) return "?";
    IntegerRelation rel = rel_in;
    if (rel.coefficients[t] < 0)
        for (auto& c : rel.coefficients) c = -c;
    const Integer a_t = rel.coefficients[t];

    bool has_rho = false;
    for (std::size_t i = 0; i < el.size(); ++i)
        if (i != t && rel.coefficients[i] != 0 && el[i].kind == BasisAtom::Kind::RhoPower) has_rho = true;

    if (has_rho) {
        // Polynomial in rho over a common denominator, highest power first.
        std::vector<std::pair<long, Integer>> terms;
        for (std::size_t i = 0; i < el.size(); ++i) {
            if (i == t || rel.coefficients[i] == 0) continue;
            long k = el[i].kind == BasisAtom::Kind::RhoPower ? el[i].power : 0;
            terms.push_back({k, -rel.coefficients[i]});
        }
        std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
        Integer den = a_t;
        Integer g = den;
        for (const auto& [k, c] : terms) g = gcd(g, abs(c));
        if (g > 1) {
            den /= g;
            for (auto& tc : terms) tc.second /= g;
        }
        std::string num;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const auto& [k, c] = terms[i];
            Integer mag = abs(c);
            std::string body = k == 0 ? mag.str() : ((mag == 1 ? "" : mag.str()) + detail::symbol_power("ρ", k));
            if (i == 0) {
                num = (c < 0 ? std::string(minus) : "") + body;
            } else {
                num += (c < 0 ? std::string(minus) : std::string("+")) + body;
            }
        }
        if (den == 1) return num;
        return (terms.size() > 1 ? "(" + num + ")" : num) + "/" + den.str();
    }

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < el.size(); ++i)
        if (i != t && rel.coefficients[i] != 0) order.push_back(i);
    auto power_of = [&](std::size_t i) { return el[i].kind == BasisAtom::Kind::PiPower ? el[i].power : 0; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return power_of(a) < power_of(b); });
    std::string out;
    bool first = true;
    for (std::size_t i : order) {
        Integer num = -rel.coefficients[i], den = a_t;
        Integer g = gcd(abs(num), den);
        num /= g;
        den /= g;
        const bool neg = num < 0;
        std::string body = detail::term_text(abs(num), den, "π", power_of(i));
        if (first) {
            out = (neg ? std::string(minus) : "") + body;
        } else {
            out += (neg ? std::string(" ") + minus + " " : std::string(" + ")) + body;
        }
        first = false;
    }
    return first ? "0" : out;
}

}  // namespace ellipse_lab
