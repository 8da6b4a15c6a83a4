#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <type_traits>
#include <limits>

#include <boost/multiprecision/mpfr.hpp>

#include "errors.hpp"

namespace ellipse_lab {

/// Arbitrary-precision real. Arithmetic results carry the largest precision
/// of their operands, so values are always created with an explicit precision.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                          boost::multiprecision::et_off>;

namespace detail {

inline unsigned digits_to_bits(unsigned digits10) {
    return static_cast<unsigned>(std::ceil(digits10 * 3.321928094887362)) + 8;
}

}  // namespace detail

/// Creates a value holding `v` with `digits10` decimal digits of precision.
template <class V>
inline Real make_real(const V& v, unsigned digits10) {
    Real r(0, digits10);
    if constexpr (std::is_same_v<V, Real>) {
        mpfr_set(r.backend().data(), v.backend().data(), MPFR_RNDN);
    } else if constexpr (std::is_integral_v<V> && std::is_signed_v<V>) {
        mpfr_set_si(r.backend().data(), static_cast<long>(v), MPFR_RNDN);
    } else if constexpr (std::is_integral_v<V>) {
        mpfr_set_ui(r.backend().data(), static_cast<unsigned long>(v), MPFR_RNDN);
    } else {
        static_assert(std::is_floating_point_v<V>, "make_real: use parse_real for text");
        mpfr_set_d(r.backend().data(), static_cast<double>(v), MPFR_RNDN);
    }
    return r;
}

inline Real parse_real(std::string_view text, unsigned digits10) {
    Real r(0, digits10);
    std::string s(text);
    if (mpfr_set_str(r.backend().data(), s.c_str(), 10, MPFR_RNDN) != 0) {
        throw ParseError("not a decimal number: '" + s + "'");
    }
    return r;
}

inline Real pi_at(unsigned digits10) {
    Real r(0, digits10);
    mpfr_const_pi(r.backend().data(), MPFR_RNDN);
    return r;
}

inline Real pow10_at(long exponent, unsigned digits10) {
    Real r(10, digits10);
    mpfr_pow_si(r.backend().data(), r.backend().data(), exponent, MPFR_RNDN);
    return r;
}

/// Returns a copy of `x` rounded to `digits10` decimal digits of precision.
inline Real with_precision(const Real& x, unsigned digits10) {
    Real r(0, digits10);
    mpfr_set(r.backend().data(), x.backend().data(), MPFR_RNDN);
    return r;
}

inline unsigned precision_of(const Real& x) { return x.precision(); }

/// Base-10 exponent estimate, log10|x|; -inf for zero.
inline double log10_abs(const Real& x) {
    if (x == 0) return -std::numeric_limits<double>::infinity();
    long exp2 = 0;
    double mant = mpfr_get_d_2exp(&exp2, x.backend().data(), MPFR_RNDN);
    return std::log10(std::fabs(mant)) + static_cast<double>(exp2) * 0.30102999566398120;
}

/// Number of leading significant decimal digits on which `value` agrees with
/// `reference`, clamped to [0, cap].
inline int matched_digits(const Real& value, const Real& reference, int cap = 100000) {
    Real diff = value - reference;
    if (diff == 0) return cap;
    double rel = log10_abs(diff) - (reference == 0 ? 0.0 : log10_abs(reference));
    int d = static_cast<int>(std::floor(-rel));
    return std::clamp(d, 0, cap);
}

/// Significant digits of `reference` that `value` reproduces: the largest k
/// with |value - reference| within half a unit in the k-th significant digit
/// of `reference`. Clamped to [0, cap].
inline int agreeing_digits(const Real& value, const Real& reference, int cap = 100000) {
    Real diff = value - reference;
    if (diff == 0) return cap;
    if (reference == 0) return 0;
    double lead = std::floor(log10_abs(reference)) + 1;
    int d = static_cast<int>(std::floor(lead - 0.30102999566398120 - log10_abs(diff)));
    return std::clamp(d, 0, cap);
}

/// Fixed-point decimal rendering with `sig` significant digits (no exponent).
/// Trailing zeros after the decimal point are kept unless `trim` is set.
inline std::string format_fixed(const Real& x, unsigned sig, bool trim = false) {
    std::string out;
    if (x == 0) {
        out = "0";
    } else {
        mpfr_exp_t e10 = 0;
        // Digits are produced by MPFR with correct rounding; layout is ours.
        char* raw = mpfr_get_str(nullptr, &e10, 10, sig, x.backend().data(), MPFR_RNDN);
        std::string digits(raw);
        mpfr_free_str(raw);
        bool neg = false;
        if (!digits.empty() && digits.front() == '-') {
            neg = true;
            digits.erase(0, 1);
        }
        long point = static_cast<long>(e10);
        if (point <= 0) {
            out = "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
        } else if (point >= static_cast<long>(digits.size())) {
            out = digits + std::string(static_cast<std::size_t>(point) - digits.size(), '0');
        } else {
            out = digits.substr(0, static_cast<std::size_t>(point)) + "." +
                  digits.substr(static_cast<std::size_t>(point));
        }
        if (neg) out.insert(out.begin(), '-');
    }
    if (trim && out.find('.') != std::string::npos) {
        while (out.back() == '0') out.pop_back();
        if (out.back() == '.') out.pop_back();
    }
    return out;
}

/// Scientific rendering with `sig` significant digits, for logs and reports.
inline std::string format_sci(const Real& x, unsigned sig) {
    return x.str(static_cast<std::streamsize>(sig), std::ios_base::scientific);
}

struct FundamentalConstants {
    Real pi;
    Real j01;
    Real rho;
};

/// Working precision for a computation: `digits` are reported as trusted,
/// `guard_digits` more are carried internally.
class PrecisionContext {
public:
    static constexpr unsigned kMinDigits = 10;
    static constexpr unsigned kMinGuard = 5;
    static constexpr unsigned kDefaultGuard = 20;

    explicit PrecisionContext(unsigned digits, unsigned guard_digits = kDefaultGuard)
        : digits_(digits), guard_(guard_digits), cache_(std::make_shared<Cache>()) {
        if (digits < kMinDigits) {
            throw DomainError("precision context needs at least 10 digits, got " +
                              std::to_string(digits));
        }
        if (guard_digits < kMinGuard) {
            throw DomainError("precision context needs at least 5 guard digits, got " +
                              std::to_string(guard_digits));
        }
    }

    unsigned digits() const { return digits_; }
    unsigned guard_digits() const { return guard_; }
    unsigned working_digits() const { return digits_ + guard_; }

    template <class V>
    Real make(const V& v) const {
        return make_real(v, working_digits());
    }
    Real parse(std::string_view text) const { return parse_real(text, working_digits()); }

    /// Same target digits, doubled guard; used for certification retries.
    PrecisionContext with_doubled_guard() const { return PrecisionContext(digits_, 2 * guard_); }
    PrecisionContext with_digits(unsigned digits) const { return PrecisionContext(digits, guard_); }

    /// Write-once cache slot; `compute` runs at most once per context.
    template <class F>
    const FundamentalConstants& cached_constants(F&& compute) const {
        std::call_once(cache_->once, [&] { cache_->value = std::make_unique<FundamentalConstants>(compute()); });
        return *cache_->value;
    }

private:
    struct Cache {
        std::once_flag once;
        std::unique_ptr<FundamentalConstants> value;
    };

    unsigned digits_;
    unsigned guard_;
    std::shared_ptr<Cache> cache_;
};

}  // namespace ellipse_lab
