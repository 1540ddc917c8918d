#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

#include "afy/errors.hpp"

namespace afy {

inline constexpr mpfr_prec_t kMinFloatPrec = 64;
inline constexpr mpfr_prec_t kDefaultFloatPrec = 256;
inline constexpr mpfr_prec_t kMaxFloatPrec = 8192;

// Correctly rounded radix-2 float with explicit precision (MPFR under the
// hood, value semantics on top).  Mixed-precision arithmetic rounds to the
// larger operand precision.  floor() and compare() refuse to guess near a
// boundary: they throw PrecisionError so the caller can retry with more
// bits instead of silently committing to the wrong branch of a map.
class BigFloat {
public:
    BigFloat();
    explicit BigFloat(mpfr_prec_t prec);
    BigFloat(const BigFloat& o);
    BigFloat(BigFloat&& o) noexcept;
    BigFloat& operator=(BigFloat o) noexcept;
    ~BigFloat();

    static BigFloat from_rational(const mpq_class& q, mpfr_prec_t prec = kDefaultFloatPrec);
    static BigFloat from_long(long v, mpfr_prec_t prec = kDefaultFloatPrec);
    // Decimal string, round-to-nearest at the requested precision.
    static BigFloat from_string(const std::string& s, mpfr_prec_t prec = kDefaultFloatPrec);
    static BigFloat sqrt_of(unsigned long d, mpfr_prec_t prec = kDefaultFloatPrec);

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

    BigFloat add(const BigFloat& o) const;
    BigFloat sub(const BigFloat& o) const;
    BigFloat mul(const BigFloat& o) const;
    BigFloat div(const BigFloat& o) const;  // DomainError on zero divisor
    BigFloat neg() const;
    BigFloat abs() const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    // Exact comparison of the two representations; throws PrecisionError
    // when the values differ by no more than a few ulps (a "near tie"),
    // since such a difference is indistinguishable from rounding noise.
    int compare(const BigFloat& o) const;

    // Floor as an exact integer; PrecisionError within a few ulps of an
    // integer boundary.
    mpz_class floor() const;

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // The exact dyadic rational this float represents.
    mpq_class to_rational() const;
    // Decimal form with enough digits to identify the value at this
    // precision, suffixed with "@<bits>".
    std::string str() const;

    const mpfr_t& raw() const { return v_; }
    mpfr_t& raw() { return v_; }

private:
    mpfr_t v_;
};

}  // namespace afy
