#pragma once

#include <gmpxx.h>

#include <string>
#include <variant>

#include "afy/bigfloat.hpp"
#include "afy/errors.hpp"

namespace afy {

// Quadratic surd (a + b*sqrt(d))/c in normal form:
//   c > 0, gcd(a, b, c) = 1, b != 0, d > 1 squarefree.
// A value with b = 0 is not a Surd; it normalises to a rational.
struct Surd {
    mpz_class a, b, c;
    long d = 0;
};

// One number out of the exact tower: big rational, quadratic surd over a
// single sqrt(d), or a BigFloat.  Arithmetic never leaves the tower:
//   rational (op) rational        -> rational
//   rational (op) surd(d)         -> surd(d)  (or rational if sqrt(d) drops out)
//   surd(d)  (op) surd(d)         -> surd(d)  (same field only; mixed d throws)
//   anything (op) BigFloat        -> BigFloat at the larger precision
// Comparisons, signs and floors of rationals and surds are exact; the
// float arm reports PrecisionError instead of guessing near a boundary.
class ExactReal {
public:
    ExactReal() : v_(mpq_class(0)) {}
    ExactReal(long v) : v_(mpq_class(v)) {}
    ExactReal(const mpz_class& v) : v_(mpq_class(v)) {}
    ExactReal(const mpq_class& v) : v_(v) { std::get<mpq_class>(v_).canonicalize(); }
    ExactReal(const BigFloat& f) : v_(f) {}

    static ExactReal rational(const mpz_class& p, const mpz_class& q);
    // Builds (a + b*sqrt(d))/c, normalising; square factors of d fold into b.
    static ExactReal surd(const mpz_class& a, const mpz_class& b, const mpz_class& c, long d);
    static ExactReal sqrt_int(long d);  // sqrt(d), exact

    // Accepts "p/q", "p", "(a+b*sqrt(d))/c" (and e.g. "sqrt(2)", "1-sqrt(3)"),
    // or a decimal optionally suffixed "@bits".
    static ExactReal parse(const std::string& text, mpfr_prec_t prec = kDefaultFloatPrec);

    bool is_rational() const { return std::holds_alternative<mpq_class>(v_); }
    bool is_surd() const { return std::holds_alternative<Surd>(v_); }
    bool is_bigfloat() const { return std::holds_alternative<BigFloat>(v_); }

    const mpq_class& rat() const;
    const Surd& surd_value() const;
    const BigFloat& float_value() const;

    bool is_zero() const;
    int sign() const;

    ExactReal operator-() const;
    ExactReal abs() const { return sign() < 0 ? -*this : *this; }
    ExactReal reciprocal() const;  // DomainError on zero

    friend ExactReal operator+(const ExactReal& a, const ExactReal& b);
    friend ExactReal operator-(const ExactReal& a, const ExactReal& b);
    friend ExactReal operator*(const ExactReal& a, const ExactReal& b);
    friend ExactReal operator/(const ExactReal& a, const ExactReal& b);

    // Total-order comparison: -1, 0, +1.  Exact for rationals and surds;
    // PrecisionError on float near-ties.  Surds over different d are not
    // comparable (MixedFieldError).
    friend int compare(const ExactReal& a, const ExactReal& b);

    bool operator==(const ExactReal& o) const { return compare(*this, o) == 0; }
    bool operator!=(const ExactReal& o) const { return compare(*this, o) != 0; }
    bool operator<(const ExactReal& o) const { return compare(*this, o) < 0; }
    bool operator<=(const ExactReal& o) const { return compare(*this, o) <= 0; }
    bool operator>(const ExactReal& o) const { return compare(*this, o) > 0; }
    bool operator>=(const ExactReal& o) const { return compare(*this, o) >= 0; }

    // Exact floor.  Surds use integer sqrt bracketing, no float detour.
    mpz_class floor() const;

    // Field automorphism sqrt(d) -> -sqrt(d); identity on rationals
    // (NotASurdError on floats, which carry no field structure).
    ExactReal conjugate() const;

    BigFloat to_bigfloat(mpfr_prec_t prec = kDefaultFloatPrec) const;
    double to_double() const;
    std::string str() const;

private:
    std::variant<mpq_class, Surd, BigFloat> v_;
};

// Names used throughout the proofs-as-tests layer.
inline mpz_class floor_exact(const ExactReal& x) { return x.floor(); }
inline int compare_exact(const ExactReal& a, const ExactReal& b) { return compare(a, b); }
inline ExactReal algebraic_conjugate(const ExactReal& x) { return x.conjugate(); }

// Like compare, but surds over different fields fall back to BigFloat
// comparison at the given precision instead of MixedFieldError (still
// PrecisionError on a genuine near tie).
int compare_numeric(const ExactReal& a, const ExactReal& b, mpfr_prec_t prec = kDefaultFloatPrec);

// Either a finite ExactReal or -infinity (the only infinity modeled; maps
// that would produce +infinity throw PoleError instead).
class ExtendedValue {
public:
    ExtendedValue() = default;  // -infinity
    ExtendedValue(ExactReal x) : finite_(true), v_(std::move(x)) {}
    static ExtendedValue neg_infinity() { return ExtendedValue(); }

    bool is_neg_infinity() const { return !finite_; }
    const ExactReal& finite() const {
        if (!finite_) throw DomainError("value is -infinity");
        return v_;
    }

    bool operator==(const ExtendedValue& o) const {
        if (finite_ != o.finite_) return false;
        return !finite_ || v_ == o.v_;
    }

private:
    bool finite_ = false;
    ExactReal v_;
};

}  // namespace afy
