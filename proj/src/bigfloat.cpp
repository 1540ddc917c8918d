#include "afy/bigfloat.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace afy {

namespace {

mpfr_prec_t clamp_prec(mpfr_prec_t p) {
    return std::max<mpfr_prec_t>(kMinFloatPrec, std::min<mpfr_prec_t>(p, kMaxFloatPrec));
}

// Slack (in bits) below the working precision before a difference counts
// as a near tie.
constexpr int kTieGuardBits = 8;

}  // namespace

BigFloat::BigFloat() { mpfr_init2(v_, kDefaultFloatPrec); mpfr_set_zero(v_, 1); }

BigFloat::BigFloat(mpfr_prec_t prec) {
    mpfr_init2(v_, clamp_prec(prec));
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

BigFloat& BigFloat::operator=(BigFloat o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

BigFloat BigFloat::from_rational(const mpq_class& q, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
}

BigFloat BigFloat::from_long(long v, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_set_si(r.v_, v, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::from_string(const std::string& s, mpfr_prec_t prec) {
    BigFloat r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
        throw ParseError("not a decimal float: '" + s + "'");
    return r;
}

BigFloat BigFloat::sqrt_of(unsigned long d, mpfr_prec_t prec) {
    BigFloat r(prec);
    mpfr_sqrt_ui(r.v_, d, MPFR_RNDN);
    return r;
}

namespace {

BigFloat binop(const BigFloat& a, const BigFloat& b,
               int (*op)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t)) {
    BigFloat r(std::max(a.precision(), b.precision()));
    op(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

}  // namespace

BigFloat BigFloat::add(const BigFloat& o) const { return binop(*this, o, mpfr_add); }
BigFloat BigFloat::sub(const BigFloat& o) const { return binop(*this, o, mpfr_sub); }
BigFloat BigFloat::mul(const BigFloat& o) const { return binop(*this, o, mpfr_mul); }

BigFloat BigFloat::div(const BigFloat& o) const {
    if (o.is_zero()) throw DomainError("division by zero");
    return binop(*this, o, mpfr_div);
}

BigFloat BigFloat::neg() const {
    BigFloat r(precision());
    mpfr_neg(r.raw(), v_, MPFR_RNDN);
    return r;
}

BigFloat BigFloat::abs() const {
    BigFloat r(precision());
    mpfr_abs(r.raw(), v_, MPFR_RNDN);
    return r;
}

int BigFloat::compare(const BigFloat& o) const {
    const int c = mpfr_cmp(v_, o.v_);
    if (c == 0) return 0;
    // Near-tie check: |a - b| relative to the larger magnitude.
    mpfr_prec_t prec = std::max(precision(), o.precision());
    mpfr_t diff;
    mpfr_init2(diff, prec);
    mpfr_sub(diff, v_, o.v_, MPFR_RNDN);
    const mpfr_exp_t de = mpfr_get_exp(diff);
    mpfr_clear(diff);
    mpfr_exp_t scale = 1;  // exponent of values of order one
    if (!mpfr_zero_p(v_) || !mpfr_zero_p(o.v_)) {
        scale = mpfr_zero_p(v_) ? mpfr_get_exp(o.v_)
              : mpfr_zero_p(o.v_) ? mpfr_get_exp(v_)
              : std::max(mpfr_get_exp(v_), mpfr_get_exp(o.v_));
    }
    if (de <= scale - (prec - kTieGuardBits))
        throw PrecisionError("comparison undecidable at current precision");
    return c < 0 ? -1 : 1;
}

mpz_class BigFloat::floor() const {
    mpfr_t fl, frac;
    mpfr_init2(fl, precision());
    mpfr_floor(fl, v_);
    mpfr_init2(frac, precision());
    mpfr_sub(frac, v_, fl, MPFR_RNDN);  // in [0, 1)
    bool tie = false;
    if (!mpfr_zero_p(frac)) {
        // Distance to the nearest integer below 2^-(prec - guard)?
        mpfr_exp_t e = mpfr_get_exp(frac);
        if (e <= -(precision() - kTieGuardBits)) tie = true;
        mpfr_t gap;
        mpfr_init2(gap, precision());
        mpfr_ui_sub(gap, 1, frac, MPFR_RNDN);
        if (!mpfr_zero_p(gap) && mpfr_get_exp(gap) <= -(precision() - kTieGuardBits)) tie = true;
        mpfr_clear(gap);
    }
    if (tie) {
        mpfr_clear(fl);
        mpfr_clear(frac);
        throw PrecisionError("floor undecidable: value within rounding noise of an integer");
    }
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), fl, MPFR_RNDN);  // fl is exactly an integer
    mpfr_clear(fl);
    mpfr_clear(frac);
    return z;
}

mpq_class BigFloat::to_rational() const {
    if (!mpfr_number_p(v_)) throw DomainError("to_rational: the value is not finite");
    if (mpfr_zero_p(v_)) return mpq_class(0);
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), v_);
    mpz_class scale = 1;
    scale <<= (e >= 0 ? e : -e);
    mpq_class q(m);
    if (e >= 0)
        q *= scale;
    else
        q /= scale;
    return q;
}

std::string BigFloat::str() const {
    // ~ prec * log10(2) significant digits.
    const std::size_t digits = static_cast<std::size_t>(precision() * 0.30103) + 2;
    mpfr_exp_t exp = 0;
    char* mant = mpfr_get_str(nullptr, &exp, 10, digits, v_, MPFR_RNDN);
    std::string m(mant);
    mpfr_free_str(mant);
    std::string sign;
    if (!m.empty() && m[0] == '-') {
        sign = "-";
        m = m.substr(1);
    }
    // Trim trailing zeros but keep at least one digit.
    const auto last = m.find_last_not_of('0');
    m = m.substr(0, std::max<std::size_t>(last + 1, 1));
    std::string out = sign + "0." + m + "e" + std::to_string(exp);
    if (is_zero()) out = "0";
    return out + "@" + std::to_string(precision());
}

}  // namespace afy
