#include "afy/exact_real.hpp"

#include <cctype>
#include <utility>

namespace afy {

namespace {

// Largest s with s^2 | n; returns s and divides n by s^2.
long extract_square_part(long& n) {
    long s = 1;
    for (long p = 2; p * p <= n; ++p) {
        while (n % (p * p) == 0) {
            n /= p * p;
            s *= p;
        }
    }
    return s;
}

int sign_of_a_plus_b_sqrt_d(const mpz_class& a, const mpz_class& b, long d) {
    const int sa = sgn(a), sb = sgn(b);
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against b^2 d.
    mpz_class lhs = a * a, rhs = b * b * d;
    const int t = cmp(lhs, rhs);
    return sa > 0 ? (t > 0 ? 1 : t < 0 ? -1 : 0) : (t > 0 ? -1 : t < 0 ? 1 : 0);
}

struct SurdRaw {
    mpz_class a, b, c;  // (a + b sqrt(d))/c, c != 0, not yet normalised
    long d;
};

// Normalise to c > 0, gcd(a,b,c) = 1; collapse to a rational when b = 0.
ExactReal make_value(const SurdRaw& s) {
    return ExactReal::surd(s.a, s.b, s.c, s.d);
}

SurdRaw as_raw(const ExactReal& x, long d) {
    if (x.is_rational()) return {x.rat().get_num(), 0, x.rat().get_den(), d};
    const Surd& s = x.surd_value();
    return {s.a, s.b, s.c, s.d};
}

long common_field(const ExactReal& a, const ExactReal& b) {
    const long da = a.is_surd() ? a.surd_value().d : 0;
    const long db = b.is_surd() ? b.surd_value().d : 0;
    if (da && db && da != db)
        throw MixedFieldError("surds over sqrt(" + std::to_string(da) + ") and sqrt(" +
                              std::to_string(db) + ") do not mix");
    return da ? da : db;
}

}  // namespace

ExactReal ExactReal::rational(const mpz_class& p, const mpz_class& q) {
    if (sgn(q) == 0) throw DomainError("zero denominator");
    mpq_class v(p, q);
    v.canonicalize();
    return ExactReal(v);
}

ExactReal ExactReal::surd(const mpz_class& a, const mpz_class& b, const mpz_class& c, long d) {
    if (d < 0) throw DomainError("sqrt of a negative integer is not real");
    long rest = d;
    long sq = extract_square_part(rest);
    if (rest <= 1) {
        // sqrt(d) is the integer sq * sqrt(rest<=1): value is rational.
        mpq_class v(a + b * sq * rest, c);  // rest is 0 or 1
        v.canonicalize();
        return ExactReal(v);
    }
    SurdRaw raw{a, b * sq, c, rest};
    if (sgn(raw.c) == 0) throw DomainError("zero denominator in surd");
    if (sgn(raw.c) < 0) {
        raw.a = -raw.a;
        raw.b = -raw.b;
        raw.c = -raw.c;
    }
    if (sgn(raw.b) == 0) {
        mpq_class v(raw.a, raw.c);
        v.canonicalize();
        return ExactReal(v);
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), raw.a.get_mpz_t(), raw.b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), raw.c.get_mpz_t());
    ExactReal r;
    Surd s;
    s.a = raw.a / g;
    s.b = raw.b / g;
    s.c = raw.c / g;
    s.d = raw.d;
    r.v_ = std::move(s);
    return r;
}

ExactReal ExactReal::sqrt_int(long d) { return surd(0, 1, 1, d); }

const mpq_class& ExactReal::rat() const {
    if (!is_rational()) throw DomainError("not a rational");
    return std::get<mpq_class>(v_);
}

const Surd& ExactReal::surd_value() const {
    if (!is_surd()) throw NotASurdError("not a surd");
    return std::get<Surd>(v_);
}

const BigFloat& ExactReal::float_value() const {
    if (!is_bigfloat()) throw DomainError("not a BigFloat");
    return std::get<BigFloat>(v_);
}

bool ExactReal::is_zero() const {
    if (is_rational()) return sgn(rat()) == 0;
    if (is_surd()) return false;  // normal form excludes 0
    return float_value().is_zero();
}

int ExactReal::sign() const {
    if (is_rational()) return sgn(rat());
    if (is_surd()) {
        const Surd& s = surd_value();
        return sign_of_a_plus_b_sqrt_d(s.a, s.b, s.d);  // c > 0
    }
    return float_value().sign();
}

ExactReal ExactReal::operator-() const {
    if (is_rational()) return ExactReal(mpq_class(-rat()));
    if (is_surd()) {
        const Surd& s = surd_value();
        return surd(-s.a, -s.b, s.c, s.d);
    }
    return ExactReal(float_value().neg());
}

ExactReal ExactReal::reciprocal() const {
    if (is_zero()) throw DomainError("reciprocal of zero");
    if (is_rational()) {
        mpq_class v = 1 / rat();
        return ExactReal(v);
    }
    if (is_surd()) {
        // 1 / ((a + b sqrt d)/c) = c (a - b sqrt d) / (a^2 - b^2 d)
        const Surd& s = surd_value();
        mpz_class n = s.a * s.a - s.b * s.b * s.d;  // nonzero: sqrt(d) irrational
        return make_value({s.c * s.a, -s.c * s.b, n, s.d});
    }
    return ExactReal(BigFloat::from_long(1, float_value().precision()).div(float_value()));
}

namespace {

enum class Op { Add, Sub, Mul, Div };

ExactReal float_binop(const ExactReal& a, const ExactReal& b, Op op) {
    const mpfr_prec_t prec =
        std::max(a.is_bigfloat() ? a.float_value().precision() : kMinFloatPrec,
                 b.is_bigfloat() ? b.float_value().precision() : kMinFloatPrec);
    BigFloat fa = a.to_bigfloat(prec), fb = b.to_bigfloat(prec);
    switch (op) {
        case Op::Add: return ExactReal(fa.add(fb));
        case Op::Sub: return ExactReal(fa.sub(fb));
        case Op::Mul: return ExactReal(fa.mul(fb));
        case Op::Div: return ExactReal(fa.div(fb));
    }
    throw Error("unreachable");
}

ExactReal exact_binop(const ExactReal& a, const ExactReal& b, Op op) {
    if (a.is_rational() && b.is_rational()) {
        const mpq_class &x = a.rat(), &y = b.rat();
        switch (op) {
            case Op::Add: return ExactReal(mpq_class(x + y));
            case Op::Sub: return ExactReal(mpq_class(x - y));
            case Op::Mul: return ExactReal(mpq_class(x * y));
            case Op::Div:
                if (sgn(y) == 0) throw DomainError("division by zero");
                return ExactReal(mpq_class(x / y));
        }
    }
    const long d = common_field(a, b);
    if (op == Op::Div) {
        if (b.is_zero()) throw DomainError("division by zero");
        return exact_binop(a, b.reciprocal(), Op::Mul);
    }
    SurdRaw x = as_raw(a, d), y = as_raw(b, d);
    if (op == Op::Add || op == Op::Sub) {
        if (op == Op::Sub) {
            y.a = -y.a;
            y.b = -y.b;
        }
        return make_value({x.a * y.c + y.a * x.c, x.b * y.c + y.b * x.c, x.c * y.c, d});
    }
    // Mul: (a1 + b1 s)(a2 + b2 s) = (a1 a2 + b1 b2 d) + (a1 b2 + a2 b1) s
    return make_value({x.a * y.a + x.b * y.b * d, x.a * y.b + y.a * x.b, x.c * y.c, d});
}

ExactReal binop(const ExactReal& a, const ExactReal& b, Op op) {
    if (a.is_bigfloat() || b.is_bigfloat()) return float_binop(a, b, op);
    return exact_binop(a, b, op);
}

}  // namespace

ExactReal operator+(const ExactReal& a, const ExactReal& b) { return binop(a, b, Op::Add); }
ExactReal operator-(const ExactReal& a, const ExactReal& b) { return binop(a, b, Op::Sub); }
ExactReal operator*(const ExactReal& a, const ExactReal& b) { return binop(a, b, Op::Mul); }
ExactReal operator/(const ExactReal& a, const ExactReal& b) { return binop(a, b, Op::Div); }

int compare(const ExactReal& a, const ExactReal& b) {
    if (a.is_bigfloat() || b.is_bigfloat()) {
        const mpfr_prec_t prec =
            std::max(a.is_bigfloat() ? a.float_value().precision() : kMinFloatPrec,
                     b.is_bigfloat() ? b.float_value().precision() : kMinFloatPrec);
        return a.to_bigfloat(prec).compare(b.to_bigfloat(prec));
    }
    if (a.is_rational() && b.is_rational()) return cmp(a.rat(), b.rat());
    return (a - b).sign();
}

int compare_numeric(const ExactReal& a, const ExactReal& b, mpfr_prec_t prec) {
    if (a.is_surd() && b.is_surd() && a.surd_value().d != b.surd_value().d)
        return a.to_bigfloat(prec).compare(b.to_bigfloat(prec));
    return compare(a, b);
}

mpz_class ExactReal::floor() const {
    if (is_rational()) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rat().get_num().get_mpz_t(), rat().get_den().get_mpz_t());
        return q;
    }
    if (is_surd()) {
        // a + b sqrt(d) lies strictly between u and u+1 for
        // u = a + isqrt(b^2 d) (b > 0) or u = a - isqrt(b^2 d) - 1 (b < 0);
        // strictness because b^2 d is never a perfect square.  Then
        // floor((a + b sqrt d)/c) = floor(u/c) exactly.
        const Surd& s = surd_value();
        mpz_class t = s.b * s.b * s.d, r;
        mpz_sqrt(r.get_mpz_t(), t.get_mpz_t());
        mpz_class u = sgn(s.b) > 0 ? mpz_class(s.a + r) : mpz_class(s.a - r - 1);
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), u.get_mpz_t(), s.c.get_mpz_t());
        return q;
    }
    return float_value().floor();
}

ExactReal ExactReal::conjugate() const {
    if (is_rational()) return *this;
    if (is_surd()) {
        const Surd& s = surd_value();
        return surd(s.a, -s.b, s.c, s.d);
    }
    throw NotASurdError("algebraic conjugate needs a rational or a surd");
}

BigFloat ExactReal::to_bigfloat(mpfr_prec_t prec) const {
    if (is_rational()) return BigFloat::from_rational(rat(), prec);
    if (is_surd()) {
        const Surd& s = surd_value();
        BigFloat root = BigFloat::sqrt_of(static_cast<unsigned long>(s.d), prec);
        BigFloat num = BigFloat::from_rational(mpq_class(s.a), prec)
                           .add(BigFloat::from_rational(mpq_class(s.b), prec).mul(root));
        return num.div(BigFloat::from_rational(mpq_class(s.c), prec));
    }
    return float_value();
}

double ExactReal::to_double() const { return to_bigfloat(kMinFloatPrec).to_double(); }

std::string ExactReal::str() const {
    if (is_rational()) {
        const mpq_class& q = rat();
        if (q.get_den() == 1) return q.get_num().get_str();
        return q.get_num().get_str() + "/" + q.get_den().get_str();
    }
    if (is_surd()) {
        const Surd& s = surd_value();
        std::string b = s.b.get_str();
        if (sgn(s.b) >= 0) b = "+" + b;
        return "(" + s.a.get_str() + b + "*sqrt(" + std::to_string(s.d) + "))/" + s.c.get_str();
    }
    return float_value().str();
}

namespace {

bool all_of_digits(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

// mpz_set_str rejects a leading '+'.
mpz_class to_mpz(const std::string& s) {
    return mpz_class(s.front() == '+' ? s.substr(1) : s);
}

// Parses "a+b*sqrt(d)" / "a-sqrt(d)" / "sqrt(d)" / "b*sqrt(d)"; a and b
// optional integers.  Returns false if the shape does not match.
bool parse_surd_core(const std::string& s, mpz_class& a, mpz_class& b, long& d) {
    const auto rpos = s.find("sqrt(");
    if (rpos == std::string::npos) return false;
    const auto close = s.find(')', rpos);
    if (close == std::string::npos) return false;
    const std::string dstr = s.substr(rpos + 5, close - rpos - 5);
    if (!all_of_digits(dstr)) return false;
    d = std::stol(dstr);
    std::string head = s.substr(0, rpos);  // e.g. "-1+2*", "3-", "", "-"
    if (s.find_first_not_of(" ", close + 1) != std::string::npos) return false;
    // Split head into the a-part and the b-prefix at the last +/- that is
    // not the leading sign.
    std::size_t cut = std::string::npos;
    for (std::size_t i = head.size(); i-- > 1;) {
        if (head[i] == '+' || head[i] == '-') {
            cut = i;
            break;
        }
    }
    std::string astr, bstr;
    if (cut == std::string::npos) {
        astr = "0";
        bstr = head;  // "", "-", "2*"
    } else {
        astr = head.substr(0, cut);
        bstr = head.substr(cut, 1) + head.substr(cut + 1);
    }
    if (!bstr.empty() && bstr.back() == '*') bstr.pop_back();
    if (bstr.empty() || bstr == "+") bstr = "1";
    if (bstr == "-") bstr = "-1";
    if (!all_of_digits(astr) || !all_of_digits(bstr)) return false;
    a = to_mpz(astr);
    b = to_mpz(bstr);
    return true;
}

}  // namespace

ExactReal ExactReal::parse(const std::string& text, mpfr_prec_t prec) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw ParseError("empty number");

    // Explicit precision suffix forces the float arm.
    if (const auto at = s.find('@'); at != std::string::npos) {
        const std::string bits = s.substr(at + 1);
        if (!all_of_digits(bits)) throw ParseError("bad precision suffix in '" + text + "'");
        return ExactReal(BigFloat::from_string(s.substr(0, at), std::stol(bits)));
    }

    if (s.find("sqrt") != std::string::npos) {
        // "(core)/c" or just "core".
        mpz_class a, b, c = 1;
        long d = 0;
        std::string core = s;
        if (s.front() == '(') {
            const auto close = s.rfind(')');
            if (close == std::string::npos) throw ParseError("unbalanced parens in '" + text + "'");
            core = s.substr(1, close - 1);
            std::string tail = s.substr(close + 1);
            if (!tail.empty()) {
                if (tail.front() != '/' || !all_of_digits(tail.substr(1)))
                    throw ParseError("bad surd denominator in '" + text + "'");
                c = to_mpz(tail.substr(1));
            }
        }
        if (!parse_surd_core(core, a, b, d)) throw ParseError("not a surd: '" + text + "'");
        return surd(a, b, c, d);
    }

    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const std::string p = s.substr(0, slash), q = s.substr(slash + 1);
        if (!all_of_digits(p) || !all_of_digits(q))
            throw ParseError("not a fraction: '" + text + "'");
        return rational(to_mpz(p), to_mpz(q));
    }

    if (all_of_digits(s)) return ExactReal(to_mpz(s));

    if (s.find('.') != std::string::npos || s.find('e') != std::string::npos ||
        s.find('E') != std::string::npos)
        return ExactReal(BigFloat::from_string(s, prec));

    throw ParseError("cannot parse number '" + text + "'");
}

}  // namespace afy
