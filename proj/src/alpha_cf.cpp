#include "afy/alpha_cf.hpp"

#include "afy/errors.hpp"

namespace afy {

mpz_class AlphaExpansion::c(std::size_t n) const {
    if (n < 1 || n > digits.size()) throw IndexError("signed digit index out of range");
    return eps[n - 1] * digits[n - 1];
}

MobiusMatrix AlphaExpansion::step_matrix(std::size_t n) const {
    if (n < 1 || n > digits.size()) throw IndexError("step matrix index out of range");
    return MobiusMatrix{0, eps[n - 1], 1, digits[n - 1]};
}

namespace {

void check_alpha(const ExactReal& alpha) {
    if (alpha.sign() <= 0 || alpha > ExactReal(1L))
        throw DomainError("alpha must lie in (0,1], got " + alpha.str());
}

// One digit step, domain already checked: returns (eps, a, next value).
struct DigitStep {
    int eps;
    mpz_class a;
    ExactReal next;
};

DigitStep digit_step(const ExactReal& alpha, const ExactReal& x) {
    DigitStep s;
    s.eps = x.sign();
    ExactReal inv = x.abs().reciprocal();
    s.a = (inv + ExactReal(1L) - alpha).floor();
    s.next = inv - ExactReal(s.a);
    return s;
}

}  // namespace

ExactReal alpha_gauss_step(const ExactReal& alpha, const ExactReal& x) {
    check_alpha(alpha);
    if (x < alpha - ExactReal(1L) || x >= alpha)
        throw DomainError("x outside [alpha-1, alpha): " + x.str());
    if (x.is_zero()) return ExactReal(0L);
    return digit_step(alpha, x).next;
}

AlphaExpansion alpha_expand(const ExactReal& alpha, const ExactReal& x, std::size_t max_n) {
    check_alpha(alpha);
    if (x < alpha - ExactReal(1L) || x > alpha)
        throw DomainError("x outside [alpha-1, alpha]: " + x.str());
    AlphaExpansion e;
    e.alpha = alpha;
    e.x = x;
    e.orbit.push_back(x);
    mpz_class pm1 = 1, p0 = 0, qm1 = 0, q0 = 1;
    ExactReal cur = x;
    for (std::size_t n = 0; n < max_n; ++n) {
        if (cur.is_zero()) {
            e.terminated = true;
            break;
        }
        DigitStep s = digit_step(alpha, cur);
        cur = s.next;
        e.eps.push_back(s.eps);
        e.digits.push_back(s.a);
        e.orbit.push_back(cur);
        mpz_class p = s.a * p0 + s.eps * pm1, q = s.a * q0 + s.eps * qm1;
        e.convergents.emplace_back(p, q);
        pm1 = p0; p0 = p;
        qm1 = q0; q0 = q;
    }
    if (!e.terminated && cur.is_zero()) e.terminated = true;
    return e;
}

mpz_class first_digit_of_alpha(const ExactReal& alpha) {
    if (alpha.sign() <= 0 || alpha >= ExactReal(1L))
        throw DomainError("first_digit_of_alpha needs alpha in (0,1)");
    ExactReal v = alpha.reciprocal() - alpha;
    return -(-v).floor();  // ceil
}

}  // namespace afy
