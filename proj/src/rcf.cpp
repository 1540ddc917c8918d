#include "afy/rcf.hpp"

#include "afy/errors.hpp"

namespace afy {

ExactReal gauss_step(const ExactReal& x) {
    if (x.sign() < 0 || x >= ExactReal(1L))
        throw DomainError("gauss_step needs x in [0,1), got " + x.str());
    if (x.is_zero()) return ExactReal(0L);
    ExactReal inv = x.reciprocal();
    return inv - ExactReal(inv.floor());
}

RcfExpansion rcf_expand(const ExactReal& x, std::size_t max_n) {
    if (max_n < 1) throw DomainError("rcf_expand needs max_n >= 1");
    RcfExpansion e;
    e.x = x;
    e.a0 = x.floor();
    ExactReal cur = x - ExactReal(e.a0);
    mpz_class pm1 = 1, p0 = 0, qm1 = 0, q0 = 1;
    for (std::size_t n = 0; n < max_n; ++n) {
        if (cur.is_zero()) {
            e.terminated = true;
            break;
        }
        ExactReal inv = cur.reciprocal();
        mpz_class a = inv.floor();
        cur = inv - ExactReal(a);
        mpz_class p = a * p0 + pm1, q = a * q0 + qm1;
        e.digits.push_back(a);
        e.convergents.emplace_back(p, q);
        pm1 = p0; p0 = p;
        qm1 = q0; q0 = q;
    }
    if (!e.terminated && cur.is_zero()) e.terminated = true;
    return e;
}

namespace {

// (p_n, q_n) with the seed pair at n = 0.
std::pair<mpz_class, mpz_class> convergent_at(const RcfExpansion& exp, std::size_t n) {
    if (n == 0) return {0, 1};
    if (n > exp.convergents.size())
        throw IndexError("convergent index " + std::to_string(n) + " past computed length " +
                         std::to_string(exp.convergents.size()));
    return exp.convergents[n - 1];
}

}  // namespace

ExactReal theta_n(const RcfExpansion& exp, std::size_t n) {
    auto [p, q] = convergent_at(exp, n);
    ExactReal frac = exp.x - ExactReal(exp.a0);
    ExactReal diff = frac - ExactReal(mpq_class(p, q));
    return ExactReal(mpz_class(q * q)) * diff.abs();
}

DiophantineReport vahlen_borel_check(const RcfExpansion& exp, std::size_t n) {
    if (n < 1) throw IndexError("vahlen_borel_check needs n >= 1");
    ExactReal tm = theta_n(exp, n - 1), t0 = theta_n(exp, n), tp = theta_n(exp, n + 1);
    ExactReal min2 = tm < t0 ? tm : t0;
    ExactReal min3 = min2 < tp ? min2 : tp;
    DiophantineReport r;
    r.vahlen = min2 < ExactReal::rational(1, 2);
    // Compare squares to stay inside one field: m < 1/sqrt(k)  <=>  m^2 < 1/k.
    ExactReal sq = min3 * min3;
    r.borel = sq < ExactReal::rational(1, 5);
    const mpz_class& a_next = exp.digits[n];  // a_{n+1}
    r.sharp_borel = sq < ExactReal::rational(1, a_next * a_next + 4);
    return r;
}

ConvergentMatch legendre_check(const ExactReal& x, const mpz_class& p, const mpz_class& q) {
    if (sgn(q) <= 0) throw PreconditionError("legendre_check needs q > 0");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    if (g != 1) throw PreconditionError("legendre_check needs gcd(p, q) = 1");
    ExactReal diff = (x - ExactReal(mpq_class(p, q))).abs();
    if (!(diff < ExactReal(mpq_class(1, 2 * q * q))))
        throw PreconditionError("legendre_check needs |x - p/q| < 1/(2q^2)");

    // q_n grows at least like the Fibonacci numbers, so a cap linear in
    // bit-length of q is enough to reach q_n > q.
    const std::size_t cap = 2 * mpz_sizeinbase(q.get_mpz_t(), 2) + 16;
    RcfExpansion e = rcf_expand(x, cap);
    mpz_class target_p = p - e.a0 * q;  // convergents track x - a0
    ConvergentMatch m;
    for (std::size_t n = 0; n <= e.convergents.size(); ++n) {
        auto [pn, qn] = n == 0 ? std::pair<mpz_class, mpz_class>{0, 1} : e.convergents[n - 1];
        if (pn == target_p && qn == q) {
            m.is_convergent = true;
            m.index = n;
            return m;
        }
        if (qn > q) break;
    }
    return m;
}

}  // namespace afy
