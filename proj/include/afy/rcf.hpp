#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>
#include <vector>

#include "afy/exact_real.hpp"

namespace afy {

// Regular continued fraction data for x = a0 + [0; a1, a2, ...].
// Convergents p_n/q_n approximate the fractional part x - a0 and obey
//   p_n = a_n p_{n-1} + p_{n-2},  q_n = a_n q_{n-1} + q_{n-2}
// with seeds (p_{-1}, p_0, q_{-1}, q_0) = (1, 0, 0, 1); convergents[k]
// holds (p_{k+1}, q_{k+1}).  terminated is set when the orbit under the
// Gauss map reaches 0, which happens exactly for rational x.
struct RcfExpansion {
    ExactReal x;
    mpz_class a0;
    std::vector<mpz_class> digits;
    std::vector<std::pair<mpz_class, mpz_class>> convergents;
    bool terminated = false;
};

// Gauss map on [0,1): 0 at 0, else 1/x - floor(1/x).
ExactReal gauss_step(const ExactReal& x);

// Expands up to max_n digits (fewer if the orbit terminates).
RcfExpansion rcf_expand(const ExactReal& x, std::size_t max_n);

// Approximation coefficient theta_n = q_n^2 |x - a0 - p_n/q_n|, n = 0
// meaning the seed pair (0, 1).  IndexError past the computed length.
ExactReal theta_n(const RcfExpansion& exp, std::size_t n);

struct DiophantineReport {
    bool vahlen = false;       // min(theta_{n-1}, theta_n) < 1/2
    bool borel = false;        // min of three consecutive < 1/sqrt(5)
    bool sharp_borel = false;  // min of three < 1/sqrt(a_{n+1}^2 + 4)
};

// Needs theta_{n-1}, theta_n, theta_{n+1}, so 1 <= n <= length - 1.
DiophantineReport vahlen_borel_check(const RcfExpansion& exp, std::size_t n);

struct ConvergentMatch {
    bool is_convergent = false;
    std::optional<std::size_t> index;  // n with (p, q) = (p_n, q_n)
};

// Decides whether p/q (in lowest terms, |x - p/q| < 1/(2q^2)) is an RCF
// convergent of x; under those preconditions it always is.  Throws
// PreconditionError when either precondition fails.
ConvergentMatch legendre_check(const ExactReal& x, const mpz_class& p, const mpz_class& q);

}  // namespace afy
