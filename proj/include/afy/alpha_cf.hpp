#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "afy/exact_real.hpp"
#include "afy/mobius.hpp"

namespace afy {

// alpha-continued-fraction data on I_alpha = [alpha-1, alpha).  Each step
// records the sign eps_n of the current orbit value and the digit
// a_n = floor(1/|value| + 1 - alpha); convergents come from the running
// product of the step matrices [[0, eps_n], [1, a_n]], whose columns are
// (p_{n-1}, q_{n-1}) and (p_n, q_n).
struct AlphaExpansion {
    ExactReal alpha;
    ExactReal x;
    std::vector<int> eps;
    std::vector<mpz_class> digits;
    std::vector<std::pair<mpz_class, mpz_class>> convergents;
    std::vector<ExactReal> orbit;  // orbit[k] = G_alpha^k(x), orbit[0] = x
    bool terminated = false;

    // Signed digit c_n = eps_n * a_n (1-based n, like the other lists).
    mpz_class c(std::size_t n) const;
    // The step matrix [[0, eps_n], [1, a_n]].
    MobiusMatrix step_matrix(std::size_t n) const;
};

// G_alpha: x -> 1/|x| - floor(1/|x| + 1 - alpha) on [alpha-1, alpha) \ {0},
// fixing 0.  DomainError outside (including at x = alpha; alpha_expand
// admits that point as a left limit).
ExactReal alpha_gauss_step(const ExactReal& alpha, const ExactReal& x);

// Expands x in [alpha-1, alpha] for up to max_n digits.  x = alpha is
// expanded as lim of alpha - eps, which the digit formula already gives.
AlphaExpansion alpha_expand(const ExactReal& alpha, const ExactReal& x, std::size_t max_n);

// The unique k0 with 1/(k0 + alpha) <= alpha < 1/(k0 - 1 + alpha), i.e.
// ceil(1/alpha - alpha); needs alpha in (0,1).
mpz_class first_digit_of_alpha(const ExactReal& alpha);

}  // namespace afy
