#pragma once

#include <gmpxx.h>

#include <vector>

#include "afy/exact_real.hpp"
#include "afy/mobius.hpp"

namespace afy {

// Symbol attached to one step of the slow map: which branch the current
// point sits in, together with the inverse branch matrix, so that the
// running product applied to the tail reproduces the starting point.
enum class FareyTag { Minus, Plus, R, Id };

struct FareySymbol {
    FareyTag tag = FareyTag::Id;
    MobiusMatrix matrix;
};

FareySymbol farey_symbol(FareyTag tag);

// Classic slow map on [0,1]: x/(1-x) below 1/2, (1-x)/x from 1/2 up.
ExactReal farey_step(const ExactReal& x);

// F_alpha on [alpha-1, 1/alpha]: -x/(1+x) on [alpha-1,0); x/(1-x) on
// [0, 1/(1+alpha)]; (1-x)/x above.  alpha in (0,1]; at alpha = 1 the
// negative branch is empty.
ExactReal alpha_farey_step(const ExactReal& alpha, const ExactReal& x);

// Branch symbol of x: Minus on [alpha-1,0), Id at 0, Plus on
// (0, 1/(1+alpha)], R on (1/(1+alpha), 1/alpha].
FareySymbol symbol_of(const ExactReal& alpha, const ExactReal& x);

// Product of the first k symbol matrices along the F_alpha orbit of x.
MobiusMatrix pi_product(const ExactReal& alpha, const ExactReal& x, std::size_t k);

// Least k >= 0 with F_alpha^k(x) in (1/(1+alpha), 1/alpha], except that
// j(0) = 0 and, for (sqrt(5)-1)/2 < alpha < 1, j = 0 on all of
// [1/(1+alpha), alpha).  x must lie in [alpha-1, alpha).
std::size_t j_index(const ExactReal& alpha, const ExactReal& x);

// F_alpha^{j(x)+1}(x); agrees with alpha_gauss_step pointwise (away from
// the single corner x = 1/(1+alpha) when that point lies in I_alpha).
ExactReal induced_FJ(const ExactReal& alpha, const ExactReal& x);

// One step of the flattened slow map on [alpha-1, 1], which jumps over
// orbit positions above 1; steps reports how many F_alpha steps the
// branch consumed (1 or 2).
struct FlatStep {
    ExactReal value;
    int steps = 1;
};

FlatStep flat_step(const ExactReal& alpha, const ExactReal& x);

// Jump transformation on [alpha-1, 1/alpha]: -x/(1+2x) on [alpha-1,0)
// (PoleError at x = -1/2); x/(1-x) on [0, 1/(1+alpha)); (1-x)/x above.
ExactReal sharp_step(const ExactReal& alpha, const ExactReal& x);

enum class EntryKind { Principal, Mediant, Terminal };

// One convergent-stream entry: the value of the running symbol-matrix
// product at -infinity after k steps, in lowest terms.  Principal
// entries sit at k = S_n (giving p_{n-1}/q_{n-1}); mediant entries at
// k = S_{n-1} + ell, 1 <= ell < a_n, are the (n, ell) mediants.  Once a
// rational orbit has reached 0 the remaining entries repeat x itself.
struct StreamEntry {
    std::size_t k = 0;
    mpz_class p, q;
    EntryKind kind = EntryKind::Principal;
    std::size_t n = 0;
    std::size_t ell = 0;
};

struct MediantStream {
    ExactReal alpha;
    ExactReal x;
    std::vector<StreamEntry> entries;
};

// First `count` entries of the full stream along the F_alpha orbit of
// x in I_alpha.
MediantStream mediant_sequence(const ExactReal& alpha, const ExactReal& x, std::size_t count);

// First `count` entries produced by the flattened map; each entry's k
// is its index in the full stream, so skipped indices are visible.
MediantStream flat_mediant_sequence(const ExactReal& alpha, const ExactReal& x,
                                    std::size_t count);

}  // namespace afy
