#pragma once

#include <gmpxx.h>

#include <string>

#include "afy/exact_real.hpp"

namespace afy {

// Integer 2x2 matrix acting on the real line by x -> (a11*x + a12)/(a21*x + a22).
// Defaults to the identity.
struct MobiusMatrix {
    mpz_class a11 = 1;
    mpz_class a12 = 0;
    mpz_class a21 = 0;
    mpz_class a22 = 1;

    static MobiusMatrix identity() { return MobiusMatrix{}; }

    mpz_class det() const { return a11 * a22 - a12 * a21; }

    // Only defined for det = +-1: the adjugate scaled by the determinant.
    MobiusMatrix inverse() const;

    bool is_identity() const {
        return a11 == 1 && a12 == 0 && a21 == 0 && a22 == 1;
    }

    std::string str() const;
};

MobiusMatrix operator*(const MobiusMatrix& lhs, const MobiusMatrix& rhs);
bool operator==(const MobiusMatrix& lhs, const MobiusMatrix& rhs);
inline bool operator!=(const MobiusMatrix& lhs, const MobiusMatrix& rhs) {
    return !(lhs == rhs);
}

// (a11*x + a12)/(a21*x + a22); throws PoleError when x is the pole.
ExactReal mobius_apply(const MobiusMatrix& m, const ExactReal& x);

// Extended action: -inf maps to a11/a21 (or stays -inf when a21 = 0).
// Note the extended line identifies -inf with +inf, so this is also the
// image of +inf; callers track orientation themselves where it matters.
ExtendedValue mobius_apply(const MobiusMatrix& m, const ExtendedValue& y);

}  // namespace afy
