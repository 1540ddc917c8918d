#include "afy/mobius.hpp"

#include <sstream>

#include "afy/errors.hpp"

namespace afy {

MobiusMatrix MobiusMatrix::inverse() const {
    mpz_class dt = det();
    if (dt != 1 && dt != -1)
        throw DomainError("matrix inverse requires determinant +-1, got " + dt.get_str());
    MobiusMatrix r;
    r.a11 = dt * a22;
    r.a12 = dt * -a12;
    r.a21 = dt * -a21;
    r.a22 = dt * a11;
    return r;
}

std::string MobiusMatrix::str() const {
    std::ostringstream os;
    os << "[[" << a11.get_str() << "," << a12.get_str() << "],["
       << a21.get_str() << "," << a22.get_str() << "]]";
    return os.str();
}

MobiusMatrix operator*(const MobiusMatrix& lhs, const MobiusMatrix& rhs) {
    MobiusMatrix r;
    r.a11 = lhs.a11 * rhs.a11 + lhs.a12 * rhs.a21;
    r.a12 = lhs.a11 * rhs.a12 + lhs.a12 * rhs.a22;
    r.a21 = lhs.a21 * rhs.a11 + lhs.a22 * rhs.a21;
    r.a22 = lhs.a21 * rhs.a12 + lhs.a22 * rhs.a22;
    return r;
}

bool operator==(const MobiusMatrix& lhs, const MobiusMatrix& rhs) {
    return lhs.a11 == rhs.a11 && lhs.a12 == rhs.a12 && lhs.a21 == rhs.a21 &&
           lhs.a22 == rhs.a22;
}

ExactReal mobius_apply(const MobiusMatrix& m, const ExactReal& x) {
    ExactReal num = ExactReal(m.a11) * x + ExactReal(m.a12);
    ExactReal den = ExactReal(m.a21) * x + ExactReal(m.a22);
    if (den.is_zero()) throw PoleError("mobius_apply: x is the pole of the map");
    return num / den;
}

ExtendedValue mobius_apply(const MobiusMatrix& m, const ExtendedValue& y) {
    if (y.is_neg_infinity()) {
        if (sgn(m.a21) == 0) return ExtendedValue::neg_infinity();
        return ExtendedValue(ExactReal(mpq_class(m.a11, m.a21)));
    }
    const ExactReal& x = y.finite();
    ExactReal den = ExactReal(m.a21) * x + ExactReal(m.a22);
    if (den.is_zero()) return ExtendedValue::neg_infinity();
    ExactReal num = ExactReal(m.a11) * x + ExactReal(m.a12);
    return ExtendedValue(num / den);
}

}  // namespace afy
