// SPDX-License-Identifier: MIT
#include "gk/mat2.hpp"

namespace gk {

Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

Mat2 operator-(const Mat2& x) { return {-x.a, -x.b, -x.c, -x.d}; }

Mat2 inverse_sl2(const Mat2& m) {
    if (m.det() != GaussInt(1)) throw domain_error("inverse_sl2: determinant is not 1");
    return {m.d, -m.b, -m.c, m.a};
}

bool in_sl2(const Mat2& m) { return m.det() == GaussInt(1); }

bool in_gamma0(const Mat2& m, const GaussInt& q0) { return in_sl2(m) && divides(q0, m.c); }

std::pair<GaussInt, GaussInt> act(const Mat2& m, const GaussInt& num, const GaussInt& den) {
    GaussInt x = m.a * num + m.b * den;
    GaussInt y = m.c * num + m.d * den;
    if (y.is_zero()) return {1, 0};
    GaussInt g = gcd(x, y);
    x = exact_div(x, g);
    y = exact_div(y, g);
    // canonical denominator
    GaussInt e = unit_inverse(unit_part(y));
    return {x * e, y * e};
}

std::string to_string(const Mat2& m) {
    return "[[" + to_string(m.a) + ", " + to_string(m.b) + "], [" + to_string(m.c) + ", " + to_string(m.d) + "]]";
}

}  // namespace gk
