// SPDX-License-Identifier: MIT
#pragma once

#include <string>

#include "gk/gaussint.hpp"

namespace gk {

// 2x2 matrix over Z[i], [[a, b], [c, d]].
struct Mat2 {
    GaussInt a{1}, b{0}, c{0}, d{1};

    GaussInt det() const { return a * d - b * c; }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

Mat2 operator*(const Mat2& x, const Mat2& y);
Mat2 operator-(const Mat2& x);

// Inverse of a determinant-one matrix.
Mat2 inverse_sl2(const Mat2& m);

inline Mat2 n_mat(const GaussInt& z) { return {1, z, 0, 1}; }
// h[u] for a unit u.
inline Mat2 h_unit(const GaussInt& u) { return {u, 0, 0, u.conj()}; }

bool in_sl2(const Mat2& m);
bool in_gamma0(const Mat2& m, const GaussInt& q0);

// Action on P^1(Q(i)); returns the image of num/den as a reduced (num, den) pair.
std::pair<GaussInt, GaussInt> act(const Mat2& m, const GaussInt& num, const GaussInt& den);

std::string to_string(const Mat2& m);

}  // namespace gk
