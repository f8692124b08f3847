// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gk {

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised when an identity the paper guarantees fails at runtime.
struct consistency_error : std::logic_error {
    using std::logic_error::logic_error;
};

// Inconsistent run configuration, e.g. a truncation outside its admissible window.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct parse_error : std::invalid_argument {
    std::size_t position;
    parse_error(const std::string& what, std::size_t pos)
        : std::invalid_argument(what + " at position " + std::to_string(pos)), position(pos) {}
};

// Element re + im*i of Z[i]. Components are 64-bit with checked multiplication;
// desk-scale norms stay far below 2^62.
struct GaussInt {
    std::int64_t re = 0;
    std::int64_t im = 0;

    constexpr GaussInt() = default;
    constexpr GaussInt(std::int64_t r) : re(r) {}
    constexpr GaussInt(std::int64_t r, std::int64_t i) : re(r), im(i) {}

    constexpr bool is_zero() const { return re == 0 && im == 0; }
    std::int64_t norm() const;
    constexpr GaussInt conj() const { return {re, -im}; }
    std::complex<double> to_complex() const { return {double(re), double(im)}; }

    friend constexpr bool operator==(const GaussInt&, const GaussInt&) = default;
    friend constexpr GaussInt operator-(const GaussInt& a) { return {-a.re, -a.im}; }
    friend GaussInt operator+(const GaussInt& a, const GaussInt& b);
    friend GaussInt operator-(const GaussInt& a, const GaussInt& b);
    friend GaussInt operator*(const GaussInt& a, const GaussInt& b);
    GaussInt& operator+=(const GaussInt& b) { return *this = *this + b; }
    GaussInt& operator-=(const GaussInt& b) { return *this = *this - b; }
    GaussInt& operator*=(const GaussInt& b) { return *this = *this * b; }
};

inline constexpr GaussInt I{0, 1};
inline constexpr GaussInt units[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

bool operator<(const GaussInt& a, const GaussInt& b);  // total order: norm, then angle

std::string to_string(const GaussInt& z);
GaussInt parse_gaussint(std::string_view text);

// Nearest-lattice-point division: a = q*b + r with |r|^2 <= |b|^2/2.
std::pair<GaussInt, GaussInt> divmod(const GaussInt& a, const GaussInt& b);
GaussInt mod(const GaussInt& a, const GaussInt& b);
bool divides(const GaussInt& d, const GaussInt& n);
GaussInt exact_div(const GaussInt& n, const GaussInt& d);  // throws unless d | n
bool is_unit(const GaussInt& z);
bool associated(const GaussInt& a, const GaussInt& b);

// Canonical associate: re > 0, im >= 0 (zero maps to zero).
GaussInt canonical(const GaussInt& z);
// The unit e with z = e * canonical(z).
GaussInt unit_part(const GaussInt& z);
GaussInt unit_inverse(const GaussInt& u);

struct Xgcd {
    GaussInt g, s, t;
};
Xgcd gcd_xgcd(const GaussInt& m, const GaussInt& n);
GaussInt gcd(const GaussInt& m, const GaussInt& n);
GaussInt lcm(const GaussInt& m, const GaussInt& n);
inline bool coprime(const GaussInt& m, const GaussInt& n) { return is_unit(gcd(m, n)); }

GaussInt pow(GaussInt base, unsigned e);

struct PrimePower {
    GaussInt prime;
    int exponent;
};
struct Factorization {
    GaussInt unit{1};
    std::vector<PrimePower> factors;
    GaussInt product() const;
};
Factorization factorize(const GaussInt& n);

// Canonical divisors, one per divisor ideal, sorted.
std::vector<GaussInt> divisors(const GaussInt& n);

std::vector<GaussInt> residues(const GaussInt& c, bool coprime_only = false);
GaussInt mod_inverse(const GaussInt& m, const GaussInt& c);

struct MultiplicativeStats {
    std::int64_t tau_ideal;
    std::int64_t tau_assoc;
    int omega;
    std::int64_t phi;
};
MultiplicativeStats multiplicative_stats(const GaussInt& n);
std::int64_t euler_phi(const GaussInt& n);

struct Q0Split {
    GaussInt c_q0_prime;  // (C, q0^infinity), canonical
    GaussInt c_q0;        // C / c_q0_prime
};
Q0Split q0_part(const GaussInt& C, const GaussInt& q0);

struct ZetaPartial {
    std::complex<double> value;
    double tail_bound;
};
ZetaPartial hecke_zeta_partial(std::complex<double> s, int k, double X);

// Z[i]/cZ[i] in Hermite form: every residue is x + y*i with 0 <= x < n/g, 0 <= y < g,
// where n = |c|^2 and g = gcd(Re c, Im c). Used for hashing and dense tables.
class ResidueRing {
public:
    explicit ResidueRing(const GaussInt& c);
    const GaussInt& modulus() const { return c_; }
    std::int64_t size() const { return n_; }
    std::int64_t key(const GaussInt& z) const;
    GaussInt element(std::int64_t key) const;
    GaussInt reduce(const GaussInt& z) const { return element(key(z)); }

private:
    GaussInt c_;
    std::int64_t n_ = 1, g_ = 1, width_ = 1;
    GaussInt e1_;  // element of cZ[i] with imaginary part g
};

// Re(z / c) as an exact fraction num/den with 0 <= num < den, den = |c|^2.
struct PhaseFrac {
    std::int64_t num;
    std::int64_t den;
};
PhaseFrac re_over(const GaussInt& z, const GaussInt& c);

}  // namespace gk

template <>
struct std::hash<gk::GaussInt> {
    std::size_t operator()(const gk::GaussInt& z) const noexcept {
        return std::hash<std::int64_t>{}(z.re * 0x9E3779B97F4A7C15ll ^ (z.im + 0x632BE59BD9B4E019ll));
    }
};
