// SPDX-License-Identifier: MIT
#include "gk/gaussint.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

#include "gk/numeric.hpp"

namespace gk {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw domain_error("Gaussian integer overflow");
    return static_cast<std::int64_t>(v);
}

i128 floor_div(i128 a, i128 b) {
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

// Index k with z = i^k * canonical(z).
int quadrant(const GaussInt& z) {
    if (z.re > 0 && z.im >= 0) return 0;
    if (z.re <= 0 && z.im > 0) return 1;
    if (z.re < 0 && z.im <= 0) return 2;
    return 3;
}

std::int64_t isqrt(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
    i128 r = 1, x = b % m;
    while (e > 0) {
        if (e & 1) r = r * x % m;
        x = x * x % m;
        e >>= 1;
    }
    return static_cast<std::int64_t>(r);
}

// The canonical Gaussian prime of norm p, for a rational prime p = 1 mod 4.
GaussInt split_prime(std::int64_t p) {
    std::int64_t c = 2;
    while (powmod(c, (p - 1) / 2, p) != p - 1) ++c;
    std::int64_t x = powmod(c, (p - 1) / 4, p);
    return canonical(gcd(GaussInt(p), GaussInt(x, 1)));
}

}  // namespace

std::int64_t GaussInt::norm() const { return narrow(i128(re) * re + i128(im) * im); }

GaussInt operator+(const GaussInt& a, const GaussInt& b) {
    return {narrow(i128(a.re) + b.re), narrow(i128(a.im) + b.im)};
}
GaussInt operator-(const GaussInt& a, const GaussInt& b) {
    return {narrow(i128(a.re) - b.re), narrow(i128(a.im) - b.im)};
}
GaussInt operator*(const GaussInt& a, const GaussInt& b) {
    return {narrow(i128(a.re) * b.re - i128(a.im) * b.im), narrow(i128(a.re) * b.im + i128(a.im) * b.re)};
}

bool operator<(const GaussInt& a, const GaussInt& b) {
    auto na = a.norm(), nb = b.norm();
    if (na != nb) return na < nb;
    int qa = quadrant(a), qb = quadrant(b);
    if (qa != qb) return qa < qb;
    GaussInt ca = canonical(a), cb = canonical(b);
    // same norm, same quadrant: smaller argument first
    return i128(ca.re) * cb.im - i128(ca.im) * cb.re > 0;
}

std::string to_string(const GaussInt& z) {
    if (z.im == 0) return std::to_string(z.re);
    std::string s;
    if (z.re != 0) s = std::to_string(z.re) + (z.im > 0 ? "+" : "");
    return s + std::to_string(z.im) + "i";
}

GaussInt parse_gaussint(std::string_view text) {
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    skip();
    if (pos == text.size()) throw parse_error("empty Gaussian integer literal", pos);
    GaussInt out;
    bool seen_re = false, seen_im = false, first = true;
    while (pos < text.size()) {
        int sign = 1;
        if (text[pos] == '+' || text[pos] == '-') {
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
            skip();
        } else if (!first) {
            throw parse_error("expected '+' or '-'", pos);
        }
        std::size_t start = pos;
        i128 mag = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            mag = mag * 10 + (text[pos] - '0');
            if (mag > std::numeric_limits<std::int64_t>::max()) throw parse_error("literal too large", start);
            ++pos;
        }
        bool has_digits = pos > start;
        skip();
        bool imag = pos < text.size() && (text[pos] == 'i' || text[pos] == 'I');
        if (imag) {
            ++pos;
            if (!has_digits) mag = 1;
            if (seen_im) throw parse_error("duplicate imaginary part", start);
            seen_im = true;
            out.im = sign * static_cast<std::int64_t>(mag);
        } else {
            if (!has_digits) throw parse_error("expected digits or 'i'", pos);
            if (seen_re) throw parse_error("duplicate real part", start);
            seen_re = true;
            out.re = sign * static_cast<std::int64_t>(mag);
        }
        skip();
        first = false;
    }
    return out;
}

std::pair<GaussInt, GaussInt> divmod(const GaussInt& a, const GaussInt& b) {
    if (b.is_zero()) throw domain_error("division by zero");
    i128 n = b.norm();
    i128 x = i128(a.re) * b.re + i128(a.im) * b.im;
    i128 y = i128(a.im) * b.re - i128(a.re) * b.im;
    // nearest integers to x/n, y/n; on exact halves keep both candidates
    auto nearest = [n](i128 v, i128 out[2]) {
        i128 f = floor_div(2 * v + n, 2 * n);
        out[0] = f;
        bool tie = (2 * v + n) % (2 * n) == 0;
        out[1] = tie ? f - 1 : f;
        return tie;
    };
    i128 qx[2], qy[2];
    nearest(x, qx);
    nearest(y, qy);
    GaussInt best_q, best_r;
    bool have = false;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            GaussInt q(narrow(qx[i]), narrow(qy[j]));
            GaussInt r = a - q * b;
            if (!have || r < best_r) {
                best_q = q;
                best_r = r;
                have = true;
            }
        }
    return {best_q, best_r};
}

GaussInt mod(const GaussInt& a, const GaussInt& b) { return divmod(a, b).second; }

bool divides(const GaussInt& d, const GaussInt& n) {
    if (d.is_zero()) return n.is_zero();
    i128 nd = d.norm();
    i128 x = i128(n.re) * d.re + i128(n.im) * d.im;
    i128 y = i128(n.im) * d.re - i128(n.re) * d.im;
    return x % nd == 0 && y % nd == 0;
}

GaussInt exact_div(const GaussInt& n, const GaussInt& d) {
    if (d.is_zero()) throw domain_error("division by zero");
    i128 nd = d.norm();
    i128 x = i128(n.re) * d.re + i128(n.im) * d.im;
    i128 y = i128(n.im) * d.re - i128(n.re) * d.im;
    if (x % nd != 0 || y % nd != 0)
        throw domain_error(to_string(d) + " does not divide " + to_string(n));
    return {narrow(x / nd), narrow(y / nd)};
}

bool is_unit(const GaussInt& z) { return z.norm() == 1; }

bool associated(const GaussInt& a, const GaussInt& b) { return canonical(a) == canonical(b); }

GaussInt canonical(const GaussInt& z) {
    switch (quadrant(z)) {
        case 0: return z;
        case 1: return {z.im, -z.re};   // z * (-i)
        case 2: return {-z.re, -z.im};  // z * (-1)
        default: return {-z.im, z.re};  // z * i
    }
}

GaussInt unit_part(const GaussInt& z) {
    if (z.is_zero()) return {1, 0};
    return units[quadrant(z)];
}

GaussInt unit_inverse(const GaussInt& u) {
    if (!is_unit(u)) throw domain_error(to_string(u) + " is not a unit");
    return u.conj();
}

Xgcd gcd_xgcd(const GaussInt& m, const GaussInt& n) {
    if (m.is_zero() && n.is_zero()) throw domain_error("gcd(0, 0) is undefined");
    GaussInt r0 = m, r1 = n, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = r1;
        r1 = r;
        GaussInt s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    GaussInt e = unit_inverse(unit_part(r0));
    return {r0 * e, s0 * e, t0 * e};
}

GaussInt gcd(const GaussInt& m, const GaussInt& n) {
    if (m.is_zero() && n.is_zero()) throw domain_error("gcd(0, 0) is undefined");
    GaussInt a = m, b = n;
    while (!b.is_zero()) {
        GaussInt r = divmod(a, b).second;
        a = b;
        b = r;
    }
    return canonical(a);
}

GaussInt lcm(const GaussInt& m, const GaussInt& n) {
    if (m.is_zero() || n.is_zero()) return {0, 0};
    return canonical(exact_div(m, gcd(m, n)) * n);
}

GaussInt pow(GaussInt base, unsigned e) {
    GaussInt r(1);
    while (e) {
        if (e & 1) r *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return r;
}

GaussInt Factorization::product() const {
    GaussInt r = unit;
    for (const auto& f : factors) r *= pow(f.prime, static_cast<unsigned>(f.exponent));
    return r;
}

Factorization factorize(const GaussInt& n) {
    if (n.is_zero()) throw domain_error("cannot factorize 0");
    Factorization out;
    GaussInt rest = n;
    auto strip = [&](const GaussInt& p) {
        int e = 0;
        while (divides(p, rest)) {
            rest = exact_div(rest, p);
            ++e;
        }
        if (e > 0) out.factors.push_back({p, e});
    };
    for (std::int64_t p = 2; p * p <= rest.norm(); p += (p == 2 ? 1 : 2)) {
        if (rest.norm() % p != 0) continue;
        if (p == 2) {
            strip({1, 1});
        } else if (p % 4 == 3) {
            strip({p, 0});
        } else {
            GaussInt pi = split_prime(p);
            strip(pi);
            strip(canonical(pi.conj()));
        }
    }
    if (rest.norm() > 1) {
        out.factors.push_back({canonical(rest), 1});
        rest = unit_part(rest);
    }
    out.unit = rest;
    std::sort(out.factors.begin(), out.factors.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
    return out;
}

std::vector<GaussInt> divisors(const GaussInt& n) {
    auto f = factorize(n);
    std::vector<GaussInt> out{GaussInt(1)};
    for (const auto& pp : f.factors) {
        std::size_t base = out.size();
        GaussInt power(1);
        for (int e = 1; e <= pp.exponent; ++e) {
            power *= pp.prime;
            for (std::size_t k = 0; k < base; ++k) out.push_back(canonical(out[k] * power));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<GaussInt> residues(const GaussInt& c, bool coprime_only) {
    if (c.is_zero()) throw domain_error("residues modulo 0");
    ResidueRing ring(c);
    std::vector<GaussInt> out;
    out.reserve(static_cast<std::size_t>(ring.size()));
    for (std::int64_t k = 0; k < ring.size(); ++k) {
        GaussInt r = mod(ring.element(k), c);
        if (coprime_only && !is_unit(gcd(r, c))) continue;
        out.push_back(r);
    }
    std::sort(out.begin(), out.end());
    return out;
}

GaussInt mod_inverse(const GaussInt& m, const GaussInt& c) {
    if (c.is_zero()) throw domain_error("inverse modulo 0");
    if (m.is_zero() && !is_unit(c)) throw domain_error("0 has no inverse modulo " + to_string(c));
    auto x = gcd_xgcd(m, c);
    if (!is_unit(x.g))
        throw domain_error(to_string(m) + " is not invertible modulo " + to_string(c) + ": common factor " +
                           to_string(x.g));
    return mod(x.s, c);
}

MultiplicativeStats multiplicative_stats(const GaussInt& n) {
    auto f = factorize(n);
    MultiplicativeStats s{1, 0, static_cast<int>(f.factors.size()), 1};
    for (const auto& pp : f.factors) {
        s.tau_ideal *= pp.exponent + 1;
        std::int64_t np = pp.prime.norm();
        s.phi *= np - 1;
        for (int e = 1; e < pp.exponent; ++e) s.phi *= np;
    }
    s.tau_assoc = 4 * s.tau_ideal;
    return s;
}

std::int64_t euler_phi(const GaussInt& n) { return multiplicative_stats(n).phi; }

Q0Split q0_part(const GaussInt& C, const GaussInt& q0) {
    if (C.is_zero() || q0.is_zero()) throw domain_error("q0_part needs nonzero arguments");
    GaussInt part(1);
    for (const auto& pp : factorize(C).factors)
        if (divides(pp.prime, q0)) part *= pow(pp.prime, static_cast<unsigned>(pp.exponent));
    part = canonical(part);
    return {part, exact_div(C, part)};
}

ZetaPartial hecke_zeta_partial(std::complex<double> s, int k, double X) {
    if (s.real() <= 1.0) throw domain_error("hecke_zeta_partial needs Re(s) > 1");
    if (X < 2.0) throw domain_error("hecke_zeta_partial needs X >= 2");
    auto Xi = static_cast<std::int64_t>(std::floor(X));
    std::int64_t amax = isqrt(Xi);
    CompensatedSum acc;
    // One representative per associate class; the character is trivial on units,
    // so the factor 4 from the units cancels the leading 1/4.
    for (std::int64_t a = 1; a <= amax; ++a) {
        std::int64_t bmax = isqrt(Xi - a * a);
        for (std::int64_t b = 0; b <= bmax; ++b) {
            double n = double(a * a + b * b);
            std::complex<double> term = std::exp(-s * std::log(n));
            if (k != 0) term *= std::polar(1.0, 4.0 * k * std::atan2(double(b), double(a)));
            acc.add(term);
        }
    }
    // Lattice points: pi(sqrt(t) - h)^2 <= #{0 < |a|^2 <= t} + 1 <= pi(sqrt(t) + h)^2, h = 1/sqrt(2).
    double sig = s.real(), h = std::sqrt(0.5), pi = std::acos(-1.0);
    double upper = sig * pi *
                   (std::pow(X, 1 - sig) / (sig - 1) + 2 * h * std::pow(X, 0.5 - sig) / (sig - 0.5) +
                    h * h * std::pow(X, -sig) / sig);
    double lower = pi * std::pow(std::max(0.0, std::sqrt(X) - h), 2) * std::pow(X, -sig) - std::pow(X, -sig);
    return {acc.value(), 0.25 * std::max(upper - lower, 0.0) + acc.error()};
}

ResidueRing::ResidueRing(const GaussInt& c) : c_(c) {
    if (c.is_zero()) throw domain_error("residue ring modulo 0");
    n_ = c.norm();
    g_ = std::gcd(std::abs(c.re), std::abs(c.im));
    width_ = n_ / g_;
    // s*Re(c) + t*Im(c) = g; then c*(t + s*i) has imaginary part g
    std::int64_t a = c.re, b = c.im;
    std::int64_t s0 = 1, s1 = 0, t0 = 0, t1 = 1, r0 = a, r1 = b;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = s0 - q * s1;
        s0 = s1;
        s1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (r0 < 0) {
        s0 = -s0;
        t0 = -t0;
    }
    // Im(c*(x+yi)) = a*y + b*x; we have a*s0 + b*t0 = g
    e1_ = c * GaussInt(t0, s0);
}

std::int64_t ResidueRing::key(const GaussInt& z) const {
    i128 k = floor_div(z.im, g_);
    i128 x = i128(z.re) - k * e1_.re;
    i128 y = i128(z.im) - k * e1_.im;
    i128 xr = x % width_;
    if (xr < 0) xr += width_;
    return static_cast<std::int64_t>(y * width_ + xr);
}

GaussInt ResidueRing::element(std::int64_t key) const { return {key % width_, key / width_}; }

PhaseFrac re_over(const GaussInt& z, const GaussInt& c) {
    i128 n = c.norm();
    i128 x = (i128(z.re) * c.re + i128(z.im) * c.im) % n;
    if (x < 0) x += n;
    return {static_cast<std::int64_t>(x), static_cast<std::int64_t>(n)};
}

}  // namespace gk
