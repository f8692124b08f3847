// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gk/gaussint.hpp"
#include "gk/numeric.hpp"

using namespace gk;

namespace {

// divisors by trial over the norm box, an oracle independent of factorize
std::set<GaussInt> brute_divisor_set(const GaussInt& n) {
    std::set<GaussInt> out;
    const std::int64_t N = n.norm();
    const auto r = static_cast<std::int64_t>(std::sqrt(double(N))) + 1;
    for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b) {
            GaussInt d{a, b};
            if (!d.is_zero() && d.norm() <= N && divides(d, n)) out.insert(canonical(d));
        }
    return out;
}

}  // namespace

TEST_CASE("norm and canonical associates") {
    CHECK(GaussInt(3, -4).norm() == 25);
    CHECK(GaussInt().norm() == 0);
    for (std::int64_t a = -5; a <= 5; ++a)
        for (std::int64_t b = -5; b <= 5; ++b) {
            GaussInt z{a, b};
            if (z.is_zero()) continue;
            GaussInt c = canonical(z);
            CHECK(c.re > 0);
            CHECK(c.im >= 0);
            int hits = 0;
            for (const auto& u : units) hits += (u * c == z);
            CHECK(hits == 1);
            CHECK(unit_part(z) * c == z);
        }
}

TEST_CASE("parse and print round trip") {
    for (const char* s : {"0", "1", "-1", "1+1i", "-1-1i", "3-2i", "0+5i", "i", "-i"}) {
        GaussInt z = parse_gaussint(s);
        CHECK(parse_gaussint(to_string(z)) == z);
    }
    CHECK(parse_gaussint("1+1i") == GaussInt(1, 1));
    CHECK(parse_gaussint("i") == I);
    CHECK_THROWS_AS(parse_gaussint("1+"), parse_error);
    CHECK_THROWS_AS(parse_gaussint("x"), parse_error);
}

TEST_CASE("gcd examples") {
    CHECK(gcd(2, GaussInt(1, 1)) == GaussInt(1, 1));
    CHECK(gcd(3, 7) == GaussInt(1));
    CHECK(gcd(GaussInt(-2, 3), 0) == canonical(GaussInt(-2, 3)));
}

TEST_CASE("xgcd is a Bezout identity and agrees with divisor intersection") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-25, 25);
    for (int k = 0; k < 200; ++k) {
        GaussInt m{d(rng), d(rng)}, n{d(rng), d(rng)};
        if (m.is_zero() || n.is_zero()) continue;
        auto x = gcd_xgcd(m, n);
        CHECK(x.s * m + x.t * n == x.g);
        CHECK(x.g == canonical(x.g));
        if (k < 40) {
            auto dm = brute_divisor_set(m), dn = brute_divisor_set(n);
            std::int64_t best = 0;
            for (const auto& v : dm)
                if (dn.count(v)) best = std::max(best, v.norm());
            CHECK(best == x.g.norm());
        }
    }
}

TEST_CASE("factorization examples") {
    auto f2 = factorize(2);
    REQUIRE(f2.factors.size() == 1);
    CHECK(f2.factors[0].prime == GaussInt(1, 1));
    CHECK(f2.factors[0].exponent == 2);
    CHECK(f2.unit == GaussInt(0, -1));
    auto f1i = factorize(GaussInt(1, 1));
    CHECK(f1i.unit == GaussInt(1));
    CHECK(f1i.factors.size() == 1);
    auto f5 = factorize(5);
    CHECK(f5.factors.size() == 2);
    CHECK(f5.product() == GaussInt(5));
}

TEST_CASE("factorization property: primes canonical, pairwise distinct, product exact") {
    for (std::int64_t a = -15; a <= 15; ++a)
        for (std::int64_t b = -15; b <= 15; ++b) {
            GaussInt z{a, b};
            if (z.is_zero()) continue;
            auto f = factorize(z);
            CHECK(f.product() == z);
            CHECK(is_unit(f.unit));
            for (std::size_t i = 0; i < f.factors.size(); ++i) {
                CHECK(canonical(f.factors[i].prime) == f.factors[i].prime);
                CHECK(brute_divisor_set(f.factors[i].prime).size() == 2);
                for (std::size_t j = i + 1; j < f.factors.size(); ++j)
                    CHECK_FALSE(associated(f.factors[i].prime, f.factors[j].prime));
            }
        }
}

TEST_CASE("residues") {
    auto r = residues(GaussInt(1, 1));
    CHECK(r.size() == 2);
    CHECK(std::count(r.begin(), r.end(), GaussInt(0)) == 1);
    CHECK(std::count(r.begin(), r.end(), GaussInt(1)) == 1);
    CHECK(residues(I).size() == 1);
    auto c2 = residues(2, true);
    CHECK(c2.size() == 2);
    for (const auto& x : c2) CHECK(coprime(x, 2));
    // complete and pairwise incongruent
    for (GaussInt c : {GaussInt(3), GaussInt(2, 1), GaussInt(4, 2), GaussInt(5, -3)}) {
        auto rs = residues(c);
        CHECK(std::int64_t(rs.size()) == c.norm());
        for (std::size_t i = 0; i < rs.size(); ++i) {
            CHECK(2 * rs[i].norm() <= c.norm());
            for (std::size_t j = i + 1; j < rs.size(); ++j) CHECK_FALSE(divides(c, rs[i] - rs[j]));
        }
    }
}

TEST_CASE("mod_inverse") {
    CHECK(mod_inverse(1, GaussInt(3, 2)) == GaussInt(1));
    // canonical residues are the nearest-point set, so the inverse of 2 mod 3 is -1 (congruent to 2)
    GaussInt inv = mod_inverse(2, 3);
    CHECK(divides(3, inv * 2 - 1));
    CHECK(divides(3, inv - 2));
    GaussInt ii = mod_inverse(I, 2);
    CHECK(divides(2, ii * I - 1));
    CHECK_THROWS_AS(mod_inverse(GaussInt(1, 1), 2), domain_error);
}

TEST_CASE("multiplicative stats") {
    auto s2 = multiplicative_stats(2);
    CHECK(s2.tau_ideal == 3);
    CHECK(s2.tau_assoc == 12);
    CHECK(s2.omega == 1);
    CHECK(s2.phi == 2);
    auto s1 = multiplicative_stats(1);
    CHECK(s1.tau_ideal == 1);
    CHECK(s1.omega == 0);
    CHECK(s1.phi == 1);
    CHECK(multiplicative_stats(3).phi == 8);
    // phi and tau against exhaustive counts
    for (GaussInt c : {GaussInt(6), GaussInt(3, 4), GaussInt(2, 2), GaussInt(7, 1)}) {
        auto st = multiplicative_stats(c);
        CHECK(st.phi == std::int64_t(residues(c, true).size()));
        CHECK(st.tau_ideal == std::int64_t(brute_divisor_set(c).size()));
        CHECK(st.tau_ideal == std::int64_t(divisors(c).size()));
    }
}

TEST_CASE("q0 part") {
    auto s = q0_part(12, GaussInt(1, 1));
    CHECK(associated(s.c_q0_prime, 4));
    CHECK(associated(s.c_q0, 3));
    auto t = q0_part(GaussInt(2, 1), 3);
    CHECK(t.c_q0_prime == GaussInt(1));
    CHECK(associated(t.c_q0, GaussInt(2, 1)));
    auto u = q0_part(pow(GaussInt(1, 1), 3), 2);
    CHECK(associated(u.c_q0_prime, pow(GaussInt(1, 1), 3)));
    CHECK(is_unit(u.c_q0));
}

TEST_CASE("Hecke zeta partial sums") {
    const double catalan = 0.915965594177219015;
    auto z = hecke_zeta_partial(std::complex<double>(2, 0), 0, 1e6);
    CHECK(z.tail_bound < 1e-4);
    CHECK(std::abs(z.value - M_PI * M_PI / 6 * catalan) <= z.tail_bound + 1e-10);
    auto a = hecke_zeta_partial(std::complex<double>(2, 0), 1, 1e4);
    auto b = hecke_zeta_partial(std::complex<double>(2, 0), 1, 4e4);
    CHECK(std::abs(a.value.imag()) < 1e-12);
    CHECK(std::abs(a.value - b.value) <= a.tail_bound + b.tail_bound);
}

TEST_CASE("residue ring keys are a bijection") {
    for (GaussInt c : {GaussInt(3), GaussInt(2, 1), GaussInt(4, 2)}) {
        ResidueRing ring(c);
        std::set<std::int64_t> keys;
        for (const auto& r : residues(c)) {
            auto k = ring.key(r);
            keys.insert(k);
            CHECK(divides(c, ring.element(k) - r));
        }
        CHECK(std::int64_t(keys.size()) == ring.size());
    }
}

TEST_CASE("factorize round trip on random large elements") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-700, 700);
    for (int k = 0; k < 300; ++k) {
        GaussInt z{d(rng), d(rng)};
        if (z.is_zero()) continue;
        CHECK(factorize(z).product() == z);
    }
}

TEST_CASE("phi is multiplicative on coprime pairs") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> d(-12, 12);
    int n = 0;
    while (n < 60) {
        GaussInt m{d(rng), d(rng)}, k{d(rng), d(rng)};
        if (m.is_zero() || k.is_zero() || !coprime(m, k)) continue;
        CHECK(euler_phi(m * k) == euler_phi(m) * euler_phi(k));
        ++n;
    }
}
