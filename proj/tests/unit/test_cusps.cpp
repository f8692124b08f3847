// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "gk/cusps.hpp"
#include "gk/gaussint.hpp"
#include "gk/numeric.hpp"

using namespace gk;

namespace {

std::vector<GaussInt> canonical_levels(std::int64_t max_norm) {
    std::vector<GaussInt> out;
    for (std::int64_t a = 1; a * a <= max_norm; ++a)
        for (std::int64_t b = 0; a * a + b * b <= max_norm; ++b) out.push_back({a, b});
    return out;
}

bool is_level_matrix(const Mat2& g, const GaussInt& q0) { return divides(q0, g.c) && g.det() == GaussInt(1); }

}  // namespace

TEST_CASE("class counts") {
    CHECK(class_representatives(1).size() == 1);
    CHECK(class_representatives(GaussInt(1, 1)).size() == 2);
    CHECK(class_count_formula(3) == 2);
    CHECK(class_count_direct(3) == 2);
    for (const auto& q : canonical_levels(30)) CHECK(class_count_formula(q) == class_count_direct(q));
}

TEST_CASE("equivalence") {
    CHECK(cusps_equivalent(Cusp::inf(), Cusp::frac(1, GaussInt(1, 1)), GaussInt(1, 1)));
    CHECK(cusps_equivalent(Cusp::inf(), Cusp::frac(1, 3), 3));
    CHECK(cusps_equivalent(Cusp::frac(2, 5), Cusp::frac(2, 5), 5));
    CHECK(cusps_equivalent(Cusp::frac(GaussInt(1, 2), 7), Cusp::frac(0, 1), 1));
    // class test agrees with the direct search
    const GaussInt q0(2);
    std::vector<Cusp> cs{Cusp::inf(), Cusp::frac(0, 1), Cusp::frac(1, GaussInt(1, 1)), Cusp::frac(1, 2),
                         Cusp::frac(I, 2), Cusp::frac(3, GaussInt(1, 1))};
    for (const auto& a : cs)
        for (const auto& b : cs) CHECK(cusps_equivalent(a, b, q0) == cusps_equivalent_direct(a, b, q0));
}

TEST_CASE("normalize_cusp returns a witness in Gamma_0(q0)") {
    const GaussInt q0(1, 1);
    auto n = normalize_cusp(Cusp::inf(), q0);
    CHECK(associated(n.u, 1));
    CHECK(associated(n.w, q0));
    CHECK(is_level_matrix(n.gamma, q0));
    auto z = normalize_cusp(Cusp::frac(0, 1), q0);
    CHECK(associated(z.w, 1));
    CHECK(coprime(z.u, q0));
    for (GaussInt q : {GaussInt(2), GaussInt(3), GaussInt(2, 1), GaussInt(2, 2)})
        for (const auto& f : class_representatives(q)) {
            auto m = normalize_cusp(f.cusp, q);
            CHECK(divides(m.w, q));
            CHECK(coprime(m.u, m.w));
            CHECK(is_level_matrix(m.gamma, q));
        }
}

TEST_CASE("frame invariants") {
    for (const auto& q : canonical_levels(20))
        for (const auto& f : class_representatives(q)) {
            Mat2 pi = f.pi_matrix();
            CHECK(pi.det() == GaussInt(1));
            CHECK(pi.a == f.u);
            CHECK(pi.c == f.w);
            CHECK(divides(q, f.u * f.u_tilde - 1) == f.unit_mod_q0);
            // width generator: v ~ q0 / (w^2, q0)
            CHECK(associated(f.v, exact_div(q, gcd(f.w * f.w, q))));
            auto sd = stabilizer_data(f);
            CHECK(sd.stab_index == f.stab_index);
            CHECK((f.stab_index == 2 || f.stab_index == 4));
            CHECK(sd.beta.has_value() == (f.stab_index == 4));
        }
}

TEST_CASE("stabilizer index examples") {
    CHECK(make_frame(Cusp::inf(), 1).stab_index == 4);
    // inf ~ 1/q0 and (q0, 1) | 2, so the rotation h[i] n[beta] lies in the stabilizer for every level
    CHECK(make_frame(Cusp::inf(), 3).stab_index == 4);
    // 1/3 at level 9: (3, 3) does not divide 2
    CHECK(make_frame(Cusp::frac(1, 3), 9).stab_index == 2);
    CHECK(make_frame(Cusp::inf(), GaussInt(1, 1)).stab_index == 4);
}

TEST_CASE("index and covolume") {
    const auto zeta2 = hecke_zeta_partial(cplx(2, 0), 0, 1e5).value;
    auto v1 = index_and_covolume(1, zeta2);
    CHECK(v1.index == 1);
    CHECK(v1.vol == doctest::Approx(0.915965594177219 / 3).epsilon(1e-5));
    CHECK(index_and_covolume(GaussInt(1, 1), zeta2).index == 3);
    CHECK(index_and_covolume(2, zeta2).index == 6);
}

TEST_CASE("allowed moduli") {
    auto f = make_frame(Cusp::inf(), 1);
    auto mods = allowed_moduli(f, f, 5);
    std::size_t expect = 0;
    for (std::int64_t a = -5; a <= 5; ++a)
        for (std::int64_t b = -5; b <= 5; ++b) expect += (a || b) && a * a + b * b <= 25;
    // for SL(2, O) every nonzero C is a modulus
    CHECK(mods.size() == expect);
    for (GaussInt q : {GaussInt(2), GaussInt(1, 1), GaussInt(3)})
        for (const auto& f1 : class_representatives(q))
            for (const auto& f2 : class_representatives(q))
                for (const auto& m : allowed_moduli(f1, f2, 6)) {
                    CHECK_FALSE(m.C.is_zero());
                    CHECK(m.abs2 <= 36 + 1e-9);
                    CHECK(admissible_modulus(f1, f2, m.C));
                }
}

TEST_CASE("parse_cusp") {
    CHECK(parse_cusp("inf").infinite);
    auto c = parse_cusp("1/1+1i");
    CHECK_FALSE(c.infinite);
    CHECK(c.w == GaussInt(1, 1));
    CHECK(parse_cusp(to_string(c)) == c);
    CHECK(parse_cusp("1/0").infinite);
    CHECK_THROWS(parse_cusp("1/"));
}
