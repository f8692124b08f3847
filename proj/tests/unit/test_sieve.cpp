// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <cmath>

#include "gk/gaussint.hpp"
#include "gk/kloosterman.hpp"
#include "gk/sieve.hpp"

using namespace gk;

TEST_CASE("annulus and coefficient vectors") {
    auto pts = annulus_points(20);
    for (const auto& w : pts) {
        CHECK(w.norm() > 10);
        CHECK(w.norm() <= 20);
    }
    CoeffVector b(20);
    CHECK_THROWS_AS(b.set(1, 1), domain_error);
    b.set(pts[0], cplx(3, 4));
    CHECK(b.norm() == doctest::Approx(5));
    CHECK(b[GaussInt(1)] == cplx(0));
    for (auto fam : {CoeffFamily::ones, CoeffFamily::spike, CoeffFamily::random_phase, CoeffFamily::twist}) {
        auto c = make_coeffs(fam, 50, 9);
        CHECK(c.norm() > 0);
        CHECK(make_coeffs(fam, 50, 9).entries() == c.entries());
    }
}

TEST_CASE("U-sum trivial cases") {
    auto f = make_frame(Cusp::inf(), 1);
    CoeffVector zero(20);
    CHECK(u_sum(f, 0.5, GaussInt(2, 1), 3, zero) == 0);
    CoeffVector one(20);
    GaussInt w = annulus_points(20).front();
    one.set(w, 1);
    double s = std::abs(kloosterman_samecusp(f, w, w, GaussInt(2, 1) * f.v).value);
    CHECK(u_sum(f, 0.7, GaussInt(2, 1), 0, one) == doctest::Approx(s).epsilon(1e-12));
    CHECK_THROWS_AS(u_sum(make_frame(Cusp::inf(), 3), 0, 1, 0, one), domain_error);
}

TEST_CASE("U-sum agrees with a general-path reassembly") {
    const GaussInt q0(1, 1);
    for (const auto& f : class_representatives(q0)) {
        auto mods = allowed_moduli(f, f, 4);
        REQUIRE_FALSE(mods.empty());
        const GaussInt C = mods.back().C;
        auto b = make_coeffs(CoeffFamily::random_phase, 4, 2);
        for (int M : {0, 2})
            for (double psi : {0.0, 1.5}) {
                double want = 0;
                for (int m = -M; m <= M; ++m) {
                    cplx acc = 0;
                    for (const auto& [w1, b1] : b.entries())
                        for (const auto& [w2, b2] : b.entries()) {
                            cplx z = w1.to_complex() * w2.to_complex();
                            double absc = std::abs((C * f.v).to_complex());
                            double ph = psi * std::sqrt(std::abs(z)) / absc;
                            acc += std::conj(b1) * b2 * std::pow(z / std::abs(z), m) *
                                   kloosterman_general(f, f, w1, w2, C).value * std::exp(cplx(0, 2 * M_PI * ph));
                        }
                    want += std::abs(acc);
                }
                CHECK(u_sum(f, psi, C, M, b) == doctest::Approx(want).epsilon(1e-8));
            }
    }
}

TEST_CASE("U-sum at M = 0, psi = 0 is a quadratic form in a dense Kloosterman matrix") {
    auto f = make_frame(Cusp::inf(), 2);
    const GaussInt C = allowed_moduli(f, f, 6).back().C;
    auto b = make_coeffs(CoeffFamily::twist, 30, 5);
    USumEvaluator ev(f, C, 30);
    const auto& pts = ev.points();
    cplx q = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
            q += std::conj(b[pts[i]]) * b[pts[j]] * kloosterman_samecusp(f, pts[i], pts[j], ev.c()).value;
    CHECK(ev.evaluate(0, 0, b) == doctest::Approx(std::abs(q)).epsilon(1e-8));
}

TEST_CASE("E-sum against the two-point closed form") {
    const GaussInt c(1, 1), w1(2, 1), w2(1, 2);
    CoeffVector a(5);
    a.set(w1, 1);
    a.set(w2, cplx(0, 1));
    const double T = 2, alpha = 1.3, beta = 0;
    // f(x) = alpha x, so the two phases differ by alpha (|w1| - |w2|) = 0 and the cross term is constant
    double exact = 0;
    for (const auto& d : residues(c))
        for (int m = -1; m <= 1; ++m) {
            cplx A1 = std::pow(w1.to_complex() / std::abs(w1.to_complex()), m) *
                      std::exp(cplx(0, 2 * M_PI * (d.to_complex() * w1.to_complex() / c.to_complex()).real()));
            cplx A2 = cplx(0, 1) * std::pow(w2.to_complex() / std::abs(w2.to_complex()), m) *
                      std::exp(cplx(0, 2 * M_PI * (d.to_complex() * w2.to_complex() / c.to_complex()).real()));
            exact += 2 * T * std::norm(A1 + A2);
        }
    CHECK(e_sum(c, a, 1, T, alpha, beta) == doctest::Approx(exact).epsilon(1e-12));
    CoeffVector zero(5);
    CHECK(e_sum(c, zero, 1, T, alpha, beta) == 0);
    CHECK(e_sum_envelope(c, a, 1, T, alpha, beta) > 0);
    // small T: E ~ 2T sum |s(delta, m, 0)|^2
    auto big = make_coeffs(CoeffFamily::random_phase, 20, 4);
    double t = 1e-4;
    double e0 = e_sum(GaussInt(2, 1), big, 2, t, 1, 0.5);
    double e1 = e_sum(GaussInt(2, 1), big, 2, 2 * t, 1, 0.5);
    CHECK(e1 / e0 == doctest::Approx(2).epsilon(1e-4));
}

TEST_CASE("sweep report") {
    SweepReport r;
    r.add({{{"N", "25"}}, "x", 1, 2, 0.5});
    r.add({{{"N", "50"}}, "x", 1, 2, 0.6});
    r.add({{{"N", "100"}}, "x", 4, 2, 2.0});
    CHECK(r.max_ratio("x") == 2.0);
    CHECK(r.argmax("x")->params[0].second == "100");
    CHECK(r.blow_up("x"));
    CHECK_FALSE(r.blow_up("x", "N", 5));
    CHECK_THROWS(r.add({{}, "x", 1, 0, 0}));
    CHECK(r.to_csv().find("N") != std::string::npos);
}

TEST_CASE("prop2 sweep is deterministic and independent of worker count") {
    Prop2Grid g;
    g.q0s = {GaussInt(1, 1)};
    g.Ns = {25, 50};
    g.Ms = {0, 2};
    g.psis = {0, 1};
    g.moduli_per_frame = 2;
    g.threads = 1;
    auto a = prop2_sweep(g);
    g.threads = 3;
    auto b = prop2_sweep(g);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_json() == b.to_json());
    for (const auto& row : a.rows()) {
        CHECK(row.envelope > 0);
        CHECK(std::isfinite(row.ratio));
        if (row.bound == "short_modulus")
            for (const auto& [k, v] : row.params)
                if (k == "psi") CHECK(std::stod(v) != 0);
    }
}

TEST_CASE("geometric side") {
    TestParams prm{2, 2, 0.75};
    auto reps = class_representatives(GaussInt(1, 1));
    auto g = geometric_side(reps[0], reps[1], 1, 1, prm, 6);
    CHECK(g.delta_part == cplx(0));
    // swapping the cusps and negating the frequencies leaves the sum unchanged
    auto h = geometric_side(reps[1], reps[0], -1, -1, prm, 6);
    CHECK(std::abs(g.kloosterman_part - h.kloosterman_part) <= g.tail_envelope);
    CHECK(std::abs(g.kloosterman_part - h.kloosterman_part) < 1e-9);
    auto f = make_frame(Cusp::inf(), 1);
    auto a = geometric_side(f, f, 1, 1, prm, 8);
    auto b = geometric_side(f, f, 1, 1, prm, 16);
    CHECK(std::abs(a.kloosterman_part - b.kloosterman_part) < a.tail_envelope);
    CHECK(b.tail_envelope < a.tail_envelope);
}

TEST_CASE("Linnik-Selberg partial sums") {
    auto f = make_frame(Cusp::inf(), 1);
    auto a = linnik_selberg_partial(f, f, 1, 1, 1.0, 5);
    auto b = linnik_selberg_partial(f, f, 1, 1, 1.0, 10);
    CHECK(std::abs(a.Z_partial - b.Z_partial) <= a.tail);
    CHECK(a.bound >= std::abs(a.Z_partial) - 1e-9);
    // conjugate s with negated frequencies conjugates the zeta partial sum
    auto c = linnik_selberg_partial(f, f, 1, GaussInt(1, 1), cplx(1, 0.3), 4);
    auto d = linnik_selberg_partial(f, f, -1, GaussInt(-1, -1), cplx(1, -0.3), 4);
    CHECK(std::abs(c.zeta_partial - std::conj(d.zeta_partial)) < 1e-8 * std::max(1.0, std::abs(c.zeta_partial)));
}
