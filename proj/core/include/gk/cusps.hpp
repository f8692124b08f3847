// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "gk/gaussint.hpp"
#include "gk/mat2.hpp"

namespace gk {

// A point of P^1(Q(i)). Finite cusps are kept in lowest terms with canonical w.
struct Cusp {
    bool infinite = true;
    GaussInt u{1}, w{0};

    static Cusp inf() { return {}; }
    static Cusp frac(const GaussInt& u, const GaussInt& w);
    friend bool operator==(const Cusp&, const Cusp&) = default;
};

std::string to_string(const Cusp& c);
Cusp parse_cusp(std::string_view text);  // "inf" or "u/w"

struct Normalized {
    GaussInt u, w;
    Mat2 gamma;  // element of Gamma_0(q0) taking the input cusp to u/w
};

// Equivalent cusp u/w with w | q0 canonical, u != 0, (u, w) ~ 1 and (u, q0) ~ 1.
Normalized normalize_cusp(const Cusp& cusp, const GaussInt& q0);

// Class test by the congruence criterion on normalized representatives.
bool cusps_equivalent(const Cusp& c1, const Cusp& c2, const GaussInt& q0);
// Class test that searches for h[lambda] n[k] linking the two cusps directly.
bool cusps_equivalent_direct(const Cusp& c1, const Cusp& c2, const GaussInt& q0);

// Cusp u/w with the scaling matrix g = pi * tau_v, pi = [[u, -w~], [w, u~]].
struct CuspFrame {
    Cusp cusp;         // the cusp the frame was built for
    Mat2 witness;      // element of Gamma_0(q0) taking cusp to u/w
    GaussInt q0;
    GaussInt u, w;     // normalized representative
    GaussInt u_tilde, w_tilde;
    bool unit_mod_q0 = false;  // u * u~ = 1 mod q0
    GaussInt v;        // width generator m_c, canonical
    GaussInt mu_inv;   // 1 / mu, canonical
    int stab_index = 2;
    GaussInt z0{0};    // stabilizer translation, beta = -i z0 / v
    std::optional<std::complex<double>> beta;

    Mat2 pi_matrix() const { return {u, -w_tilde, w, u_tilde}; }
    std::complex<double> sqrt_v() const;
};

CuspFrame frame_from_uw(const GaussInt& u, const GaussInt& w, const GaussInt& q0);
CuspFrame make_frame(const Cusp& cusp, const GaussInt& q0);

std::vector<CuspFrame> class_representatives(const GaussInt& q0);
std::int64_t class_count_formula(const GaussInt& q0);
// Count of classes among the candidates u/w (w | q0, u mod q0) plus inf and 0,
// merged with cusps_equivalent_direct only.
std::int64_t class_count_direct(const GaussInt& q0);

struct IndexVolume {
    std::int64_t index;
    double vol;
};
IndexVolume index_and_covolume(const GaussInt& q0, std::complex<double> zeta2);

struct StabilizerData {
    int stab_index;
    std::optional<std::complex<double>> beta;
    GaussInt z0;
};
// Recomputes the stabilizer data of a frame and certifies it by matrix membership.
StabilizerData stabilizer_data(const CuspFrame& frame);

// A Kloosterman modulus c = C sqrt(v1) sqrt(v2).
struct Modulus {
    GaussInt C;
    std::complex<double> c;
    double abs2;
};
std::vector<Modulus> allowed_moduli(const CuspFrame& f1, const CuspFrame& f2, double X);
bool admissible_modulus(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& C);

}  // namespace gk
