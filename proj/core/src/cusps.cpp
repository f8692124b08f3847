// SPDX-License-Identifier: MIT
#include "gk/cusps.hpp"

#include <algorithm>
#include <cmath>

#include "gk/numeric.hpp"

namespace gk {

namespace {

// Gaussian integers ordered by norm then angle, up to the given norm.
std::vector<GaussInt> small_elements(std::int64_t max_norm) {
    std::vector<GaussInt> out;
    auto r = static_cast<std::int64_t>(std::sqrt(double(max_norm))) + 1;
    for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b)
            if (a * a + b * b <= max_norm) out.emplace_back(a, b);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_normalized(const Cusp& c, const GaussInt& q0) {
    return !c.infinite && !c.u.is_zero() && divides(c.w, q0) && canonical(c.w) == c.w && coprime(c.u, c.w) &&
           coprime(c.u, q0);
}

// First k (in norm order) with (base + k * step, q0) ~ 1, searching residues of q0.
GaussInt shift_coprime(const GaussInt& base, const GaussInt& step, const GaussInt& q0) {
    if (coprime(base, q0)) return {0};
    for (const auto& k : small_elements(std::max<std::int64_t>(4 * q0.norm(), 8)))
        if (coprime(base + k * step, q0)) return k;
    throw consistency_error("no coprime shift found for " + to_string(base) + " + k*" + to_string(step));
}

// Lower-left entry of pi_a * [[A, B], [C, D]] * pi_b^-1.
GaussInt lower_left(const CuspFrame& fa, const CuspFrame& fb, const GaussInt& A, const GaussInt& B,
                    const GaussInt& C, const GaussInt& D) {
    return fa.w * (A * fb.u_tilde - B * fb.w) + fa.u_tilde * (C * fb.u_tilde - D * fb.w);
}

}  // namespace

Cusp Cusp::frac(const GaussInt& u, const GaussInt& w) {
    if (w.is_zero()) {
        if (u.is_zero()) throw domain_error("0/0 is not a cusp");
        return inf();
    }
    GaussInt g = gcd(u, w);
    GaussInt uu = exact_div(u, g), ww = exact_div(w, g);
    GaussInt e = unit_inverse(unit_part(ww));
    Cusp c;
    c.infinite = false;
    c.u = uu * e;
    c.w = ww * e;
    return c;
}

std::string to_string(const Cusp& c) {
    if (c.infinite) return "inf";
    return to_string(c.u) + "/" + to_string(c.w);
}

Cusp parse_cusp(std::string_view text) {
    std::size_t b = text.find_first_not_of(" \t");
    std::size_t e = text.find_last_not_of(" \t");
    if (b == std::string_view::npos) throw parse_error("empty cusp", 0);
    std::string_view t = text.substr(b, e - b + 1);
    if (t == "inf" || t == "oo" || t == "infinity") return Cusp::inf();
    std::size_t slash = t.find('/');
    if (slash == std::string_view::npos) return Cusp::frac(parse_gaussint(t), 1);
    GaussInt u, w;
    try {
        u = parse_gaussint(t.substr(0, slash));
    } catch (const parse_error& err) {
        throw parse_error("bad cusp numerator", b + err.position);
    }
    try {
        w = parse_gaussint(t.substr(slash + 1));
    } catch (const parse_error& err) {
        throw parse_error("bad cusp denominator", b + slash + 1 + err.position);
    }
    return Cusp::frac(u, w);
}

Normalized normalize_cusp(const Cusp& cusp, const GaussInt& q0) {
    if (q0.is_zero()) throw domain_error("q0 must be nonzero");
    if (is_normalized(cusp, q0)) return {cusp.u, cusp.w, Mat2{}};
    GaussInt t = cusp.infinite ? GaussInt(1) : cusp.u;
    GaussInt v = cusp.infinite ? GaussInt(0) : cusp.w;
    GaussInt w = gcd(v, q0);
    GaussInt X = exact_div(q0, w) * t, Y = exact_div(v, w);
    auto xg = gcd_xgcd(X, Y);
    if (!is_unit(xg.g)) throw consistency_error("normalize_cusp: (q0/w)t and v/w not coprime");
    GaussInt ginv = unit_inverse(xg.g);
    GaussInt kappa = xg.s * ginv, delta = xg.t * ginv;
    // X kappa + Y delta = 1 stays true under (kappa - kY, delta + kX)
    GaussInt k = shift_coprime(delta, X, q0);
    kappa = kappa - k * Y;
    delta = delta + k * X;
    GaussInt lower = q0 * kappa;
    auto ad = gcd_xgcd(delta, lower);
    if (!is_unit(ad.g)) throw consistency_error("normalize_cusp: (delta, q0 kappa) not coprime");
    GaussInt einv = unit_inverse(ad.g);
    Mat2 gamma{ad.s * einv, -(ad.t * einv), lower, delta};
    GaussInt u = gamma.a * t + gamma.b * v;
    if (gamma.c * t + gamma.d * v != w) throw consistency_error("normalize_cusp: denominator mismatch");
    if (u.is_zero()) {
        gamma = n_mat(1) * gamma;
        u = u + w;
    }
    GaussInt s = shift_coprime(u, w, q0);
    if (!s.is_zero()) {
        gamma = n_mat(s) * gamma;
        u = u + s * w;
    }
    GaussInt e = unit_inverse(unit_part(w));
    u = u * e;
    w = w * e;
    if (!in_gamma0(gamma, q0)) throw consistency_error("normalize_cusp: witness not in Gamma_0(q0)");
    return {u, w, gamma};
}

bool cusps_equivalent(const Cusp& c1, const Cusp& c2, const GaussInt& q0) {
    auto n1 = normalize_cusp(c1, q0), n2 = normalize_cusp(c2, q0);
    if (!associated(n1.w, n2.w)) return false;
    GaussInt g = gcd(n1.w, exact_div(q0, n1.w));
    GaussInt lhs = exact_div(n2.u * n1.w, n2.w);
    return divides(g, lhs - n1.u) || divides(g, lhs + n1.u);
}

bool cusps_equivalent_direct(const Cusp& c1, const Cusp& c2, const GaussInt& q0) {
    // pi_j in SL(2, O) with pi_j(inf) = c_j; any gamma with gamma c1 = c2 has
    // pi_2^-1 gamma pi_1 = h[lambda] n[k]. The lower-left entry of
    // pi_2 h[lambda] n[k] pi_1^-1 is P - k Q, so solvability mod q0 is a gcd test.
    auto pi_of = [](const Cusp& c) {
        if (c.infinite) return Mat2{};
        auto x = gcd_xgcd(c.u, c.w);
        GaussInt e = unit_inverse(x.g);
        return Mat2{c.u, -(x.t * e), c.w, x.s * e};
    };
    Mat2 p1 = pi_of(c1), p2 = pi_of(c2);
    Mat2 p1inv = inverse_sl2(p1);
    for (const auto& lam : units) {
        Mat2 m = p2 * h_unit(lam);
        // m * n[k] * p1inv lower-left: (m.c * p1inv.a) + (m.c * k + m.d) * p1inv.c
        GaussInt P = m.c * p1inv.a + m.d * p1inv.c;
        GaussInt Q = m.c * p1inv.c;
        GaussInt g = Q.is_zero() ? canonical(q0) : gcd(Q, q0);
        if (divides(g, P)) return true;
    }
    return false;
}

std::complex<double> CuspFrame::sqrt_v() const { return std::sqrt(v.to_complex()); }

CuspFrame frame_from_uw(const GaussInt& u, const GaussInt& w, const GaussInt& q0) {
    if (q0.is_zero()) throw domain_error("q0 must be nonzero");
    if (w.is_zero() || u.is_zero()) throw domain_error("frame_from_uw needs u, w nonzero");
    if (!divides(w, q0)) throw domain_error("frame_from_uw: w does not divide q0");
    if (!coprime(u, w)) throw domain_error("frame_from_uw: (u, w) not coprime");
    CuspFrame f;
    f.q0 = canonical(q0);
    f.u = u;
    f.w = w;
    f.cusp = Cusp::frac(u, w);
    if (coprime(u, q0)) {
        // u r + q0 s = 1 gives u~ = r and w~ = (q0 / w) s
        auto x = gcd_xgcd(u, q0);
        GaussInt e = unit_inverse(x.g);
        f.u_tilde = x.s * e;
        f.w_tilde = exact_div(q0, w) * (x.t * e);
        f.unit_mod_q0 = true;
    } else {
        auto x = gcd_xgcd(u, w);
        GaussInt e = unit_inverse(x.g);
        f.u_tilde = x.s * e;
        f.w_tilde = x.t * e;
    }
    if (u * f.u_tilde + w * f.w_tilde != GaussInt(1)) throw consistency_error("frame: u u~ + w w~ != 1");
    GaussInt q0w = exact_div(q0, w);
    f.v = canonical(exact_div(q0w, gcd(q0w, w)));
    f.mu_inv = canonical(w * f.v);
    GaussInt g = gcd(w, q0w);
    f.stab_index = divides(g, 2) ? 4 : 2;
    auto sd = stabilizer_data(f);
    f.z0 = sd.z0;
    f.beta = sd.beta;
    return f;
}

CuspFrame make_frame(const Cusp& cusp, const GaussInt& q0) {
    auto n = normalize_cusp(cusp, q0);
    CuspFrame f = frame_from_uw(n.u, n.w, q0);
    f.cusp = cusp;
    f.witness = n.gamma;
    return f;
}

StabilizerData stabilizer_data(const CuspFrame& f) {
    GaussInt q0w = exact_div(f.q0, f.w);
    GaussInt g = gcd(f.w, q0w);
    StabilizerData sd{divides(g, 2) ? 4 : 2, std::nullopt, GaussInt(0)};
    if (sd.stab_index == 2) return sd;
    // (w/g) z0 = 2 i u~ / g  mod v
    GaussInt a = exact_div(f.w, g);
    GaussInt rhs = exact_div(GaussInt(0, 2) * f.u_tilde, g);
    GaussInt z0 = is_unit(f.v) ? GaussInt(0) : mod(rhs * mod_inverse(a, f.v), f.v);
    if (!divides(f.v, a * z0 - rhs)) throw consistency_error("stabilizer congruence has no solution");
    Mat2 p = f.pi_matrix();
    Mat2 s = p * Mat2{GaussInt(0, 1), z0, 0, GaussInt(0, -1)} * inverse_sl2(p);
    if (!in_gamma0(s, f.q0)) throw consistency_error("stabilizer element not in Gamma_0(q0)");
    sd.z0 = z0;
    sd.beta = std::complex<double>(0, -1) * z0.to_complex() / f.v.to_complex();
    return sd;
}

std::vector<CuspFrame> class_representatives(const GaussInt& q0) {
    if (q0.is_zero()) throw domain_error("q0 must be nonzero");
    std::vector<CuspFrame> reps;
    for (const auto& w : divisors(q0)) {
        GaussInt g = gcd(w, exact_div(q0, w));
        for (const auto& r : residues(g, true)) {
            GaussInt k = shift_coprime(r, g, q0 * w);
            GaussInt u = r + k * g;
            Cusp c = Cusp::frac(u, w);
            bool seen = false;
            for (const auto& f : reps)
                if (cusps_equivalent(f.cusp, c, q0)) {
                    seen = true;
                    break;
                }
            if (!seen) reps.push_back(make_frame(c, q0));
        }
    }
    return reps;
}

std::int64_t class_count_formula(const GaussInt& q0) {
    if (q0.is_zero()) throw domain_error("q0 must be nonzero");
    // sums over all divisors including associates: 4 per divisor ideal
    std::int64_t s1 = 0, s2 = 0;
    for (const auto& w : divisors(q0)) {
        GaussInt g = gcd(w, exact_div(q0, w));
        std::int64_t ph = euler_phi(g);
        s1 += 4 * ph;
        if (divides(g, 2)) s2 += 4 * ph;
    }
    if ((s1 + s2) % 8 != 0) throw consistency_error("class count formula is not an integer");
    return (s1 + s2) / 8;
}

std::int64_t class_count_direct(const GaussInt& q0) {
    if (q0.is_zero()) throw domain_error("q0 must be nonzero");
    std::vector<Cusp> cands{Cusp::inf(), Cusp::frac(0, 1)};
    auto res = residues(q0);
    for (const auto& w : divisors(q0))
        for (const auto& u : res)
            if (!u.is_zero() && coprime(u, w)) cands.push_back(Cusp::frac(u, w));
    std::vector<Cusp> reps;
    for (const auto& c : cands) {
        bool seen = false;
        for (const auto& r : reps)
            if (cusps_equivalent_direct(r, c, q0)) {
                seen = true;
                break;
            }
        if (!seen) reps.push_back(c);
    }
    return static_cast<std::int64_t>(reps.size());
}

IndexVolume index_and_covolume(const GaussInt& q0, std::complex<double> zeta2) {
    if (q0.is_zero()) throw domain_error("q0 must be nonzero");
    // |q0|^2 prod (1 + |p|^-2) = prod_p (N^e + N^(e-1))
    std::int64_t index = 1;
    for (const auto& pp : factorize(q0).factors) {
        std::int64_t n = pp.prime.norm(), pe = 1;
        for (int e = 1; e < pp.exponent; ++e) pe *= n;
        index *= pe * n + pe;
    }
    return {index, 2.0 / (pi * pi) * zeta2.real() * double(index)};
}

bool admissible_modulus(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& C) {
    if (C.is_zero()) return false;
    auto r1 = residues(f1.v), r2 = residues(f2.v);
    const ResidueRing ring(C);
    for (std::int64_t key = 0; key < ring.size(); ++key) {
        const GaussInt a0 = ring.element(key);
        if (!coprime(a0, C)) continue;
        GaussInt d0 = mod_inverse(a0, C);
        for (const auto& s : r1) {
            GaussInt A = a0 + C * s;
            for (const auto& t : r2) {
                GaussInt D = d0 + C * t;
                GaussInt B = exact_div(A * D - 1, C);
                if (divides(f1.q0, lower_left(f1, f2, A, B, C, D))) return true;
            }
        }
    }
    return false;
}

std::vector<Modulus> allowed_moduli(const CuspFrame& f1, const CuspFrame& f2, double X) {
    if (!(f1.q0 == f2.q0)) throw domain_error("frames have different q0");
    if (X < 1) throw domain_error("allowed_moduli needs X >= 1");
    double vv = double(f1.v.norm() * f2.v.norm());
    auto maxC = static_cast<std::int64_t>(std::floor(X * X / vv + 1e-9));
    std::complex<double> root = f1.sqrt_v() * f2.sqrt_v();
    std::vector<Modulus> out;
    for (const auto& C : small_elements(maxC)) {
        if (C.is_zero()) continue;
        if (!admissible_modulus(f1, f2, C)) continue;
        std::complex<double> c = C.to_complex() * root;
        out.push_back({C, c, std::norm(c)});
    }
    std::stable_sort(out.begin(), out.end(), [](const Modulus& a, const Modulus& b) {
        if (std::abs(a.abs2 - b.abs2) > 1e-9 * std::max(1.0, a.abs2)) return a.abs2 < b.abs2;
        auto ang = [](std::complex<double> z) {
            double t = std::arg(z);
            return t < 0 ? t + 2 * pi : t;
        };
        return ang(a.c) < ang(b.c);
    });
    return out;
}

}  // namespace gk
