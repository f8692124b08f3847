// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "gk/numeric.hpp"

namespace gk {

// 1/Gamma(z), entire.
cplx rgamma(cplx z);

// J_n(z) for |n| <= 200, |z| <= 500: integral representation for |z| <= 30,
// extended-precision power series beyond.
cplx bessel_j_int(int n, cplx z);
cplx bessel_j_int_quad(int n, cplx z);
cplx bessel_j_int_series(int n, cplx z);

// J_0(x), ..., J_nmax(x) for real x by backward recurrence.
std::vector<double> bessel_j_sequence(int nmax, double x);

// J*_xi(z) = sum_m (-1)^m (z/2)^{2m} / (m! Gamma(xi + m + 1)), |z| <= 60.
cplx bessel_j_star(cplx xi, cplx z);

// |z/2|^{2 nu} (z/|z|)^{-2p} J*_{nu-p}(z) J*_{nu+p}(conj z)
cplx script_j(cplx nu, int p, cplx z);

// (J_{-nu,-p}(z) - J_{nu,p}(z)) / sin(pi nu); integer nu handled by a symmetric limit.
cplx kernel_K(cplx nu, int p, cplx z);
// K_{nu,p}(z) for one (nu, p) and many z. Gamma factors and series coefficients are
// computed once; |z| > 12 falls back to kernel_K.
class KernelPlan {
public:
    KernelPlan(cplx nu, int p);
    cplx operator()(cplx z) const;
    // Angular Fourier coefficient: K(r e^{i theta}) = sum_k harmonic(r, k) e^{2 i k theta}. Needs 0 < r <= 12.
    cplx harmonic(double r, int k) const;

    struct Series {
        cplx xi, rg;
        int m0 = 0;
        std::vector<std::complex<long double>> c;  // J*_xi(z) = rg * sum_m c_m (z/2)^{2m}
        cplx eval(cplx z) const;
    };

private:
    struct Raw {
        cplx nu;
        int p = 0;
        Series minus_lo, minus_hi, plus_lo, plus_hi;
        cplx inv_sin;
        cplx eval(cplx z) const;
        cplx harmonic(double r, int k) const;
    };
    static Raw make_raw(cplx nu, int p);

    cplx nu_;
    int p_;
    bool limit_ = false;
    cplx d_;
    std::vector<Raw> raws_;
};

// The same kernel from its y-integral over J_{2p}, |Re nu| < 1/4.
cplx kernel_K_integral(cplx nu, int p, cplx z, double tol = 1e-11);

// |LHS - RHS| of the Graf addition identity with the m-sum truncated at |m| <= M.
double graf_residual(int p, cplx u, double y, int M);

// G_n(y) = int x^n exp(2ixy - x^2) dx by the three-term recurrence.
cplx gauss_fourier_G(int n, double y);
// The same integral by direct quadrature.
cplx gauss_fourier_G_quad(int n, double y);

// f(x + iy) = sum_k c_k x^{a_k} y^{b_k} exp(-t |z|^2)
struct GaussPoly {
    struct Term {
        int a, b;
        cplx c;
    };
    double t = 1.0;
    std::vector<Term> terms;

    static GaussPoly gaussian(double t) { return {t, {{0, 0, cplx(1, 0)}}}; }
    cplx operator()(cplx z) const;
    // transform int f(z) e(-Re(w z)) d+z, closed form
    cplx fourier(cplx w) const;
    GaussPoly laplacian() const;
    // int |f| d+z by quadrature
    double abs_integral() const;
    // max of sum_k |c_k| r^{a_k + b_k} over r in [0, R], times exp(-t r0^2)
    double radial_majorant(double r_lo, double r_hi) const;
};

struct PoissonResult {
    cplx lhs, rhs;
    double lhs_tail = 0, rhs_tail = 0;
};
PoissonResult poisson_check_2d(const GaussPoly& f, double cutoff);

struct DecayRow {
    int j;
    cplx w;
    double lhs;        // |f^(w)|
    double bound;      // (2 pi |w|)^{-2j} int |Lap^j f|
    double identity;   // | |f^(w)| - (2 pi |w|)^{-2j} |(Lap^j f)^(w)| |
    bool ok;
};
std::vector<DecayRow> laplacian_decay_check(const GaussPoly& f, int jmax, const std::vector<cplx>& ws);

// psi(y, x; phi) = e^y sin(phi - x) + e^{-y} sin(phi + x)
inline double psi_yx(double y, double x, double phi) {
    return std::exp(y) * std::sin(phi - x) + std::exp(-y) * std::sin(phi + x);
}

struct Lemma48Row {
    double x, y, J, ratio;  // ratio = J sqrt(cos x)
};
struct Lemma48Report {
    std::vector<Lemma48Row> rows;
    double max_ratio = 0;
    double min_ratio = 0;
};
// int_{-pi}^{pi} |psi(y, x; phi)|^{-1/2} dphi, |x| < pi/2
double lemma48_integral(double x, double y);
Lemma48Report lemma48_sweep(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace gk
