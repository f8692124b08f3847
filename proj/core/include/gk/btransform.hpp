// SPDX-License-Identifier: MIT
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gk/numeric.hpp"

namespace gk {

struct TestParams {
    double P = 1, K = 1, sigma = 0.75;
    void validate() const;
};

// h(nu, p) = exp((nu/K)^2 - (p/P)^2) on |Re nu| <= sigma.
cplx test_h(const TestParams& params, cplx nu, int p);

// Condition (iii) of the sum formula with rho = theta = 4:
// sup |h| (1 + |Im nu|)^4 (1 + |p|)^4 sampled on the strip, and the closed-form
// constant from exp(-x^2) <= 1/(1 + x^4/2).
struct DecayConstant {
    double sampled_sup = 0;
    double analytic_bound = 0;
};
DecayConstant test_h_decay_constant(const TestParams& params);

enum class BMethod { kernel_direct, bessel_1d, lemma46_triple };
std::string to_string(BMethod m);
BMethod parse_bmethod(const std::string& s);

struct BTransformConfig {
    BMethod method = BMethod::kernel_direct;
    // bessel_1d: expand J_2p by the addition law; lemma46_triple: the G_{P,K} form
    bool alternate = false;
    int M = 0;           // lemma46_triple only; 0 picks ceil(Delta (1 + |u|))
    double Delta = 1.0;  // lemma46_triple only
    double nu_cutoff = 0;  // kernel_direct: |Im nu| cutoff, 0 = max(12K, 40)
    double quad_tol = 1e-10;
};

struct BTransformResult {
    cplx value;
    double err = 0;       // quadrature and truncation estimate
    double envelope = 0;  // lemma46_triple: (P^2 + K^2)(1 + |u|) Delta^{1-2j}, j = 2
    int M = 0;
};

// Smallest M with Delta <= M/(1 + |u|) <= 2 Delta.
int choose_M(double Delta, cplx u);
void check_truncation(int M, double Delta, cplx u);

// (Bh)(u) for the Gaussian test function.
BTransformResult b_transform(const TestParams& params, cplx u, const BTransformConfig& cfg);

// (Bh)(u) = (1/4 pi) sum_p int K_{it,p}(u) h(it, p) (p^2 + t^2) dt for an arbitrary
// even h, truncated at |t| <= t_max, |p| <= p_max (trapezoid-free Gauss-Legendre panels).
cplx b_transform_generic(const std::function<cplx(double t, int p)>& h, cplx u, double t_max, int p_max,
                         double t_step);

// sum_{m=-M}^{M} (-1)^m cos(2 m phi) e^{2 i m theta}
cplx a_m(int M, double phi, double theta);
// Closed form as a sum of two Dirichlet-type quotients; needs cos(phi +- theta) != 0.
cplx a_m_closed(int M, double phi, double theta);

struct DiagonalTerm {
    cplx exact_numeric;  // Poisson-accelerated p-sum
    cplx direct;         // plain p-sum with G_0(0), G_2(0)
    double main_term = 0;
    double rel_dev() const { return std::abs(exact_numeric / main_term - 1.0); }
};
DiagonalTerm diagonal_term(const TestParams& params);

// Smooth bump on an annulus, in log-radius:
// f(r e^{i theta}) = b(log(r/r0)/w) (1 + amp cos(2 theta - theta0)), b(s) = exp(1 - 1/(1 - s^2)).
// Support r0 e^{-w} < r < r0 e^{w}, which must lie in |z| <= 12.
struct Bump {
    double r0 = 1.0, w = 1.5, amp = 0.4, theta0 = 0.3;
    void validate() const;
    double operator()(cplx z) const;
};

// (Kf)(nu, p) = int K_{nu,p}(z) f(z) |z|^{-2} d+z by polar quadrature.
cplx k_transform(const Bump& f, cplx nu, int p);
// Same integral with the angular part done exactly from the kernel's Fourier coefficients.
cplx k_transform_harmonic(const Bump& f, cplx nu, int p);

struct InversionRow {
    cplx u;
    double f_value;
    cplx pi_bkf;
    double rel_err;
};
struct InversionConfig {
    double t_max = 40, t_step = 0.5;
    int p_max = 6;
};
std::vector<InversionRow> inversion_check(const Bump& f, const std::vector<cplx>& us, const InversionConfig& cfg = {});

}  // namespace gk
