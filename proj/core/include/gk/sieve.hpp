// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gk/btransform.hpp"
#include "gk/cusps.hpp"
#include "gk/gaussint.hpp"
#include "gk/numeric.hpp"

namespace gk {

// omega with N/2 < |omega|^2 <= N, in the GaussInt order.
std::vector<GaussInt> annulus_points(double N);

// Coefficients b(omega) on the annulus N/2 < |omega|^2 <= N; absent entries are zero.
class CoeffVector {
public:
    explicit CoeffVector(double N);
    double N() const { return N_; }
    void set(const GaussInt& w, cplx value);  // domain_error off the annulus
    cplx operator[](const GaussInt& w) const;
    const std::map<GaussInt, cplx>& entries() const { return entries_; }
    double norm() const;  // (sum |b|^2)^{1/2}

private:
    double N_;
    std::map<GaussInt, cplx> entries_;
};

enum class CoeffFamily { ones, spike, random_phase, twist };
std::string to_string(CoeffFamily f);
// random_phase: b = e(x) with x uniform from the seed; twist: b = e(Re(beta omega)) with beta drawn from the seed.
CoeffVector make_coeffs(CoeffFamily family, double N, std::uint64_t seed = 1);

struct SweepRow {
    std::vector<std::pair<std::string, std::string>> params;
    std::string bound;
    double lhs = 0, envelope = 0, ratio = 0;
};

class SweepReport {
public:
    void add(SweepRow row);  // requires envelope > 0
    const std::vector<SweepRow>& rows() const { return rows_; }
    std::vector<std::string> bounds() const;
    double max_ratio(const std::string& bound) const;
    const SweepRow* argmax(const std::string& bound) const;
    // Max ratio over the largest third of the values of `key` against the smallest third.
    bool blow_up(const std::string& bound, const std::string& key = "N", double factor = 3.0) const;
    std::string to_csv() const;
    std::string to_json() const;

private:
    std::vector<SweepRow> rows_;
};

// U_a(psi, c; M; N, b) for c = C v (same cusp). The Kloosterman matrix over the annulus
// is built once and reused for every (psi, M, b).
class USumEvaluator {
public:
    USumEvaluator(const CuspFrame& frame, const GaussInt& C, double N);
    double evaluate(double psi, int M, const CoeffVector& b) const;
    const std::vector<GaussInt>& points() const { return pts_; }
    cplx S(std::size_t i, std::size_t j) const { return S_[i * pts_.size() + j]; }
    const GaussInt& c() const { return c_; }

private:
    GaussInt c_;
    double N_;
    std::vector<GaussInt> pts_;
    std::vector<cplx> S_;
};

double u_sum(const CuspFrame& frame, double psi, const GaussInt& C, int M, const CoeffVector& b);

// E_c(N; M, T) with f'(x) = alpha x^beta, by Gauss-Legendre panels in t sized to the phase spread.
double e_sum(const GaussInt& c, const CoeffVector& a, int M, double T, double alpha, double beta);
// (|c|(M + 1) + N^{1/2}) (|c| T + |alpha|^{-1} N^{-beta/2}) ||a||^2
double e_sum_envelope(const GaussInt& c, const CoeffVector& a, int M, double T, double alpha, double beta);

struct GeometricSide {
    cplx delta_part;
    cplx kloosterman_part;
    double tail_envelope = 0;
    double c_b = 0;  // measured sup |Bh(u)| / |u|^{2 sigma} on the tail region
    std::int64_t moduli = 0;
};
GeometricSide geometric_side(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& w1, const GaussInt& w2,
                             const TestParams& params, double X);

struct LinnikSelberg {
    cplx Z_partial;
    cplx zeta_partial;
    double tail = 0;       // bound on |Z - Z_partial|
    double zeta_tail = 0;  // bound on |zeta - zeta_partial|
    double bound = 0;      // the full absolute-series bound at sigma* = Re s
};
LinnikSelberg linnik_selberg_partial(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& w1,
                                     const GaussInt& w2, cplx s, double X);

struct Prop2Grid {
    std::vector<GaussInt> q0s{GaussInt(1), GaussInt(1, 1)};
    std::int64_t max_c_norm = 400;  // |c|^2
    int moduli_per_frame = 3;
    std::vector<double> Ns{25, 50, 100, 200};
    std::vector<int> Ms{0, 5, 20};
    std::vector<double> psis{0, 0.5, 2};
    std::vector<CoeffFamily> families{CoeffFamily::ones, CoeffFamily::spike, CoeffFamily::random_phase,
                                      CoeffFamily::twist};
    std::uint64_t seed = 1;
    double eps = 0.1, A1 = 1, A2 = 2;  // window 0 < |c|^2 <= A1 N^{1-eps}, 0 < |psi| <= A2 of the short-modulus bound
    int threads = 1;
};
SweepReport prop2_sweep(const Prop2Grid& grid);

}  // namespace gk
