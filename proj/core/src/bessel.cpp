// SPDX-License-Identifier: MIT
#include "gk/bessel.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <map>

#include "gk/gaussint.hpp"

namespace gk {

namespace {

using lcplx = std::complex<long double>;

void require_finite(cplx z, const char* what) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw domain_error(std::string(what) + ": non-finite input");
}

cplx log_gamma_right(cplx z) {
    // Lanczos, g = 7, valid for Re z >= 1/2
    static constexpr std::array<double, 9> coef{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    z -= 1.0;
    cplx x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + double(i));
    cplx t = z + 7.5;
    return 0.5 * std::log(two_pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

// ---------------------------------------------------------------- MPFR complex

class MpC {
public:
    explicit MpC(mpfr_prec_t p) {
        mpfr_init2(re, p);
        mpfr_init2(im, p);
        mpfr_set_zero(re, 1);
        mpfr_set_zero(im, 1);
    }
    ~MpC() {
        mpfr_clear(re);
        mpfr_clear(im);
    }
    MpC(const MpC&) = delete;
    MpC& operator=(const MpC&) = delete;

    void set(cplx z) {
        mpfr_set_d(re, z.real(), MPFR_RNDN);
        mpfr_set_d(im, z.imag(), MPFR_RNDN);
    }
    void set(const MpC& o) {
        mpfr_set(re, o.re, MPFR_RNDN);
        mpfr_set(im, o.im, MPFR_RNDN);
    }
    cplx get() const { return {mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN)}; }
    // max(|re|, |im|) as a double, enough for magnitude tests
    double mag() const {
        return std::max(std::abs(mpfr_get_d(re, MPFR_RNDN)), std::abs(mpfr_get_d(im, MPFR_RNDN)));
    }

    mpfr_t re, im;
};

class MpScratch {
public:
    explicit MpScratch(mpfr_prec_t p) {
        for (auto& t : t_) mpfr_init2(t, p);
    }
    ~MpScratch() {
        for (auto& t : t_) mpfr_clear(t);
    }
    MpScratch(const MpScratch&) = delete;
    MpScratch& operator=(const MpScratch&) = delete;

    // r = a * b, r may alias a or b
    void mul(MpC& r, const MpC& a, const MpC& b) {
        mpfr_mul(t_[0], a.re, b.re, MPFR_RNDN);
        mpfr_mul(t_[1], a.im, b.im, MPFR_RNDN);
        mpfr_mul(t_[2], a.re, b.im, MPFR_RNDN);
        mpfr_mul(t_[3], a.im, b.re, MPFR_RNDN);
        mpfr_sub(r.re, t_[0], t_[1], MPFR_RNDN);
        mpfr_add(r.im, t_[2], t_[3], MPFR_RNDN);
    }
    // r = a / b
    void div(MpC& r, const MpC& a, const MpC& b) {
        mpfr_sqr(t_[4], b.re, MPFR_RNDN);
        mpfr_sqr(t_[5], b.im, MPFR_RNDN);
        mpfr_add(t_[4], t_[4], t_[5], MPFR_RNDN);
        mpfr_mul(t_[0], a.re, b.re, MPFR_RNDN);
        mpfr_mul(t_[1], a.im, b.im, MPFR_RNDN);
        mpfr_mul(t_[2], a.im, b.re, MPFR_RNDN);
        mpfr_mul(t_[3], a.re, b.im, MPFR_RNDN);
        mpfr_add(r.re, t_[0], t_[1], MPFR_RNDN);
        mpfr_sub(r.im, t_[2], t_[3], MPFR_RNDN);
        mpfr_div(r.re, r.re, t_[4], MPFR_RNDN);
        mpfr_div(r.im, r.im, t_[4], MPFR_RNDN);
    }
    static void add(MpC& r, const MpC& a) {
        mpfr_add(r.re, r.re, a.re, MPFR_RNDN);
        mpfr_add(r.im, r.im, a.im, MPFR_RNDN);
    }
    static void div_si(MpC& r, long d) {
        mpfr_div_si(r.re, r.re, d, MPFR_RNDN);
        mpfr_div_si(r.im, r.im, d, MPFR_RNDN);
    }

private:
    std::array<mpfr_t, 6> t_;
};

mpfr_prec_t series_bits(double absz) { return static_cast<mpfr_prec_t>(96 + absz * 1.4427 * 1.05); }

// sum_m (-q)^m / m! * R_m with R_m = prod_{k=m+1}^{m0} (xi + k) for m < m0 and
// 1 / prod_{k=m0+1}^{m} (xi + k) beyond, so that J*_xi = S / Gamma(xi + m0 + 1).
template <class C>
C jstar_core_ld(C xi, C q, int m0) {
    using R = typename C::value_type;
    std::vector<C> low(static_cast<std::size_t>(m0) + 1);
    low[m0] = 1;
    for (int m = m0; m > 0; --m) low[m - 1] = low[m] * (xi + R(m));
    C t = 1, sum = 0, Rm = 1;
    R running = 0;
    int small = 0;
    const R eps = R(1e-18);
    for (int m = 0;; ++m) {
        if (m > 0) t *= -q / R(m);
        if (m <= m0)
            Rm = low[m];
        else
            Rm /= (xi + R(m));
        C term = t * Rm;
        sum += term;
        R a = std::abs(term);
        running = std::max(running, a);
        if (m > m0 && R(m) > std::abs(q)) {
            small = (a <= eps * running) ? small + 1 : 0;
            if (small >= 3) break;
        }
        if (m > 100000) throw consistency_error("J* series did not converge");
    }
    return sum;
}

cplx jstar_core_mp(cplx xi, cplx q, int m0, mpfr_prec_t bits) {
    MpScratch s(bits);
    MpC mxi(bits), mq(bits), t(bits), sum(bits), Rm(bits), term(bits), tmp(bits);
    mxi.set(xi);
    mq.set(-q);
    std::vector<std::unique_ptr<MpC>> low;
    low.reserve(static_cast<std::size_t>(m0) + 1);
    for (int m = 0; m <= m0; ++m) low.push_back(std::make_unique<MpC>(bits));
    mpfr_set_ui(low[m0]->re, 1, MPFR_RNDN);
    for (int m = m0; m > 0; --m) {
        tmp.set(mxi);
        mpfr_add_si(tmp.re, tmp.re, m, MPFR_RNDN);
        s.mul(*low[m - 1], *low[m], tmp);
    }
    mpfr_set_ui(t.re, 1, MPFR_RNDN);
    mpfr_set_ui(Rm.re, 1, MPFR_RNDN);
    double running = 0;
    int small = 0;
    const double rel = std::ldexp(1.0, -static_cast<int>(bits) + 8);
    for (int m = 0;; ++m) {
        if (m > 0) {
            s.mul(t, t, mq);
            MpScratch::div_si(t, m);
        }
        if (m <= m0) {
            Rm.set(*low[m]);
        } else {
            tmp.set(mxi);
            mpfr_add_si(tmp.re, tmp.re, m, MPFR_RNDN);
            s.div(Rm, Rm, tmp);
        }
        s.mul(term, t, Rm);
        MpScratch::add(sum, term);
        double a = term.mag();
        running = std::max(running, a);
        if (m > m0 && double(m) > std::abs(q)) {
            small = (a <= rel * running) ? small + 1 : 0;
            if (small >= 3) break;
        }
        if (m > 100000) throw consistency_error("J* series did not converge");
    }
    return sum.get();
}

}  // namespace

// ---------------------------------------------------------------- Gamma

cplx rgamma(cplx z) {
    require_finite(z, "rgamma");
    if (z.imag() == 0 && z.real() <= 0 && z.real() == std::floor(z.real())) return 0.0;
    if (z.real() < 0.5) return std::sin(pi * z) / pi * std::exp(log_gamma_right(1.0 - z));
    return std::exp(-log_gamma_right(z));
}

// ---------------------------------------------------------------- J_n

cplx bessel_j_int_quad(int n, cplx z) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [n, z](double t) { return std::exp(cplx(0, -double(n) * t) + cplx(0, 1) * z * std::sin(t)); };
    return gauss_kronrod<double, 61>::integrate(f, -pi, pi, 12, 1e-15) / two_pi;
}

cplx bessel_j_int_series(int n, cplx z) {
    const int k = std::abs(n);
    const mpfr_prec_t bits = series_bits(std::abs(z));
    MpScratch s(bits);
    MpC half(bits), mq(bits), t(bits), sum(bits);
    half.set(z * 0.5);
    s.mul(mq, half, half);
    mpfr_neg(mq.re, mq.re, MPFR_RNDN);
    mpfr_neg(mq.im, mq.im, MPFR_RNDN);
    // t_0 = (z/2)^k / k!
    mpfr_set_ui(t.re, 1, MPFR_RNDN);
    for (int j = 1; j <= k; ++j) {
        s.mul(t, t, half);
        MpScratch::div_si(t, j);
    }
    const double rel = std::ldexp(1.0, -static_cast<int>(bits) + 8);
    double running = 0;
    int small = 0;
    for (int m = 0;; ++m) {
        if (m > 0) {
            s.mul(t, t, mq);
            MpScratch::div_si(t, static_cast<long>(m) * (m + k));
        }
        MpScratch::add(sum, t);
        double a = t.mag();
        running = std::max(running, a);
        if (double(m) > std::abs(z) / 2) {
            small = (a <= rel * running) ? small + 1 : 0;
            if (small >= 3) break;
        }
    }
    cplx r = sum.get();
    // the negative-order series reindexes to (-1)^k times this one
    return (n < 0 && (k & 1)) ? -r : r;
}

cplx bessel_j_int(int n, cplx z) {
    require_finite(z, "bessel_j_int");
    if (std::abs(n) > 200) throw domain_error("bessel_j_int: |n| > 200");
    if (std::abs(z) > 500) throw domain_error("bessel_j_int: |z| > 500");
    if (z == cplx(0)) return n == 0 ? 1.0 : 0.0;
    return std::abs(z) <= 30 ? bessel_j_int_quad(n, z) : bessel_j_int_series(n, z);
}

namespace {

// Hankel's asymptotic expansion of J_nu(x), x >= 50, summed to its smallest term.
double bessel_j_hankel(int nu, double x) {
    const double mu = 4.0 * nu * nu;
    double P = 0, Q = 0, term = 1;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        if (std::abs(term) > prev) break;
        prev = std::abs(term);
        if (k % 4 == 0) P += term;
        if (k % 4 == 1) Q += term;
        if (k % 4 == 2) P -= term;
        if (k % 4 == 3) Q -= term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(P))) break;
        double odd = 2.0 * k + 1;
        term *= (mu - odd * odd) / ((k + 1) * 8.0 * x);
    }
    double chi = x - (0.5 * nu + 0.25) * pi;
    return std::sqrt(2 / (pi * x)) * (P * std::cos(chi) - Q * std::sin(chi));
}

}  // namespace

std::vector<double> bessel_j_sequence(int nmax, double x) {
    if (nmax < 0) throw domain_error("bessel_j_sequence: negative order");
    if (!std::isfinite(x)) throw domain_error("bessel_j_sequence: non-finite argument");
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (x == 0) {
        out[0] = 1;
        return out;
    }
    const double ax = std::abs(x);
    if (ax >= 50 && nmax <= ax / 2) {
        // forward recurrence is stable below the turning point n = x
        out[0] = bessel_j_hankel(0, ax);
        if (nmax >= 1) out[1] = bessel_j_hankel(1, ax);
        for (int k = 1; k < nmax; ++k) out[k + 1] = (2.0 * k / ax) * out[k] - out[k - 1];
        if (x < 0)
            for (int k = 1; k <= nmax; k += 2) out[k] = -out[k];
        return out;
    }
    int top = std::max(nmax, static_cast<int>(ax));
    int start = 2 * ((top + static_cast<int>(std::sqrt(160.0 * top)) + 20) / 2);
    std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
    j[start + 1] = 0;
    j[start] = 1e-300;
    for (int k = start; k >= 1; --k) {
        j[k - 1] = (2.0 * k / ax) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250)
            for (int i = k - 1; i <= start + 1; ++i) j[i] *= 1e-250;
    }
    double norm = j[0];
    for (int k = 2; k <= start; k += 2) norm += 2 * j[k];
    for (int k = 0; k <= nmax; ++k) out[k] = j[k] / norm;
    if (x < 0)
        for (int k = 1; k <= nmax; k += 2) out[k] = -out[k];
    return out;
}

// ---------------------------------------------------------------- J*, kernels

cplx bessel_j_star(cplx xi, cplx z) {
    require_finite(xi, "bessel_j_star");
    require_finite(z, "bessel_j_star");
    double az = std::abs(z);
    if (az > 60) throw domain_error("bessel_j_star: |z| > 60, the power series overflows; an asymptotic branch is needed");
    int m0 = std::max(0, static_cast<int>(std::ceil(-xi.real())));
    cplx q = z * z * 0.25;
    cplx rg = rgamma(xi + double(m0) + 1.0);
    if (az <= 12) {
        lcplx s = jstar_core_ld<lcplx>(lcplx(xi), lcplx(q), m0);
        return rg * cplx(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
    return rg * jstar_core_mp(xi, q, m0, series_bits(az) + 32);
}

cplx script_j(cplx nu, int p, cplx z) {
    if (z == cplx(0)) throw domain_error("script_j: z = 0");
    cplx scale = std::exp(2.0 * nu * std::log(std::abs(z) / 2));
    cplx phase = std::exp(cplx(0, -2.0 * p * std::arg(z)));
    return scale * phase * bessel_j_star(nu - double(p), z) * bessel_j_star(nu + double(p), std::conj(z));
}

namespace {
cplx kernel_raw(cplx nu, int p, cplx z) {
    return (script_j(-nu, -p, z) - script_j(nu, p, z)) / std::sin(pi * nu);
}
}  // namespace

cplx kernel_K(cplx nu, int p, cplx z) {
    require_finite(nu, "kernel_K");
    if (z == cplx(0)) throw domain_error("kernel_K: z = 0");
    if (std::abs(nu.real()) >= 1) throw domain_error("kernel_K: |Re nu| >= 1");
    constexpr double eps = 1e-5;
    double n = std::round(nu.real());
    cplx d = nu - n;
    if (std::abs(d) < eps) {
        cplx kp = kernel_raw(n + eps, p, z), km = kernel_raw(n - eps, p, z);
        return 0.5 * (kp + km) + d * (kp - km) / (2 * eps);
    }
    return kernel_raw(nu, p, z);
}

KernelPlan::Series make_series(cplx xi) {
    KernelPlan::Series s;
    s.xi = xi;
    s.m0 = std::max(0, static_cast<int>(std::ceil(-xi.real())));
    s.rg = rgamma(xi + double(s.m0) + 1.0);
    const int n = s.m0 + 52;
    lcplx lxi(xi);
    std::vector<lcplx> low(static_cast<std::size_t>(s.m0) + 1);
    low[s.m0] = 1;
    for (int m = s.m0; m > 0; --m) low[m - 1] = low[m] * (lxi + static_cast<long double>(m));
    s.c.resize(static_cast<std::size_t>(n) + 1);
    lcplx t = 1, R = 1;
    for (int m = 0; m <= n; ++m) {
        if (m > 0) t *= -1.0L / static_cast<long double>(m);
        R = (m <= s.m0) ? low[m] : R / (lxi + static_cast<long double>(m));
        s.c[m] = t * R;
    }
    return s;
}

cplx KernelPlan::Series::eval(cplx z) const {
    double az = std::abs(z);
    if (az > 12) return bessel_j_star(xi, z);
    int d = std::min(static_cast<int>(c.size()) - 1, m0 + static_cast<int>(2 * az) + 26);
    lcplx q = lcplx(z) * lcplx(z) * 0.25L, acc = 0;
    for (int m = d; m >= 0; --m) acc = acc * q + c[m];
    return rg * cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}

KernelPlan::Raw KernelPlan::make_raw(cplx nu, int p) {
    Raw r;
    r.nu = nu;
    r.p = p;
    r.minus_lo = make_series(-nu + double(p));
    r.minus_hi = make_series(-nu - double(p));
    r.plus_lo = make_series(nu - double(p));
    r.plus_hi = make_series(nu + double(p));
    r.inv_sin = 1.0 / std::sin(pi * nu);
    return r;
}

cplx KernelPlan::Raw::eval(cplx z) const {
    double lr = std::log(std::abs(z) / 2), th = std::arg(z);
    cplx zc = std::conj(z);
    // script J_{-nu,-p} and J_{nu,p}
    cplx jm = std::exp(-2.0 * nu * lr + cplx(0, 2.0 * p * th)) * minus_lo.eval(z) * minus_hi.eval(zc);
    cplx jp = std::exp(2.0 * nu * lr - cplx(0, 2.0 * p * th)) * plus_lo.eval(z) * plus_hi.eval(zc);
    return (jm - jp) * inv_sin;
}

namespace {
// Coefficient of e^{2 i k theta} in script J_{mu,s}(r e^{i theta}) built from lo = J*_{mu-s}, hi = J*_{mu+s}.
cplx script_j_harmonic(const KernelPlan::Series& lo, const KernelPlan::Series& hi, cplx mu, int s, double r, int k) {
    const long double q = static_cast<long double>(r) * r / 4;
    const int n_lo = static_cast<int>(lo.c.size()), n_hi = static_cast<int>(hi.c.size());
    lcplx acc = 0;
    // n = m - s - k
    const int m_begin = std::max(0, s + k);
    long double qp = std::pow(q, 2 * m_begin - s - k);
    for (int m = m_begin; m < n_lo; ++m, qp *= q * q) {
        int n = m - s - k;
        if (n >= n_hi) break;
        acc += lo.c[m] * hi.c[n] * qp;
    }
    cplx scale = std::exp(2.0 * mu * std::log(r / 2));
    return scale * lo.rg * hi.rg * cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
}
}  // namespace

cplx KernelPlan::Raw::harmonic(double r, int k) const {
    return (script_j_harmonic(minus_lo, minus_hi, -nu, -p, r, k) - script_j_harmonic(plus_lo, plus_hi, nu, p, r, k)) *
           inv_sin;
}

cplx KernelPlan::harmonic(double r, int k) const {
    if (!(r > 0) || r > 12) throw domain_error("KernelPlan::harmonic: need 0 < r <= 12");
    if (!limit_) return raws_[0].harmonic(r, k);
    constexpr double eps = 1e-5;
    cplx kp = raws_[0].harmonic(r, k), km = raws_[1].harmonic(r, k);
    return 0.5 * (kp + km) + d_ * (kp - km) / (2 * eps);
}

KernelPlan::KernelPlan(cplx nu, int p) : nu_(nu), p_(p) {
    require_finite(nu, "KernelPlan");
    if (std::abs(nu.real()) >= 1) throw domain_error("KernelPlan: |Re nu| >= 1");
    constexpr double eps = 1e-5;
    double n = std::round(nu.real());
    d_ = nu - n;
    if (std::abs(d_) < eps) {
        limit_ = true;
        raws_.push_back(make_raw(n + eps, p));
        raws_.push_back(make_raw(n - eps, p));
    } else {
        raws_.push_back(make_raw(nu, p));
    }
}

cplx KernelPlan::operator()(cplx z) const {
    if (z == cplx(0)) throw domain_error("KernelPlan: z = 0");
    if (!limit_) return raws_[0].eval(z);
    constexpr double eps = 1e-5;
    cplx kp = raws_[0].eval(z), km = raws_[1].eval(z);
    return 0.5 * (kp + km) + d_ * (kp - km) / (2 * eps);
}

namespace {

// Wynn epsilon extrapolation of a sequence of partial sums.
cplx wynn_epsilon(const std::vector<cplx>& s) {
    std::size_t n = s.size();
    if (n < 3) return s.back();
    std::vector<cplx> prev(n + 1, 0.0), cur(s.begin(), s.end());
    cplx best = s.back();
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<cplx> next(cur.size() - 1);
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            cplx diff = cur[i + 1] - cur[i];
            if (std::abs(diff) < 1e-300) return cur[i + 1];
            next[i] = prev[i + 1] + 1.0 / diff;
        }
        prev = cur;
        cur = next;
        if (k % 2 == 0 && !cur.empty()) best = cur.back();
        if (cur.size() < 2) break;
    }
    return best;
}

// int_{s0}^inf exp(2 nu s) (w/|w|)^{2p} J_2p(a |w|) ds, w = e^{s + i th} + e^{-s - i th},
// taken in the variable r = |w| on half-period panels and extrapolated.
cplx kernel_tail(cplx nu, int p, double a, double th, double s0) {
    using boost::math::quadrature::gauss_kronrod;
    const double c2 = 2 * std::cos(2 * th);
    auto wof = [th](double s) { return std::exp(cplx(s, th)) + std::exp(cplx(-s, -th)); };
    auto integrand = [&](double r) {
        double R = r * r - c2;
        double y2 = 0.5 * (R + std::sqrt(R * R - 4));
        double s = 0.5 * std::log(y2);
        double dsdr = r / (y2 - 1 / y2);
        cplx w = wof(s);
        cplx ph = std::pow(w / std::abs(w), 2 * p);
        return std::exp(2.0 * nu * s) * ph * std::cyl_bessel_j(2.0 * std::abs(p), a * r) *
               ((p < 0 && (p & 1)) ? -1.0 : 1.0) * dsdr;
    };
    double r0 = std::abs(wof(s0));
    const double h = pi / a;
    std::vector<cplx> partial;
    cplx acc = 0;
    double lo = r0;
    for (int k = 0; k < 48; ++k) {
        double hi = lo + h;
        acc += gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 3, 1e-12);
        partial.push_back(acc);
        lo = hi;
    }
    return wynn_epsilon(partial);
}

}  // namespace

cplx kernel_K_integral(cplx nu, int p, cplx z, double tol) {
    using boost::math::quadrature::gauss_kronrod;
    if (z == cplx(0)) throw domain_error("kernel_K_integral: z = 0");
    if (std::abs(nu.real()) >= 0.25) throw domain_error("kernel_K_integral: needs |Re nu| < 1/4");
    const double a = std::abs(z), th = std::arg(z);
    // J_{2p}(x) with J_{-n} = (-1)^n J_n for negative order, from the standard library
    const double sgn = (p < 0 && (p & 1)) ? -1.0 : 1.0;
    auto core = [&](double s) {
        cplx w = std::exp(cplx(s, th)) + std::exp(cplx(-s, -th));
        double aw = std::abs(w);
        if (aw == 0) return cplx(0);
        return std::exp(2.0 * nu * s) * std::pow(w / aw, 2 * p) * sgn * std::cyl_bessel_j(2.0 * std::abs(p), a * aw);
    };
    double s0 = std::max(1.5, std::log(40.0 / a));
    cplx mid = gauss_kronrod<double, 61>::integrate(core, -s0, s0, 20, tol);
    // s -> -s maps w(s; th) to w(s; -th)
    cplx right = kernel_tail(nu, p, a, th, s0);
    cplx left = kernel_tail(-nu, p, a, -th, s0);
    double sign = (p & 1) ? -1.0 : 1.0;
    return sign * 2.0 / pi * (mid + right + left);
}

double graf_residual(int p, cplx u, double y, int M) {
    require_finite(u, "graf_residual");
    if (u == cplx(0)) throw domain_error("graf_residual: u = 0");
    if (!(y > 0)) throw domain_error("graf_residual: y must be positive");
    if (M < 0 || M + std::abs(p) > 200) throw domain_error("graf_residual: truncation out of range");
    const double a = std::abs(u), th = std::arg(u);
    cplx w = y * std::exp(cplx(0, th)) + 1.0 / (y * std::exp(cplx(0, th)));
    if (std::abs(w) < 1e-12) throw domain_error("graf_residual: y^2 = e^{-2i theta} is excluded");
    double aw = std::abs(w);
    cplx lhs = ((p & 1) ? -1.0 : 1.0) * std::pow(w / aw, 2 * p) * bessel_j_int(2 * p, a * aw);
    // both arguments of the product side are real, so one recurrence sequence each covers every order
    const int nmax = M + std::abs(p);
    const auto js = bessel_j_sequence(nmax, y * a), jt = bessel_j_sequence(nmax, a / y);
    auto jn = [](const std::vector<double>& seq, int n) { return (n < 0 && (n & 1)) ? -seq[-n] : seq[std::abs(n)]; };
    CompensatedSum rhs;
    for (int m = -M; m <= M; ++m) {
        double sg = (m & 1) ? -1.0 : 1.0;
        rhs.add(sg * jn(js, m + p) * jn(jt, m - p) * std::exp(cplx(0, 2.0 * m * th)));
    }
    return std::abs(lhs - rhs.value());
}

// ---------------------------------------------------------------- G_n

cplx gauss_fourier_G(int n, double y) {
    if (n < 0 || n > 64) throw domain_error("gauss_fourier_G: need 0 <= n <= 64");
    cplx gm1 = 0, g = std::sqrt(pi) * std::exp(-y * y);
    for (int k = 0; k < n; ++k) {
        cplx next = cplx(0, y) * g + (0.5 * k) * gm1;
        gm1 = g;
        g = next;
    }
    return g;
}

cplx gauss_fourier_G_quad(int n, double y) {
    using boost::math::quadrature::gauss_kronrod;
    if (n < 0 || n > 64) throw domain_error("gauss_fourier_G_quad: need 0 <= n <= 64");
    double L = std::sqrt(n / 2.0) + 9.0;
    bool even = (n % 2) == 0;
    auto f = [n, y, even](double x) {
        double base = std::pow(x, n) * std::exp(-x * x);
        return even ? base * std::cos(2 * x * y) : base * std::sin(2 * x * y);
    };
    double v = 2 * gauss_kronrod<double, 61>::integrate(f, 0.0, L, 20, 1e-15);
    return even ? cplx(v, 0) : cplx(0, v);
}

// ---------------------------------------------------------------- Gaussian family

namespace {

void check_family(const GaussPoly& f) {
    if (!(f.t > 0) || !std::isfinite(f.t)) throw domain_error("GaussPoly: t must be positive");
    if (f.terms.empty()) throw domain_error("GaussPoly: no terms");
    for (const auto& tm : f.terms)
        if (tm.a < 0 || tm.b < 0 || tm.a > 64 || tm.b > 64) throw domain_error("GaussPoly: exponents out of range");
}

// coefficients of Q_n with G_n(y) = Q_n(y) sqrt(pi) exp(-y^2)
std::vector<double> abs_q_coeffs(int n) {
    std::vector<std::vector<cplx>> q{{cplx(1)}};
    std::vector<cplx> qm1;
    for (int k = 0; k < n; ++k) {
        std::vector<cplx> next(q.back().size() + 1, 0.0);
        for (std::size_t i = 0; i < q.back().size(); ++i) next[i + 1] += cplx(0, 1) * q.back()[i];
        for (std::size_t i = 0; i < qm1.size(); ++i) next[i] += (0.5 * k) * qm1[i];
        qm1 = q.back();
        q.push_back(next);
    }
    std::vector<double> out;
    for (const auto& c : q.back()) out.push_back(std::abs(c));
    return out;
}

double poly_eval(const std::vector<double>& c, double x) {
    double r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

// number of lattice points with n < |alpha| <= n + 1
double shell_count(double n) {
    double lo = std::max(0.0, n - std::sqrt(2.0));
    double hi = n + 1 + std::sqrt(2.0);
    return pi * (hi * hi - lo * lo);
}

}  // namespace

cplx GaussPoly::operator()(cplx z) const {
    double x = z.real(), y = z.imag();
    cplx s = 0;
    for (const auto& tm : terms) s += tm.c * std::pow(x, tm.a) * std::pow(y, tm.b);
    return s * std::exp(-t * std::norm(z));
}

cplx GaussPoly::fourier(cplx w) const {
    check_family(*this);
    const double st = std::sqrt(t);
    cplx s = 0;
    for (const auto& tm : terms) {
        cplx ix = std::pow(t, -(tm.a + 1) / 2.0) * gauss_fourier_G(tm.a, -pi * w.real() / st);
        cplx iy = std::pow(t, -(tm.b + 1) / 2.0) * gauss_fourier_G(tm.b, pi * w.imag() / st);
        s += tm.c * ix * iy;
    }
    return s;
}

GaussPoly GaussPoly::laplacian() const {
    std::map<std::pair<int, int>, cplx> acc;
    auto put = [&](int a, int b, cplx c) {
        if (a >= 0 && b >= 0 && c != cplx(0)) acc[{a, b}] += c;
    };
    for (const auto& tm : terms) {
        const int a = tm.a, b = tm.b;
        // d^2/dx^2 (x^a e^{-t x^2}) = (a(a-1) x^{a-2} - 2t(2a+1) x^a + 4t^2 x^{a+2}) e^{-t x^2}
        put(a - 2, b, tm.c * double(a * (a - 1)));
        put(a, b, tm.c * (-2 * t * (2 * a + 1)));
        put(a + 2, b, tm.c * (4 * t * t));
        put(a, b - 2, tm.c * double(b * (b - 1)));
        put(a, b, tm.c * (-2 * t * (2 * b + 1)));
        put(a, b + 2, tm.c * (4 * t * t));
    }
    GaussPoly out{t, {}};
    for (const auto& [k, c] : acc)
        if (std::abs(c) > 0) out.terms.push_back({k.first, k.second, c});
    return out;
}

double GaussPoly::radial_majorant(double r_lo, double r_hi) const {
    double s = 0;
    for (const auto& tm : terms) s += std::abs(tm.c) * std::pow(r_hi, tm.a + tm.b);
    return s * std::exp(-t * r_lo * r_lo);
}

double GaussPoly::abs_integral() const {
    check_family(*this);
    // polar coordinates: Gauss-Legendre panels in r, trapezoid in angle
    int deg = 0;
    for (const auto& tm : terms) deg = std::max(deg, tm.a + tm.b);
    double R = std::sqrt((45.0 + deg * std::log(1.0 + deg)) / t) + 1.0;
    static const double gx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
    static const double gw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
    const int panels = 96, nth = 1024 + 64 * deg;
    const double h = R / panels;
    double total = 0;
    for (int k = 0; k < panels; ++k) {
        double c = (k + 0.5) * h;
        for (int i = 0; i < 8; ++i) {
            double r = c + 0.5 * h * gx[i];
            double ring = 0;
            for (int j = 0; j < nth; ++j) {
                double a = two_pi * j / nth;
                ring += std::abs((*this)(std::polar(r, a)));
            }
            total += 0.5 * h * gw[i] * r * ring * two_pi / nth;
        }
    }
    return total;
}

PoissonResult poisson_check_2d(const GaussPoly& f, double cutoff) {
    check_family(f);
    if (!(cutoff > 0)) throw domain_error("poisson_check_2d: cutoff must be positive");
    PoissonResult out;
    CompensatedSum lhs, rhs;
    auto R = static_cast<std::int64_t>(std::floor(cutoff));
    for (std::int64_t a = -R; a <= R; ++a)
        for (std::int64_t b = -R; b <= R; ++b) {
            if (double(a * a + b * b) > cutoff * cutoff) continue;
            const cplx z{static_cast<double>(a), static_cast<double>(b)};
            lhs.add(f(z));
            rhs.add(f.fourier(z));
        }
    out.lhs = lhs.value();
    out.rhs = rhs.value();
    // shells beyond the cutoff
    int deg = 0;
    for (const auto& tm : f.terms) deg = std::max(deg, tm.a + tm.b);
    std::vector<std::vector<double>> qa;
    double coef = 0;
    for (const auto& tm : f.terms) coef += std::abs(tm.c) * std::pow(f.t, -(tm.a + tm.b + 2) / 2.0);
    std::vector<double> q_all;
    int amax = 0;
    for (const auto& tm : f.terms) amax = std::max({amax, tm.a, tm.b});
    q_all = abs_q_coeffs(amax);
    for (double n = std::floor(cutoff);; n += 1) {
        double cnt = shell_count(n);
        double tl = cnt * f.radial_majorant(n, n + 1);
        double Y = pi * (n + 1) / std::sqrt(f.t);
        double qv = poly_eval(q_all, std::max(1.0, Y));
        double tr = cnt * coef * pi * qv * qv * std::exp(-pi * pi * n * n / f.t);
        out.lhs_tail += tl;
        out.rhs_tail += tr;
        if ((tl + tr) < 1e-30 * (1 + out.lhs_tail + out.rhs_tail) && n > cutoff + 2) break;
        if (n > cutoff + 1e4) break;
    }
    (void)deg;
    (void)qa;
    return out;
}

std::vector<DecayRow> laplacian_decay_check(const GaussPoly& f, int jmax, const std::vector<cplx>& ws) {
    check_family(f);
    std::vector<GaussPoly> lap{f};
    std::vector<double> l1{f.abs_integral()};
    for (int j = 1; j <= jmax; ++j) {
        lap.push_back(lap.back().laplacian());
        l1.push_back(lap.back().abs_integral());
    }
    std::vector<DecayRow> out;
    for (const auto& w : ws) {
        double fw = std::abs(f.fourier(w));
        for (int j = 0; j <= jmax; ++j) {
            if (j > 0 && w == cplx(0)) continue;
            double scale = std::pow(two_pi * std::abs(w), -2.0 * j);
            if (j == 0) scale = 1;
            double bound = scale * l1[j];
            double ident = std::abs(fw - scale * std::abs(lap[j].fourier(w)));
            bool ok = fw <= bound * (1 + 1e-6) + 1e-300;
            out.push_back({j, w, fw, bound, ident, ok});
        }
    }
    return out;
}

// ---------------------------------------------------------------- oscillatory y-integral

double lemma48_integral(double x, double y) {
    if (!(std::abs(x) < pi / 2)) throw domain_error("lemma48_integral: need |x| < pi/2");
    auto psi = [x, y](double phi) { return psi_yx(y, x, phi); };
    auto dpsi = [x, y](double phi) { return std::exp(y) * std::cos(phi - x) + std::exp(-y) * std::cos(phi + x); };
    // zeros by sign changes on a grid, refined by bracketing
    std::vector<double> cuts{-pi};
    const int n = 256;
    for (int k = 0; k < n; ++k) {
        double a = -pi + two_pi * k / n, b = -pi + two_pi * (k + 1) / n;
        double fa = psi(a), fb = psi(b);
        if (fa == 0) {
            if (a > -pi) cuts.push_back(a);
            continue;
        }
        if (fa * fb < 0) {
            std::uintmax_t it = 100;
            auto r = boost::math::tools::toms748_solve(psi, a, b, fa, fb,
                                                       boost::math::tools::eps_tolerance<double>(52), it);
            cuts.push_back(0.5 * (r.first + r.second));
        }
    }
    cuts.push_back(pi);
    boost::math::quadrature::tanh_sinh<double> ts;
    double total = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-15) continue;
        // near an endpoint e, psi(e + d) = psi(e) cos d + psi'(e) sin d exactly
        auto g = [&](double t, double tc) {
            double v;
            if (std::abs(tc) < 1e-3) {
                double e0 = (t < 0.5 * (a + b)) ? a : b;
                double d = (t < 0.5 * (a + b)) ? std::abs(tc) : -std::abs(tc);
                v = psi(e0) * std::cos(d) + dpsi(e0) * std::sin(d);
            } else {
                v = psi(t);
            }
            return 1.0 / std::sqrt(std::abs(v));
        };
        total += ts.integrate(g, a, b);
    }
    return total;
}

Lemma48Report lemma48_sweep(const std::vector<double>& xs, const std::vector<double>& ys) {
    Lemma48Report rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (double x : xs)
        for (double y : ys) {
            double J = lemma48_integral(x, y);
            double r = J * std::sqrt(std::cos(x));
            rep.rows.push_back({x, y, J, r});
            rep.max_ratio = std::max(rep.max_ratio, r);
            rep.min_ratio = std::min(rep.min_ratio, r);
        }
    return rep;
}

}  // namespace gk
