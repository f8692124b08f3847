// SPDX-License-Identifier: MIT
#include "gk/btransform.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "gk/bessel.hpp"
#include "gk/gaussint.hpp"

namespace gk {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

int default_p_cut(double P) { return static_cast<int>(std::max(12 * P, 40.0)); }

// int_a^b f on n equal panels of 20-point Gauss-Legendre
template <class F>
double panels(F f, double a, double b, int n) {
    double h = (b - a) / n, s = 0;
    for (int k = 0; k < n; ++k) s += gauss<double, 20>::integrate(f, a + k * h, a + (k + 1) * h);
    return s;
}

}  // namespace

void TestParams::validate() const {
    if (!(P >= 1) || !(K >= 1) || !std::isfinite(P) || !std::isfinite(K))
        throw domain_error("TestParams: need P, K >= 1");
    if (!(sigma > 0.5 && sigma < 1)) throw domain_error("TestParams: need sigma in (1/2, 1)");
}

cplx test_h(const TestParams& params, cplx nu, int p) {
    params.validate();
    if (std::abs(nu.real()) > params.sigma) throw domain_error("test_h: |Re nu| > sigma");
    cplx a = nu / params.K;
    double b = p / params.P;
    return std::exp(a * a - b * b);
}

DecayConstant test_h_decay_constant(const TestParams& params) {
    params.validate();
    DecayConstant out;
    for (double s : {0.0, params.sigma})
        for (int ti = 0; ti <= 400; ++ti) {
            double t = 0.1 * ti * params.K;
            for (int p = 0; p <= static_cast<int>(10 * params.P); ++p) {
                double v = std::abs(test_h(params, cplx(s, t), p)) * std::pow(1 + t, 4) * std::pow(1 + p, 4);
                out.sampled_sup = std::max(out.sampled_sup, v);
            }
        }
    // |h| <= e^{sigma^2/K^2} / ((1 + t^4/2K^4)(1 + p^4/2P^4)) and (1 + x)^4 <= 8 (1 + x^4)
    out.analytic_bound = std::exp(params.sigma * params.sigma / (params.K * params.K)) * 16 * std::pow(params.K, 4) *
                         16 * std::pow(params.P, 4);
    return out;
}

std::string to_string(BMethod m) {
    switch (m) {
        case BMethod::kernel_direct: return "kernel_direct";
        case BMethod::bessel_1d: return "bessel_1d";
        case BMethod::lemma46_triple: return "lemma46_triple";
    }
    return "?";
}

BMethod parse_bmethod(const std::string& s) {
    for (auto m : {BMethod::kernel_direct, BMethod::bessel_1d, BMethod::lemma46_triple})
        if (to_string(m) == s) return m;
    throw config_error("unknown B-transform method '" + s + "'");
}

int choose_M(double Delta, cplx u) {
    if (!(Delta >= 1)) throw config_error("Delta must be >= 1");
    return static_cast<int>(std::ceil(Delta * (1 + std::abs(u))));
}

void check_truncation(int M, double Delta, cplx u) {
    if (!(Delta >= 1)) throw config_error("Delta must be >= 1");
    double r = M / (1 + std::abs(u));
    if (M < 1 || r < Delta || r > 2 * Delta)
        throw config_error("truncation M = " + std::to_string(M) + " violates Delta <= M/(1+|u|) <= 2 Delta");
}

// ---------------------------------------------------------------- route 1: kernel

namespace {

BTransformResult b_kernel_direct(const TestParams& prm, cplx u, const BTransformConfig& cfg) {
    const double T = cfg.nu_cutoff > 0 ? cfg.nu_cutoff : std::max(12 * prm.K, 40.0);
    const int pcut = default_p_cut(prm.P);
    // the Gaussian weight is below 1e-30 of its peak past this point
    const double Teff = std::min(T, prm.K * std::sqrt(72.0));
    BTransformResult out;
    CompensatedSum sum;
    double kmax = 0;
    // (t, p) and (-t, -p) contribute equally
    for (int p = 0; p <= pcut; ++p) {
        double wp = std::exp(-double(p) * p / (prm.P * prm.P));
        if (wp == 0) break;
        auto g = [&](double t) {
            return kernel_K(cplx(0, t), p, u) * std::exp(-t * t / (prm.K * prm.K)) * (double(p) * p + t * t);
        };
        double err = 0;
        cplx v = gauss_kronrod<double, 31>::integrate(g, -Teff, Teff, 15, cfg.quad_tol, &err);
        double mult = p == 0 ? 1.0 : 2.0;
        sum.add(mult * wp * v);
        out.err += mult * wp * err;
        for (double t : {-Teff, 0.0, Teff}) kmax = std::max(kmax, std::abs(kernel_K(cplx(0, t), p, u)));
    }
    // tails: |t| > Teff and |p| > pcut, with the sampled kernel size
    double ttail = 0;
    for (int p = 0; p <= pcut; ++p) {
        double wp = std::exp(-double(p) * p / (prm.P * prm.P));
        double K2 = prm.K * prm.K;
        // int_{Teff}^inf (p^2 + t^2) e^{-t^2/K^2} dt <= e^{-Teff^2/K^2} (p^2 K^2/(2 Teff) + K^2 Teff)
        ttail += 2 * wp * std::exp(-Teff * Teff / K2) * (double(p) * p * K2 / (2 * Teff) + K2 * Teff);
    }
    double ptail = 0;
    for (int p = pcut + 1; p < pcut + 200; ++p)
        ptail += 2 * std::exp(-double(p) * p / (prm.P * prm.P)) * prm.K * std::sqrt(pi) * (double(p) * p + prm.K * prm.K);
    out.value = sum.value() / (4 * pi);
    out.err = (out.err + 10 * kmax * (ttail + ptail)) / (4 * pi) + sum.error();
    return out;
}

// ---------------------------------------------------------------- route 2: 1-D Bessel

// f_p(e^s)
double f_p(const TestParams& prm, int p, double s) {
    double K = prm.K, Ks = K * s;
    return K / (4 * std::sqrt(pi)) * (double(p) * p + K * K / 2 - K * K * Ks * Ks) * std::exp(-Ks * Ks);
}

BTransformResult b_bessel_1d(const TestParams& prm, cplx u, const BTransformConfig&) {
    const double a = std::abs(u), th = std::arg(u);
    const int pcut = default_p_cut(prm.P);
    std::vector<double> wp;
    for (int p = 0; p <= pcut; ++p) wp.push_back(std::exp(-double(p) * p / (prm.P * prm.P)));
    // integrand after pairing p with -p: (w/|w|)^{2p} + (w/|w|)^{-2p} = 2 cos(2p arg w)
    auto g = [&](double s) {
        cplx w = std::exp(cplx(s, th)) + std::exp(cplx(-s, -th));
        double aw = std::abs(w), ph = std::arg(w);
        auto J = bessel_j_sequence(2 * pcut, a * aw);
        double acc = wp[0] * J[0] * f_p(prm, 0, s);
        for (int p = 1; p <= pcut; ++p) {
            if (wp[p] == 0) break;
            double sg = (p & 1) ? -1.0 : 1.0;
            acc += sg * wp[p] * 2 * std::cos(2 * p * ph) * J[2 * p] * f_p(prm, p, s);
        }
        return acc;
    };
    const double S = std::sqrt(42.0) / prm.K;
    BTransformResult out;
    // panel widths follow the local frequency a |w|'(s) ~ 2 a sinh|s|
    double s = -S, total = 0;
    while (s < S) {
        double rate = 2 * a * std::sinh(std::abs(s) + 0.25) + 4 * prm.K + 2;
        double h = std::min({0.25, 10.0 / rate, S - s});
        double err = 0;
        total += gauss_kronrod<double, 31>::integrate(g, s, s + h, 0, 0.0, &err);
        out.err += err;
        s += h;
    }
    out.value = 2 / pi * total;
    out.err *= 2 / pi;
    return out;
}

// The addition-law form: 2/(pi K) sum_p e^{-(p/P)^2} int f_p(e^{xi/K}) sum_m J_{m-p}(e^{xi/K}|u|)
// J_{m+p}(e^{-xi/K}|u|) (iu/|u|)^{2m} dxi.
BTransformResult b_bessel_graf(const TestParams& prm, cplx u, const BTransformConfig&) {
    const double a = std::abs(u), th = std::arg(u);
    const int pcut = static_cast<int>(std::ceil(6.5 * prm.P)) + 1;
    auto jn = [](const std::vector<double>& J, int n) {
        int k = std::abs(n);
        if (k >= static_cast<int>(J.size())) return 0.0;
        return (n < 0 && (k & 1)) ? -J[k] : J[k];
    };
    auto g = [&](double xi) {
        double x1 = std::exp(xi / prm.K) * a, x2 = std::exp(-xi / prm.K) * a;
        double lo = std::min(x1, x2);
        int mspan = static_cast<int>(lo + 10 * std::cbrt(lo + 1) + 30);
        int order = pcut + mspan + pcut + 2;
        auto J1 = bessel_j_sequence(order, x1), J2 = bessel_j_sequence(order, x2);
        double acc = 0;
        for (int p = -pcut; p <= pcut; ++p) {
            double wp = std::exp(-double(p) * p / (prm.P * prm.P));
            double fp = f_p(prm, p, xi / prm.K);
            // only |m + p| <= mspan (x2 small) or |m - p| <= mspan (x1 small) survive
            int center = (x1 <= x2) ? p : -p;
            double inner = 0;
            for (int m = center - mspan; m <= center + mspan; ++m) {
                double sg = (m & 1) ? -1.0 : 1.0;  // (iu/|u|)^{2m} = (-1)^m e^{2 i m theta}
                inner += sg * std::cos(2 * m * th) * jn(J1, m - p) * jn(J2, m + p);
            }
            acc += wp * fp * inner;
        }
        return acc;
    };
    const double S = std::sqrt(42.0);
    BTransformResult out;
    double xi = -S, total = 0;
    while (xi < S) {
        double rate = 2 * a * std::sinh((std::abs(xi) + 0.25) / prm.K) / prm.K + 4;
        double h = std::min({0.25, 10.0 / rate, S - xi});
        double err = 0;
        total += gauss_kronrod<double, 31>::integrate(g, xi, xi + h, 0, 0.0, &err);
        out.err += err;
        xi += h;
    }
    // the imaginary part cancels between m and -m after the p-sum
    out.value = 2 / (pi * prm.K) * total;
    out.err *= 2 / (pi * prm.K);
    return out;
}

// ---------------------------------------------------------------- route 3: triple integral

// int_{-pi}^{pi} A_M(phi, theta) cos(r psi(y, x; phi)) dphi, using psi = 2 Z cos(phi - alpha)
// and the Jacobi-Anger expansion of cos(a cos(.)).
double phi_integral(int M, double theta, double r, double y, double x) {
    double ch = std::cosh(y), sh = std::sinh(y), sx = std::sin(x), cx = std::cos(x);
    double Z = std::sqrt(ch * ch - sx * sx);
    double ca = -sh * sx / Z, sa = ch * cx / Z;
    cplx e2a = cplx(ca, sa) * cplx(ca, sa), pw = 1.0;
    auto J = bessel_j_sequence(2 * M, 2 * r * Z);
    double acc = J[0];
    for (int m = 1; m <= M; ++m) {
        pw *= e2a;
        acc += 2 * std::cos(2 * m * theta) * pw.real() * J[2 * m];
    }
    return two_pi * acc;
}

BTransformResult b_lemma46(const TestParams& prm, cplx u, const BTransformConfig& cfg) {
    const double r = std::abs(u), th = std::arg(u), P = prm.P, K = prm.K;
    int M = cfg.M > 0 ? cfg.M : choose_M(cfg.Delta, u);
    check_truncation(M, cfg.Delta, u);
    const bool gform = cfg.alternate;
    const double L_eta = std::sqrt(40.0);
    // weight e^{-xi^2} F (or e^{-xi^2} G, which grows like e^{2|xi|/K})
    const double L_xi = gform ? 1.0 / K + std::sqrt(40.0 + 1.0 / (K * K)) : std::sqrt(40.0);
    const double eta_rate = r / P + 2.0 * M / P + 2;
    const int eta_panels = static_cast<int>(std::ceil(2 * L_eta * eta_rate / 12.0)) + 2;
    auto weight = [&](double xi, double eta) {
        if (gform) return (std::cosh(2 * xi / K) - std::cos(2 * eta / P)) * std::exp(-xi * xi - eta * eta);
        return ((0.5 - eta * eta) * P * P + (0.5 - xi * xi) * K * K) * std::exp(-xi * xi - eta * eta);
    };
    auto inner = [&](double xi) {
        auto f = [&](double eta) { return weight(xi, eta) * phi_integral(M, th, r, xi / K, eta / P); };
        return panels(f, -L_eta, L_eta, eta_panels);
    };
    // (xi, eta) -> (-xi, -eta) leaves the integrand unchanged
    double total = 0, xi = 0;
    while (xi < L_xi) {
        double rate = 2 * r * std::sinh((xi + 0.25) / K) / K + 2.0 * M / K + 2;
        double h = std::min({0.25, 12.0 / rate, L_xi - xi});
        total += gauss<double, 20>::integrate(inner, xi, xi + h);
        xi += h;
    }
    total *= 2;
    BTransformResult out;
    out.M = M;
    out.value = gform ? r * r / (8 * pi * pi * pi) * total : total / (4 * pi * pi * pi);
    out.envelope = (P * P + K * K) * (1 + r) * std::pow(cfg.Delta, -3.0);
    out.err = cfg.quad_tol * (1 + std::abs(out.value));
    return out;
}

}  // namespace

BTransformResult b_transform(const TestParams& params, cplx u, const BTransformConfig& cfg) {
    params.validate();
    if (u == cplx(0) || !std::isfinite(u.real()) || !std::isfinite(u.imag()))
        throw domain_error("b_transform: u must be finite and nonzero");
    switch (cfg.method) {
        case BMethod::kernel_direct: return b_kernel_direct(params, u, cfg);
        case BMethod::bessel_1d: return cfg.alternate ? b_bessel_graf(params, u, cfg) : b_bessel_1d(params, u, cfg);
        case BMethod::lemma46_triple: return b_lemma46(params, u, cfg);
    }
    throw config_error("unknown method");
}

cplx b_transform_generic(const std::function<cplx(double, int)>& h, cplx u, double t_max, int p_max, double t_step) {
    if (u == cplx(0)) throw domain_error("b_transform_generic: u = 0");
    CompensatedSum sum;
    const int n = std::max(1, static_cast<int>(std::ceil(t_max / t_step)));
    const double step = t_max / n;
    // (t, p) and (-t, -p) contribute equally for even h
    for (int p = -p_max; p <= p_max; ++p)
        for (int k = 0; k < n; ++k) {
            auto g = [&](double t) {
                return (kernel_K(cplx(0, t), p, u) * h(t, p) * (double(p) * p + t * t)).real();
            };
            auto gi = [&](double t) {
                return (kernel_K(cplx(0, t), p, u) * h(t, p) * (double(p) * p + t * t)).imag();
            };
            sum.add(cplx(gauss<double, 7>::integrate(g, k * step, (k + 1) * step),
                         gauss<double, 7>::integrate(gi, k * step, (k + 1) * step)));
        }
    return 2.0 * sum.value() / (4 * pi);
}

// ---------------------------------------------------------------- A_M

cplx a_m(int M, double phi, double theta) {
    if (M < 0) throw domain_error("a_m: M < 0");
    CompensatedSum s;
    for (int m = -M; m <= M; ++m)
        s.add(((m & 1) ? -1.0 : 1.0) * std::cos(2.0 * m * phi) * std::exp(cplx(0, 2.0 * m * theta)));
    return s.value();
}

cplx a_m_closed(int M, double phi, double theta) {
    if (M < 0) throw domain_error("a_m_closed: M < 0");
    double cp = std::cos(phi + theta), cm = std::cos(phi - theta);
    if (cp == 0 || cm == 0) throw domain_error("a_m_closed: cos(phi +- theta) = 0");
    double sg = (M & 1) ? -1.0 : 1.0;
    return sg / 2 * (std::cos((2 * M + 1) * (phi + theta)) / cp + std::cos((2 * M + 1) * (phi - theta)) / cm);
}

// ---------------------------------------------------------------- diagonal term

DiagonalTerm diagonal_term(const TestParams& params) {
    if (!(params.P >= 1) || !(params.K >= 1)) throw domain_error("diagonal_term: need P, K >= 1");
    const double P = params.P, K = params.K;
    DiagonalTerm out;
    // p-sum after Poisson summation in p
    CompensatedSum poisson;
    for (int v = -40; v <= 40; ++v) {
        double x = pi * P * v;
        poisson.add(((0.5 - x * x) * P * P + K * K / 2) * std::exp(-x * x));
    }
    out.exact_numeric = K * P / (4 * pi * pi) * poisson.value();
    // plain p-sum of (K / 4 pi^3) e^{-(p/P)^2} (p^2 G_0(0) + K^2 G_2(0))
    const double g0 = gauss_fourier_G(0, 0).real(), g2 = gauss_fourier_G(2, 0).real();
    CompensatedSum direct;
    const int pc = static_cast<int>(std::ceil(9 * P)) + 2;
    for (int p = -pc; p <= pc; ++p)
        direct.add(K / (4 * pi * pi * pi) * std::exp(-double(p) * p / (P * P)) * (double(p) * p * g0 + K * K * g2));
    out.direct = direct.value();
    out.main_term = K * P * (K * K + P * P) / (8 * pi * pi);
    return out;
}

// ---------------------------------------------------------------- K-transform and inversion

void Bump::validate() const {
    if (!(r0 > 0) || !(w > 0)) throw domain_error("Bump: need r0 > 0, w > 0");
    if (r0 * std::exp(w) > 12) throw domain_error("Bump: support must lie in |z| <= 12");
    if (!(std::abs(amp) < 1)) throw domain_error("Bump: need |amp| < 1");
}

namespace {
// Full Gauss-Legendre rule on [-1, 1] from the half rule boost stores.
template <unsigned N>
const std::pair<std::vector<double>, std::vector<double>>& gl_rule() {
    static const auto rule = [] {
        std::pair<std::vector<double>, std::vector<double>> r;
        const auto& x = gauss<double, N>::abscissa();
        const auto& w = gauss<double, N>::weights();
        for (std::size_t i = 0; i < x.size(); ++i) {
            r.first.push_back(x[i]);
            r.second.push_back(w[i]);
            if (x[i] != 0) {
                r.first.push_back(-x[i]);
                r.second.push_back(w[i]);
            }
        }
        return r;
    }();
    return rule;
}

double bump_profile(double s) { return std::abs(s) >= 1 ? 0.0 : std::exp(1 - 1 / (1 - s * s)); }

// Gauss-Legendre panels in x = log r over the support; the panel count follows the
// oscillation of |z|^{2 nu} in x.
template <class F>
cplx log_radial_integral(const Bump& f, cplx nu, F&& g) {
    const double lo = std::log(f.r0) - f.w, hi = std::log(f.r0) + f.w;
    const int np = 6 + static_cast<int>(std::ceil(2 * f.w * std::abs(nu.imag()) / pi));
    CompensatedSum total;
    for (int k = 0; k < np; ++k) {
        double a = lo + (hi - lo) * k / np, b = lo + (hi - lo) * (k + 1) / np;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        const auto& [xs, ws] = gl_rule<10>();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double x = mid + half * xs[i];
            total.add(half * ws[i] * bump_profile((x - std::log(f.r0)) / f.w) * g(std::exp(x)));
        }
    }
    return total.value();
}
}  // namespace

double Bump::operator()(cplx z) const {
    if (z == cplx(0)) return 0;
    return bump_profile(std::log(std::abs(z) / r0) / w) * (1 + amp * std::cos(2 * std::arg(z) - theta0));
}

cplx k_transform(const Bump& f, cplx nu, int p) {
    f.validate();
    if (std::abs(nu.real()) >= 1) throw domain_error("k_transform: |Re nu| >= 1");
    const KernelPlan plan(nu, p);
    // |z|^{-2} d+z = dx dtheta with x = log r
    return log_radial_integral(f, nu, [&](double r) {
        const int nth = 48 + 4 * std::abs(p) + 8 * static_cast<int>(std::ceil(r));
        CompensatedSum s;
        for (int j = 0; j < nth; ++j) {
            double th = two_pi * j / nth;
            s.add(plan(std::polar(r, th)) * (1 + f.amp * std::cos(2 * th - f.theta0)));
        }
        return s.value() * (two_pi / nth);
    });
}

cplx k_transform_harmonic(const Bump& f, cplx nu, int p) {
    f.validate();
    if (std::abs(nu.real()) >= 1) throw domain_error("k_transform_harmonic: |Re nu| >= 1");
    const KernelPlan plan(nu, p);
    const cplx wm = 0.5 * f.amp * std::exp(cplx(0, -f.theta0)), wp = 0.5 * f.amp * std::exp(cplx(0, f.theta0));
    return log_radial_integral(f, nu, [&](double r) {
        cplx s = plan.harmonic(r, 0);
        if (f.amp != 0) s += wm * plan.harmonic(r, -1) + wp * plan.harmonic(r, 1);
        return two_pi * s;
    });
}

std::vector<InversionRow> inversion_check(const Bump& f, const std::vector<cplx>& us, const InversionConfig& cfg) {
    f.validate();
    if (!(cfg.t_max > 0) || !(cfg.t_step > 0) || cfg.p_max < 0) throw domain_error("inversion_check: bad grid");
    for (cplx u : us)
        if (u == cplx(0)) throw domain_error("inversion_check: u = 0");
    // Gauss-Legendre nodes for the outer t-integral on [0, t_max]
    const int n = std::max(1, static_cast<int>(std::ceil(cfg.t_max / cfg.t_step)));
    const double step = cfg.t_max / n;
    std::vector<double> ts, wts;
    const auto& [gx, gw] = gl_rule<7>();
    for (int k = 0; k < n; ++k)
        for (std::size_t i = 0; i < gx.size(); ++i) {
            ts.push_back((k + 0.5 + 0.5 * gx[i]) * step);
            wts.push_back(0.5 * step * gw[i]);
        }
    std::vector<CompensatedSum> sums(us.size());
    for (int p = -cfg.p_max; p <= cfg.p_max; ++p)
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double t = ts[i];
            const KernelPlan plan(cplx(0, t), p);
            const cplx kf = k_transform_harmonic(f, cplx(0, t), p);
            const double wgt = wts[i] * (double(p) * p + t * t);
            for (std::size_t j = 0; j < us.size(); ++j) sums[j].add(wgt * plan(us[j]) * kf);
        }
    std::vector<InversionRow> out;
    for (std::size_t j = 0; j < us.size(); ++j) {
        // (1/4 pi) sum_p int over the full line, folded onto t >= 0
        cplx bkf = 2.0 * sums[j].value() / (4 * pi);
        InversionRow row{us[j], f(us[j]), pi * bkf, 0};
        row.rel_err = std::abs(row.pi_bkf - row.f_value) / std::max(std::abs(row.f_value), 1e-300);
        out.push_back(row);
    }
    return out;
}

}  // namespace gk
