// SPDX-License-Identifier: MIT
#include "gk/sieve.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <map>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "gk/bessel.hpp"
#include "gk/kloosterman.hpp"
#include "gk/parallel.hpp"

namespace gk {

namespace {

double absg(const GaussInt& z) { return std::sqrt(double(z.norm())); }

bool in_annulus(const GaussInt& w, double N) {
    double n = double(w.norm());
    return n > N / 2 && n <= N;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(12) << x;
    return os.str();
}

}  // namespace

std::vector<GaussInt> annulus_points(double N) {
    if (!(N >= 1)) throw domain_error("annulus_points: need N >= 1");
    std::vector<GaussInt> out;
    auto r = static_cast<std::int64_t>(std::floor(std::sqrt(N))) + 1;
    for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b)
            if (in_annulus({a, b}, N)) out.push_back({a, b});
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- coefficients

CoeffVector::CoeffVector(double N) : N_(N) {
    if (!(N >= 1)) throw domain_error("CoeffVector: need N >= 1");
}

void CoeffVector::set(const GaussInt& w, cplx value) {
    if (!in_annulus(w, N_)) throw domain_error("CoeffVector: " + to_string(w) + " is off the annulus");
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) throw domain_error("CoeffVector: non-finite");
    entries_[w] = value;
}

cplx CoeffVector::operator[](const GaussInt& w) const {
    auto it = entries_.find(w);
    return it == entries_.end() ? cplx(0) : it->second;
}

double CoeffVector::norm() const {
    double s = 0;
    for (const auto& [w, b] : entries_) s += std::norm(b);
    return std::sqrt(s);
}

std::string to_string(CoeffFamily f) {
    switch (f) {
        case CoeffFamily::ones: return "ones";
        case CoeffFamily::spike: return "spike";
        case CoeffFamily::random_phase: return "random_phase";
        case CoeffFamily::twist: return "twist";
    }
    return "?";
}

CoeffVector make_coeffs(CoeffFamily family, double N, std::uint64_t seed) {
    CoeffVector b(N);
    const auto pts = annulus_points(N);
    if (pts.empty()) throw domain_error("make_coeffs: empty annulus");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    switch (family) {
        case CoeffFamily::ones:
            for (const auto& w : pts) b.set(w, 1.0);
            break;
        case CoeffFamily::spike: b.set(pts.front(), 1.0); break;
        case CoeffFamily::random_phase:
            for (const auto& w : pts) b.set(w, e(unif(rng)));
            break;
        case CoeffFamily::twist: {
            cplx beta(unif(rng), unif(rng));
            for (const auto& w : pts) b.set(w, e((beta * w.to_complex()).real()));
            break;
        }
    }
    return b;
}

// ---------------------------------------------------------------- sweep reports

void SweepReport::add(SweepRow row) {
    if (!(row.envelope > 0)) throw consistency_error("SweepReport: envelope must be positive");
    row.ratio = row.lhs / row.envelope;
    rows_.push_back(std::move(row));
}

std::vector<std::string> SweepReport::bounds() const {
    std::vector<std::string> out;
    for (const auto& r : rows_)
        if (std::find(out.begin(), out.end(), r.bound) == out.end()) out.push_back(r.bound);
    return out;
}

double SweepReport::max_ratio(const std::string& bound) const {
    const SweepRow* r = argmax(bound);
    return r ? r->ratio : 0.0;
}

const SweepRow* SweepReport::argmax(const std::string& bound) const {
    const SweepRow* best = nullptr;
    for (const auto& r : rows_)
        if (r.bound == bound && (!best || r.ratio > best->ratio)) best = &r;
    return best;
}

namespace {
std::optional<double> param_value(const SweepRow& r, const std::string& key) {
    for (const auto& [k, v] : r.params)
        if (k == key) return std::stod(v);
    return std::nullopt;
}
}  // namespace

bool SweepReport::blow_up(const std::string& bound, const std::string& key, double factor) const {
    std::set<double> values;
    for (const auto& r : rows_)
        if (r.bound == bound)
            if (auto v = param_value(r, key)) values.insert(*v);
    if (values.size() < 2) return false;
    std::vector<double> sorted(values.begin(), values.end());
    const std::size_t k = std::max<std::size_t>(1, sorted.size() / 3);
    const double low_cut = sorted[k - 1], high_cut = sorted[sorted.size() - k];
    double low = 0, high = 0;
    for (const auto& r : rows_) {
        if (r.bound != bound) continue;
        auto v = param_value(r, key);
        if (!v) continue;
        if (!std::isfinite(r.ratio)) return true;
        if (*v <= low_cut) low = std::max(low, r.ratio);
        if (*v >= high_cut) high = std::max(high, r.ratio);
    }
    return high > factor * low;
}

std::string SweepReport::to_csv() const {
    std::ostringstream os;
    if (rows_.empty()) return "bound,lhs,envelope,ratio\n";
    for (const auto& [k, v] : rows_.front().params) os << k << ',';
    os << "bound,lhs,envelope,ratio\n";
    for (const auto& r : rows_) {
        for (const auto& [k, v] : r.params) os << v << ',';
        os << r.bound << ',' << fmt(r.lhs) << ',' << fmt(r.envelope) << ',' << fmt(r.ratio) << '\n';
    }
    return os.str();
}

std::string SweepReport::to_json() const {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows_) {
        nlohmann::ordered_json row;
        for (const auto& [k, v] : r.params) row["params"][k] = v;
        row["bound"] = r.bound;
        row["lhs"] = r.lhs;
        row["envelope"] = r.envelope;
        row["ratio"] = r.ratio;
        j["rows"].push_back(row);
    }
    for (const auto& b : bounds()) {
        const SweepRow* a = argmax(b);
        nlohmann::ordered_json s;
        s["max_ratio"] = a->ratio;
        for (const auto& [k, v] : a->params) s["argmax"][k] = v;
        s["blow_up"] = blow_up(b);
        j["summary"][b] = s;
    }
    return j.dump(2);
}

// ---------------------------------------------------------------- U-sums

USumEvaluator::USumEvaluator(const CuspFrame& frame, const GaussInt& C, double N) : N_(N) {
    if (C.is_zero() || !admissible_modulus(frame, frame, C))
        throw domain_error("u_sum: " + to_string(C) + " is not an admissible modulus for this cusp");
    c_ = C * frame.v;
    SameCuspTable table(frame, c_);
    if (!table.admissible()) throw domain_error("u_sum: empty Kloosterman sum for this modulus");
    pts_ = annulus_points(N);
    const std::size_t n = pts_.size();
    S_.assign(n * n, cplx(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) S_[i * n + j] = table.evaluate(pts_[i], pts_[j]).value;
}

double USumEvaluator::evaluate(double psi, int M, const CoeffVector& b) const {
    if (M < 0) throw domain_error("u_sum: M < 0");
    if (!std::isfinite(psi)) throw domain_error("u_sum: psi must be finite");
    if (b.N() != N_) throw domain_error("u_sum: coefficient vector has a different N");
    const std::size_t n = pts_.size();
    const double absc = absg(c_);
    std::vector<cplx> bv(n), g(n);
    std::vector<double> rt(n);  // |omega|^{1/2}
    for (std::size_t i = 0; i < n; ++i) {
        bv[i] = b[pts_[i]];
        cplx w = pts_[i].to_complex();
        g[i] = w / std::abs(w);
        rt[i] = std::sqrt(std::abs(w));
    }
    // W = S e(psi sqrt|w1 w2| / |c|); the character (w1 w2/|w1 w2|)^m splits as g1^m g2^m
    std::vector<cplx> W(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) W[i * n + j] = S_[i * n + j] * e(psi * rt[i] * rt[j] / absc);
    double total = 0;
    std::vector<cplx> x(n), y(n);
    for (int m = -M; m <= M; ++m) {
        for (std::size_t i = 0; i < n; ++i) {
            cplx gm = std::pow(g[i], m);
            x[i] = std::conj(bv[i]) * gm;
            y[i] = bv[i] * gm;
        }
        CompensatedSum s;
        for (std::size_t i = 0; i < n; ++i) {
            if (x[i] == cplx(0)) continue;
            cplx row = 0;
            for (std::size_t j = 0; j < n; ++j) row += W[i * n + j] * y[j];
            s.add(x[i] * row);
        }
        total += std::abs(s.value());
    }
    return total;
}

double u_sum(const CuspFrame& frame, double psi, const GaussInt& C, int M, const CoeffVector& b) {
    return USumEvaluator(frame, C, b.N()).evaluate(psi, M, b);
}

// ---------------------------------------------------------------- E-sums

double e_sum(const GaussInt& c, const CoeffVector& a, int M, double T, double alpha, double beta) {
    if (c.is_zero()) throw domain_error("e_sum: c = 0");
    if (alpha == 0) throw domain_error("e_sum: alpha = 0");
    if (M <= 0 || !(T > 0)) throw domain_error("e_sum: need M, T > 0");
    std::vector<GaussInt> ws;
    std::vector<cplx> coef;
    for (const auto& [w, v] : a.entries())
        if (v != cplx(0)) {
            ws.push_back(w);
            coef.push_back(v);
        }
    if (ws.empty()) return 0;
    const std::size_t n = ws.size();
    auto f = [&](double x) {
        return beta == -1 ? alpha * std::log(x) : alpha * std::pow(x, beta + 1) / (beta + 1);
    };
    std::vector<double> fw(n);
    std::vector<cplx> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::sqrt(double(ws[i].norm()));
        fw[i] = f(r);
        g[i] = ws[i].to_complex() / r;
    }
    // |s|^2 oscillates in t at frequencies f(|w1|) - f(|w2|); panels cover at most half a period
    const double spread = *std::max_element(fw.begin(), fw.end()) - *std::min_element(fw.begin(), fw.end());
    const int panels = std::max(2, static_cast<int>(std::ceil(2 * T * spread / 0.5)));
    using boost::math::quadrature::gauss;
    const auto& gx = gauss<double, 10>::abscissa();
    const auto& gw = gauss<double, 10>::weights();
    std::vector<double> ts, wts;
    const double h = 2 * T / panels;
    for (int k = 0; k < panels; ++k) {
        double mid = -T + (k + 0.5) * h;
        for (std::size_t i = 0; i < gx.size(); ++i)
            for (int sgn : {-1, 1}) {
                ts.push_back(mid + sgn * 0.5 * h * gx[i]);
                wts.push_back(0.5 * h * gw[i]);
            }
    }
    std::vector<cplx> phase(ts.size() * n);
    for (std::size_t k = 0; k < ts.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) phase[k * n + i] = e(ts[k] * fw[i]);
    const auto deltas = residues(c);
    const cplx cc = c.to_complex();
    CompensatedSum total;
    std::vector<cplx> A(n);
    for (const auto& d : deltas) {
        for (int m = -M; m <= M; ++m) {
            for (std::size_t i = 0; i < n; ++i)
                A[i] = coef[i] * std::pow(g[i], m) * e((d.to_complex() * ws[i].to_complex() / cc).real());
            CompensatedSum part;
            for (std::size_t k = 0; k < ts.size(); ++k) {
                cplx s = 0;
                for (std::size_t i = 0; i < n; ++i) s += A[i] * phase[k * n + i];
                part.add(wts[k] * std::norm(s));
            }
            total.add(part.value());
        }
    }
    return total.value().real();
}

double e_sum_envelope(const GaussInt& c, const CoeffVector& a, int M, double T, double alpha, double beta) {
    if (c.is_zero() || alpha == 0 || M <= 0 || !(T > 0)) throw domain_error("e_sum_envelope: bad parameters");
    const double N = a.N(), absc = absg(c), nb = a.norm();
    return (absc * (M + 1) + std::sqrt(N)) * (absc * T + std::pow(N, -beta / 2) / std::abs(alpha)) * nb * nb;
}

// ---------------------------------------------------------------- geometric side

namespace {

GaussInt gcd3(const GaussInt& a, const GaussInt& b, const GaussInt& c) { return gcd(gcd(a, b), c); }

double we_weight(const GaussInt& w1, const GaussInt& w2, const GaussInt& C, const GaussInt& q0) {
    auto st = multiplicative_stats(C);
    return double(st.tau_assoc) * absg(gcd3(w1, w2, C)) * absg(q0_part(C, q0).c_q0_prime);
}

// Upper bound for sum over 0 != C, |C| > Y of g(C) |C|^{-1-2 sigma}, given sum_{|C| <= y} g <= kappa y^2 log(y + e).
double divisor_tail(double kappa, double sigma, double Y) {
    Y = std::max(Y, std::exp(1.0));
    const double a = 2 * sigma, s = 1 + 2 * sigma;
    const double I = std::pow(Y, 1 - a) * (std::log(Y) / (a - 1) + 1 / ((a - 1) * (a - 1)) + 1 / (a - 1));
    return s * kappa * I;
}

double fit_kappa(const GaussInt& w1, const GaussInt& w2, const GaussInt& q0, double Y) {
    const auto r = static_cast<std::int64_t>(std::ceil(Y));
    std::vector<std::pair<double, double>> pts;  // (|C|, g)
    for (std::int64_t a = -r; a <= r; ++a)
        for (std::int64_t b = -r; b <= r; ++b) {
            GaussInt C{a, b};
            if (C.is_zero()) continue;
            double ac = absg(C);
            if (ac > Y) continue;
            pts.push_back({ac, we_weight(w1, w2, C, q0)});
        }
    std::sort(pts.begin(), pts.end());
    double D = 0, kappa = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        D += pts[i].second;
        if (i + 1 < pts.size() && pts[i + 1].first == pts[i].first) continue;
        double y = pts[i].first;
        kappa = std::max(kappa, D / (y * y * std::log(y + std::exp(1.0))));
    }
    // margin for the unsampled range
    return 1.25 * kappa;
}

}  // namespace

GeometricSide geometric_side(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& w1, const GaussInt& w2,
                             const TestParams& params, double X) {
    params.validate();
    if (w1.is_zero() || w2.is_zero()) throw domain_error("geometric_side: frequencies must be nonzero");
    const auto mods = allowed_moduli(f1, f2, X);
    if (mods.empty()) throw domain_error("geometric_side: X is below the smallest admissible modulus");
    GeometricSide out;
    const DeltaTerm dt = delta_term(f1, f2, w1, w2);
    out.delta_part = dt.value == cplx(0) ? cplx(0) : dt.value * diagonal_term(params).exact_numeric;

    const cplx root = std::sqrt(w1.to_complex() * w2.to_complex());
    BTransformConfig cfg;
    cfg.method = BMethod::bessel_1d;
    // (Bh)(-u) = (Bh)(u), so C and -C share one evaluation
    std::map<GaussInt, cplx> cache;
    auto bh = [&](const GaussInt& C, cplx u) {
        GaussInt key = (C.re < 0 || (C.re == 0 && C.im < 0)) ? -C : C;
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        cplx v = b_transform(params, u, cfg).value;
        cache.emplace(key, v);
        return v;
    };
    CompensatedSum acc;
    for (const auto& m : mods) {
        cplx S = kloosterman_general(f1, f2, w1, w2, m.C).value;
        if (std::abs(S) < 1e-12) continue;
        acc.add(S / m.abs2 * bh(m.C, two_pi * root / m.c));
    }
    out.kloosterman_part = acc.value();
    out.moduli = static_cast<std::int64_t>(mods.size());

    // |Bh(u)| <= C_B |u|^{2 sigma} measured on |u| <= u_X, the region every omitted term lives in
    const double sigma = std::min(params.sigma, 1.0);
    const double uX = two_pi * std::abs(root) / X;
    for (double rho : {1.0, 0.7, 0.5, 0.35, 0.25, 0.1})
        for (int k = 0; k < 8; ++k) {
            cplx u = std::polar(rho * uX, pi * k / 8);
            out.c_b = std::max(out.c_b, std::abs(b_transform(params, u, cfg).value) / std::pow(rho * uX, 2 * sigma));
        }

    // Weil-type bound for |S| summed over |c| > X: exact on (X, 2X], divisor-sum estimate beyond.
    const double K0 = std::sqrt(8.0) * double(f1.v.norm()) * double(f2.v.norm());
    const double rho0 = std::sqrt(absg(f1.v) * absg(f2.v));  // |c| = |C| rho0
    const double R = 2 * X;
    double near = 0;
    for (const auto& m : allowed_moduli(f1, f2, R)) {
        double ac = std::sqrt(m.abs2);
        if (ac <= X) continue;
        near += K0 * we_weight(w1, w2, m.C, f1.q0) * absg(m.C) / std::pow(ac, 2 + 2 * sigma);
    }
    const double Y = R / rho0;
    const double kappa = fit_kappa(w1, w2, f1.q0, Y);
    const double far = K0 * std::pow(rho0, -2 - 2 * sigma) * divisor_tail(kappa, sigma, Y);
    const double scale = out.c_b * std::pow(two_pi, 2 * sigma) * std::pow(std::abs(root), 2 * sigma);
    out.tail_envelope = scale * (near + far);
    return out;
}

// ---------------------------------------------------------------- Linnik-Selberg

LinnikSelberg linnik_selberg_partial(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& w1,
                                     const GaussInt& w2, cplx s, double X) {
    if (!(s.real() > 0.75)) throw domain_error("linnik_selberg_partial: needs Re s > 3/4");
    if (!(X >= 1)) throw domain_error("linnik_selberg_partial: needs X >= 1");
    if (w1.is_zero()) throw domain_error("linnik_selberg_partial: omega must be nonzero");
    LinnikSelberg out;
    const double sig = s.real();
    const cplx nu = 2.0 * s - 1.0;
    const cplx root = std::sqrt(w1.to_complex() * w2.to_complex());
    CompensatedSum Z, zeta;
    double abs_partial = 0;
    for (const auto& m : allowed_moduli(f1, f2, X)) {
        cplx S = kloosterman_general(f1, f2, w1, w2, m.C).value;
        double lc = std::log(m.abs2) / 2;
        cplx term = S * std::exp(-4.0 * s * lc);
        Z.add(term);
        abs_partial += std::abs(S) * std::exp(-4 * sig * lc);
        cplx z = two_pi * root / m.c;
        zeta.add(bessel_j_star(nu, z) * bessel_j_star(nu, std::conj(z)) * term);
    }
    const double index = f1.stab_index;
    out.Z_partial = Z.value();
    out.zeta_partial = zeta.value() / index;

    double div_sum = 0;  // over all Gaussian divisors of q0, associates included
    for (const auto& d : divisors(f1.q0)) div_sum += 4 / absg(d);
    const double zarg = 2 * sig - 0.5;
    auto zk = hecke_zeta_partial(cplx(zarg, 0), 0, 1e5);
    const double zeta_k = zk.value.real() + zk.tail_bound;
    const double mm = absg(f1.v) * absg(f2.v);
    out.bound = std::pow(2.0, -0.5) * absg(w1) * std::pow(mm, 2 - 2 * sig) * div_sum * div_sum * zeta_k * zeta_k;
    out.tail = std::max(0.0, out.bound - abs_partial);
    // |J*_nu(z)| <= |1/Gamma(nu + 1)| e^{|z|^2/4} for Re nu >= 0
    const double zX = two_pi * std::abs(root) / X;
    out.zeta_tail = std::norm(rgamma(nu + 1.0)) * std::exp(zX * zX / 2) * out.tail / index;
    return out;
}

// ---------------------------------------------------------------- bound sweep

SweepReport prop2_sweep(const Prop2Grid& grid) {
    for (double N : grid.Ns)
        if (!(N >= 1) || N > 200) throw domain_error("prop2_sweep: N must lie in [1, 200]");
    for (int M : grid.Ms)
        if (M < 0 || M > 20) throw domain_error("prop2_sweep: M must lie in [0, 20]");
    if (grid.max_c_norm < 1 || grid.max_c_norm > 400) throw domain_error("prop2_sweep: |c|^2 must be <= 400");

    struct Task {
        CuspFrame frame;
        GaussInt C;
        double N;
    };
    std::vector<Task> tasks;
    for (const auto& q0 : grid.q0s)
        for (const auto& frame : class_representatives(q0)) {
            auto mods = allowed_moduli(frame, frame, std::sqrt(double(grid.max_c_norm)));
            // one modulus per associate class, then evenly spaced picks by size
            std::vector<Modulus> reps;
            for (const auto& m : mods)
                if (canonical(m.C) == m.C) reps.push_back(m);
            if (reps.empty()) continue;
            const int k = std::min<int>(grid.moduli_per_frame, static_cast<int>(reps.size()));
            std::set<std::size_t> picks;
            for (int i = 0; i < k; ++i)
                picks.insert(k == 1 ? 0 : (reps.size() - 1) * static_cast<std::size_t>(i) / (k - 1));
            for (std::size_t idx : picks)
                for (double N : grid.Ns) tasks.push_back({frame, reps[idx].C, N});
        }

    auto run = [&](std::size_t t) {
        const Task& task = tasks[t];
        USumEvaluator U(task.frame, task.C, task.N);
        const GaussInt c = U.c();
        const double absc = absg(c), N = task.N;
        const auto st = multiplicative_stats(c);
        std::vector<SweepRow> rows;
        for (auto fam : grid.families) {
            const CoeffVector b = make_coeffs(fam, N, grid.seed);
            const double nb2 = b.norm() * b.norm();
            for (int M : grid.Ms)
                for (double psi : grid.psis) {
                    const double lhs = U.evaluate(psi, M, b);
                    std::vector<std::pair<std::string, std::string>> params{
                        {"q0", to_string(task.frame.q0)}, {"cusp", to_string(task.frame.cusp)},
                        {"c", to_string(c)},              {"N", fmt(N)},
                        {"M", std::to_string(M)},         {"psi", fmt(psi)},
                        {"family", to_string(fam)}};
                    auto add = [&](const std::string& name, double env) {
                        SweepRow r{params, name, lhs, env, 0};
                        r.ratio = lhs / env;
                        rows.push_back(std::move(r));
                    };
                    const double base = absc * (M + 1) * N * nb2;
                    add("divisor_tau_ideal", std::pow(double(st.tau_ideal), 1.5) * base);
                    add("divisor_tau_assoc", std::pow(double(st.tau_assoc), 1.5) * base);
                    add("mixed", std::sqrt(1 + std::abs(psi)) * (absc * (M + 1) + std::sqrt(N)) *
                                     (absc + std::sqrt(N)) * nb2);
                    const bool window = absc * absc <= grid.A1 * std::pow(N, 1 - grid.eps) && psi != 0 &&
                                        std::abs(psi) <= grid.A2;
                    if (window)
                        add("short_modulus", (1 / std::sqrt(std::abs(psi)) + 1) *
                                                 (std::sqrt(absc) * std::pow(N, 0.75) +
                                                  std::pow(absc, 1.5) * M * std::pow(N, 0.25)) *
                                                 std::pow(N, grid.eps) * nb2);
                }
        }
        return rows;
    };
    auto parts = parallel_map<std::vector<SweepRow>>(tasks.size(), run, grid.threads);
    SweepReport rep;
    for (auto& part : parts)
        for (auto& r : part) rep.add(std::move(r));
    return rep;
}

}  // namespace gk
