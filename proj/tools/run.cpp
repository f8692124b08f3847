// SPDX-License-Identifier: MIT
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"
#include "gk/bessel.hpp"
#include "gk/btransform.hpp"
#include "gk/kloosterman.hpp"
#include "gk/parallel.hpp"
#include "gk/sieve.hpp"

namespace gk::cli {

using json = nlohmann::ordered_json;

namespace {

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

double parse_double(const std::string& text, std::size_t offset) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw parse_error("expected a real number", offset);
    }
    if (used != text.size()) throw parse_error("trailing characters in real number", offset + used);
    return v;
}

}  // namespace

cplx parse_complex(const std::string& raw) {
    std::string t;
    std::size_t lead = raw.find_first_not_of(" \t");
    if (lead == std::string::npos) throw parse_error("empty complex number", 0);
    t = raw.substr(lead, raw.find_last_not_of(" \t") - lead + 1);
    if (t.back() != 'i') return {parse_double(t, lead), 0};
    // split at the last sign that is not leading and not part of an exponent
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size() - 1; k > 0; --k)
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    std::string re_part = split == std::string::npos ? "" : t.substr(0, split);
    std::string im_part = t.substr(split == std::string::npos ? 0 : split, t.size() - 1 - (split == std::string::npos ? 0 : split));
    double re = re_part.empty() ? 0 : parse_double(re_part, lead);
    double im;
    std::size_t im_off = lead + (split == std::string::npos ? 0 : split);
    if (im_part.empty() || im_part == "+")
        im = 1;
    else if (im_part == "-")
        im = -1;
    else
        im = parse_double(im_part, im_off);
    return {re, im};
}

std::string format_complex(cplx z) {
    std::string im = fmt_double(z.imag());
    if (im[0] != '-') im = "+" + im;
    return fmt_double(z.real()) + im + "i";
}

std::vector<std::string> RunConfig::to_args() const {
    std::vector<std::string> v{subcommand};
    auto add = [&](const std::string& k, const std::string& val) {
        v.push_back("--" + k);
        v.push_back(val);
    };
    add("q0", to_string(q0));
    add("a", to_string(a));
    add("b", to_string(b));
    add("w1", to_string(w1));
    add("w2", to_string(w2));
    add("c", to_string(c));
    add("P", fmt_double(P));
    add("K", fmt_double(K));
    add("sigma", fmt_double(sigma));
    add("N", fmt_double(N));
    add("M", std::to_string(M));
    add("psi", fmt_double(psi));
    add("cutoff", fmt_double(cutoff));
    if (!method.empty()) add("method", method);
    if (!mode.empty()) add("mode", mode);
    add("family", family);
    if (!suite.empty()) add("suite", suite);
    add("budget", budget);
    add("format", format);
    if (!out.empty()) add("out", out);
    add("seed", std::to_string(seed));
    add("threads", std::to_string(threads));
    if (list) v.push_back("--list");
    if (alternate) v.push_back("--alternate");
    add("n", std::to_string(n));
    add("p", std::to_string(p));
    add("nu", format_complex(nu));
    add("z", format_complex(z));
    add("u", format_complex(u));
    add("s", format_complex(s));
    add("y", fmt_double(y));
    add("Delta", fmt_double(Delta));
    add("T", fmt_double(T));
    add("alpha", fmt_double(alpha));
    add("beta", fmt_double(beta));
    return v;
}

namespace {

const std::vector<std::string> subcommands{"cusps", "kloosterman", "delta",  "bessel",
                                           "btransform", "geom",     "sieve", "verify"};

struct Parser {
    CLI::App app{"Kloosterman sums, Bessel transforms and large-sieve checks over Z[i]"};
    RunConfig cfg;
    std::string q0 = "1", a = "inf", b = "inf", w1 = "1", w2 = "1", c = "1";
    std::string nu = "0", z = "1", u = "1", s = "1";
    std::string threads = "1";
    bool suite_given = false;

    Parser() {
        app.require_subcommand(1);
        for (const auto& name : subcommands) app.add_subcommand(name)->fallthrough();
        app.add_option("--q0", q0, "level q0 as a Gaussian integer, e.g. 1+1i");
        app.add_option("--a", a, "first cusp: inf or u/w");
        app.add_option("--b", b, "second cusp: inf or u/w");
        app.add_option("--w1", w1, "first frequency");
        app.add_option("--w2", w2, "second frequency");
        app.add_option("--c", c, "modulus C; the Kloosterman modulus is C sqrt(v1 v2)");
        app.add_option("--P", cfg.P);
        app.add_option("--K", cfg.K);
        app.add_option("--sigma", cfg.sigma);
        app.add_option("--N", cfg.N);
        app.add_option("--M", cfg.M);
        app.add_option("--psi", cfg.psi);
        app.add_option("--cutoff", cfg.cutoff, "modulus cutoff X");
        app.add_option("--method", cfg.method);
        app.add_option("--mode", cfg.mode, "sieve: usum, esum, prop2, linnik");
        app.add_option("--family", cfg.family, "coefficients: ones, spike, random_phase, twist");
        app.add_option("--suite", cfg.suite)->each([this](const std::string&) { suite_given = true; });
        app.add_option("--budget", cfg.budget, "fast or full");
        app.add_option("--format", cfg.format, "json or csv");
        app.add_option("--out", cfg.out, "output file");
        app.add_option("--seed", cfg.seed);
        app.add_option("--threads", threads, "worker count, 0 or auto for all cores");
        app.add_flag("--list", cfg.list);
        app.add_flag("--alternate", cfg.alternate, "alternate formula of the chosen method");
        app.add_option("--n", cfg.n);
        app.add_option("--p", cfg.p);
        app.add_option("--nu", nu);
        app.add_option("--z", z);
        app.add_option("--u", u);
        app.add_option("--s", s);
        app.add_option("--y", cfg.y);
        app.add_option("--Delta", cfg.Delta);
        app.add_option("--T", cfg.T);
        app.add_option("--alpha", cfg.alpha);
        app.add_option("--beta", cfg.beta);
    }

    RunConfig finish() {
        for (auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();
        auto field = [](const std::string& flag, auto&& fn) {
            try {
                return fn();
            } catch (const parse_error& e) {
                std::string msg = e.what();
                msg = msg.substr(0, msg.rfind(" at position"));
                throw parse_error("--" + flag + ": " + msg, e.position);
            }
        };
        cfg.q0 = field("q0", [&] { return parse_gaussint(q0); });
        cfg.a = field("a", [&] { return parse_cusp(a); });
        cfg.b = field("b", [&] { return parse_cusp(b); });
        cfg.w1 = field("w1", [&] { return parse_gaussint(w1); });
        cfg.w2 = field("w2", [&] { return parse_gaussint(w2); });
        cfg.c = field("c", [&] { return parse_gaussint(c); });
        cfg.nu = field("nu", [&] { return parse_complex(nu); });
        cfg.z = field("z", [&] { return parse_complex(z); });
        cfg.u = field("u", [&] { return parse_complex(u); });
        cfg.s = field("s", [&] { return parse_complex(s); });
        cfg.threads = threads == "auto" ? 0 : std::stoi(threads);
        if (cfg.format != "json" && cfg.format != "csv") throw config_error("--format must be json or csv");
        if (cfg.budget != "fast" && cfg.budget != "full") throw config_error("--budget must be fast or full");
        if (cfg.subcommand == "verify" && suite_given && cfg.suite.empty())
            throw config_error("--suite needs a suite name");
        if (cfg.subcommand == "verify" && cfg.suite.empty()) cfg.suite = "all";
        return cfg;
    }
};

// ---------------------------------------------------------------- commands

struct Output {
    json doc;
    std::string csv;  // a table when the command has one
    int code = ok;
};

std::string flat_csv(const json& doc) {
    std::ostringstream os;
    os << "key,value\n";
    for (const auto& [k, v] : doc.items()) os << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    return os.str();
}

json frame_json(const CuspFrame& f) {
    json j;
    j["cusp"] = to_string(f.cusp);
    j["u"] = to_string(f.u);
    j["w"] = to_string(f.w);
    j["v"] = to_string(f.v);
    j["mu_inv"] = to_string(f.mu_inv);
    j["stab_index"] = f.stab_index;
    j["beta"] = f.beta ? cj(*f.beta) : json(nullptr);
    return j;
}

json value_json(const KloostermanValue& v) {
    json j;
    j["value"] = cj(v.value);
    j["terms"] = v.terms;
    j["err"] = v.err;
    return j;
}

Output cmd_cusps(const RunConfig& cfg) {
    Output o;
    auto reps = class_representatives(cfg.q0);
    const auto zeta2 = hecke_zeta_partial(cplx(2, 0), 0, 1e5);
    const auto iv = index_and_covolume(cfg.q0, zeta2.value);
    o.doc["q0"] = to_string(cfg.q0);
    o.doc["count"] = reps.size();
    o.doc["count_formula"] = class_count_formula(cfg.q0);
    o.doc["index"] = iv.index;
    o.doc["covolume"] = iv.vol;
    if (cfg.list) {
        o.doc["classes"] = json::array();
        std::ostringstream csv;
        csv << "cusp,u,w,v,mu_inv,stab_index\n";
        for (const auto& f : reps) {
            o.doc["classes"].push_back(frame_json(f));
            csv << to_string(f.cusp) << ',' << to_string(f.u) << ',' << to_string(f.w) << ',' << to_string(f.v)
                << ',' << to_string(f.mu_inv) << ',' << f.stab_index << '\n';
        }
        o.csv = csv.str();
    }
    if (std::int64_t(reps.size()) != class_count_formula(cfg.q0)) o.code = verification_failure;
    return o;
}

Output cmd_kloosterman(const RunConfig& cfg) {
    Output o;
    const auto f1 = make_frame(cfg.a, cfg.q0), f2 = make_frame(cfg.b, cfg.q0);
    const std::string method = cfg.method.empty() ? "general" : cfg.method;
    o.doc["method"] = method;
    o.doc["c"] = cj(cfg.c.to_complex() * f1.sqrt_v() * f2.sqrt_v());
    if (method == "general") {
        o.doc.update(value_json(kloosterman_general(f1, f2, cfg.w1, cfg.w2, cfg.c)));
    } else if (method == "classical") {
        o.doc.update(value_json(kloosterman_classical(cfg.w1, cfg.w2, cfg.c)));
    } else if (method == "samecusp") {
        if (!(f1.cusp == f2.cusp)) throw domain_error("samecusp needs --a equal to --b");
        o.doc.update(value_json(kloosterman_samecusp(f1, cfg.w1, cfg.w2, cfg.c * f1.v)));
    } else if (method == "factor") {
        auto parts = kloosterman_factor(f1, f2, cfg.w1, cfg.w2, cfg.c);
        cplx prod = parts.general_part.value * parts.simple_part.value;
        o.doc["value"] = cj(prod);
        o.doc["general_part"] = cj(parts.general_part.value);
        o.doc["simple_part"] = cj(parts.simple_part.value);
        cplx direct = kloosterman_general(f1, f2, cfg.w1, cfg.w2, cfg.c).value;
        o.doc["direct"] = cj(direct);
        if (std::abs(prod - direct) > 1e-9) o.code = verification_failure;
    } else if (method == "brute") {
        auto r = kloosterman_bruteforce(f1, f2, cfg.w1, cfg.w2, cfg.c);
        o.doc.update(value_json(r.value));
        o.doc["status"] = to_string(r.status);
        o.doc["height"] = r.height;
        if (r.status == BruteStatus::inconclusive) o.code = inconclusive;
    } else {
        throw config_error("unknown kloosterman method: " + method);
    }
    return o;
}

Output cmd_delta(const RunConfig& cfg) {
    Output o;
    const auto f1 = make_frame(cfg.a, cfg.q0), f2 = make_frame(cfg.b, cfg.q0);
    const std::string method = cfg.method.empty() ? "formula" : cfg.method;
    o.doc["method"] = method;
    if (method == "formula") {
        auto d = delta_term(f1, f2, cfg.w1, cfg.w2);
        o.doc["value"] = cj(d.value);
        o.doc["contributing_cosets"] = d.contributing_cosets;
    } else if (method == "brute") {
        CosetEnumerator en(f1, f2, 1);
        auto d = delta_term_bruteforce(en, cfg.w1, cfg.w2);
        o.doc["value"] = cj(d.term.value);
        o.doc["contributing_cosets"] = d.term.contributing_cosets;
        o.doc["status"] = to_string(d.status);
        o.doc["height"] = d.height;
        if (d.status == BruteStatus::inconclusive) o.code = inconclusive;
    } else {
        throw config_error("unknown delta method: " + method);
    }
    return o;
}

Output cmd_bessel(const RunConfig& cfg) {
    Output o;
    const std::string method = cfg.method.empty() ? "jint" : cfg.method;
    o.doc["method"] = method;
    if (method == "jint") {
        o.doc["value"] = cj(bessel_j_int(cfg.n, cfg.z));
    } else if (method == "jstar") {
        o.doc["value"] = cj(bessel_j_star(cfg.nu, cfg.z));
    } else if (method == "kernel") {
        o.doc["value"] = cj(kernel_K(cfg.nu, cfg.p, cfg.z));
    } else if (method == "kernel_integral") {
        o.doc["value"] = cj(kernel_K_integral(cfg.nu, cfg.p, cfg.z));
    } else if (method == "graf") {
        o.doc["residual"] = graf_residual(cfg.p, cfg.u, cfg.y, cfg.M);
    } else if (method == "G") {
        o.doc["value"] = cj(gauss_fourier_G(cfg.n, cfg.y));
    } else {
        throw config_error("unknown bessel method: " + method);
    }
    return o;
}

Output cmd_btransform(const RunConfig& cfg) {
    Output o;
    TestParams prm{cfg.P, cfg.K, cfg.sigma};
    BTransformConfig bc;
    bc.method = parse_bmethod(cfg.method.empty() ? "bessel_1d" : cfg.method);
    bc.alternate = cfg.alternate;
    bc.M = cfg.M;
    bc.Delta = cfg.Delta;
    auto r = b_transform(prm, cfg.u, bc);
    o.doc["method"] = to_string(bc.method);
    o.doc["u"] = cj(cfg.u);
    o.doc["value"] = cj(r.value);
    o.doc["err"] = r.err;
    if (bc.method == BMethod::lemma46_triple) {
        o.doc["M"] = r.M;
        o.doc["envelope"] = r.envelope;
    }
    return o;
}

Output cmd_geom(const RunConfig& cfg) {
    Output o;
    const auto f1 = make_frame(cfg.a, cfg.q0), f2 = make_frame(cfg.b, cfg.q0);
    auto g = geometric_side(f1, f2, cfg.w1, cfg.w2, TestParams{cfg.P, cfg.K, cfg.sigma}, cfg.cutoff);
    o.doc["delta_part"] = cj(g.delta_part);
    o.doc["kloosterman_part"] = cj(g.kloosterman_part);
    o.doc["tail_envelope"] = g.tail_envelope;
    o.doc["c_b"] = g.c_b;
    o.doc["moduli"] = g.moduli;
    return o;
}

CoeffFamily parse_family(const std::string& s) {
    for (auto f : {CoeffFamily::ones, CoeffFamily::spike, CoeffFamily::random_phase, CoeffFamily::twist})
        if (to_string(f) == s) return f;
    throw config_error("unknown coefficient family: " + s);
}

Output cmd_sieve(const RunConfig& cfg) {
    Output o;
    const std::string mode = cfg.mode.empty() ? "prop2" : cfg.mode;
    o.doc["mode"] = mode;
    if (mode == "usum") {
        const auto f = make_frame(cfg.a, cfg.q0);
        auto b = make_coeffs(parse_family(cfg.family), cfg.N, cfg.seed);
        o.doc["c"] = to_string(cfg.c * f.v);
        o.doc["value"] = u_sum(f, cfg.psi, cfg.c, cfg.M, b);
        o.doc["norm_b"] = b.norm();
    } else if (mode == "esum") {
        auto a = make_coeffs(parse_family(cfg.family), cfg.N, cfg.seed);
        double v = e_sum(cfg.c, a, cfg.M, cfg.T, cfg.alpha, cfg.beta);
        double env = e_sum_envelope(cfg.c, a, cfg.M, cfg.T, cfg.alpha, cfg.beta);
        o.doc["value"] = v;
        o.doc["envelope"] = env;
        o.doc["ratio"] = v / env;
    } else if (mode == "linnik") {
        const auto f1 = make_frame(cfg.a, cfg.q0), f2 = make_frame(cfg.b, cfg.q0);
        auto r = linnik_selberg_partial(f1, f2, cfg.w1, cfg.w2, cfg.s, cfg.cutoff);
        o.doc["Z_partial"] = cj(r.Z_partial);
        o.doc["zeta_partial"] = cj(r.zeta_partial);
        o.doc["tail"] = r.tail;
        o.doc["zeta_tail"] = r.zeta_tail;
        o.doc["bound"] = r.bound;
    } else if (mode == "prop2") {
        Prop2Grid grid;
        grid.seed = cfg.seed;
        grid.threads = resolve_threads(cfg.threads);
        if (cfg.budget == "fast") {
            grid.q0s = {GaussInt(1), GaussInt(1, 1)};
            grid.Ns = {25, 50, 100};
            grid.Ms = {0, 5};
            grid.moduli_per_frame = 2;
        }
        auto rep = prop2_sweep(grid);
        o.doc = json::parse(rep.to_json());
        o.csv = rep.to_csv();
        for (const auto& bname : rep.bounds())
            if (rep.blow_up(bname)) o.code = verification_failure;
    } else {
        throw config_error("unknown sieve mode: " + mode);
    }
    return o;
}

Output cmd_verify(const RunConfig& cfg) {
    Output o;
    auto results = verify(cfg.suite, cfg.budget, resolve_threads(cfg.threads));
    o.doc["suite"] = cfg.suite;
    o.doc["budget"] = cfg.budget;
    o.doc["checks"] = json::array();
    std::ostringstream csv;
    csv << "module,name,status,detail\n";
    bool fail = false, inc = false;
    for (const auto& r : results) {
        const char* status = r.pass ? "pass" : (r.inconclusive ? "inconclusive" : "fail");
        json j;
        j["module"] = r.module;
        j["name"] = r.name;
        j["status"] = status;
        j["detail"] = r.detail;
        j["seconds"] = std::round(r.seconds * 1000) / 1000;
        o.doc["checks"].push_back(j);
        csv << r.module << ',' << r.name << ',' << status << ",\"" << r.detail << "\"\n";
        fail |= !r.pass && !r.inconclusive;
        inc |= r.inconclusive;
    }
    o.doc["pass"] = !fail && !inc;
    o.csv = csv.str();
    o.code = fail ? verification_failure : (inc ? inconclusive : ok);
    return o;
}

}  // namespace

RunConfig parse_args(const std::vector<std::string>& args) {
    Parser p;
    std::vector<std::string> rev(args.rbegin(), args.rend());
    p.app.parse(rev);
    return p.finish();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = parse_args(args);
    } catch (const CLI::CallForHelp&) {
        Parser p;
        out << p.app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return domain_failure;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return domain_failure;
    } catch (const std::exception& e) {
        err << "usage error: " << e.what() << "\n";
        return domain_failure;
    }
    Output o;
    try {
        const std::string& sc = cfg.subcommand;
        if (sc == "cusps") o = cmd_cusps(cfg);
        else if (sc == "kloosterman") o = cmd_kloosterman(cfg);
        else if (sc == "delta") o = cmd_delta(cfg);
        else if (sc == "bessel") o = cmd_bessel(cfg);
        else if (sc == "btransform") o = cmd_btransform(cfg);
        else if (sc == "geom") o = cmd_geom(cfg);
        else if (sc == "sieve") o = cmd_sieve(cfg);
        else o = cmd_verify(cfg);
    } catch (const consistency_error& e) {
        err << "consistency error: " << e.what() << "\n";
        return verification_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return domain_failure;
    }
    std::string text = cfg.format == "csv" ? (o.csv.empty() ? flat_csv(o.doc) : o.csv) : o.doc.dump(2) + "\n";
    if (cfg.out.empty()) {
        out << text;
    } else {
        std::ofstream f(cfg.out);
        if (!f) {
            err << "error: cannot write " << cfg.out << "\n";
            return domain_failure;
        }
        f << text;
    }
    return o.code;
}

}  // namespace gk::cli
