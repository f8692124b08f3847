// SPDX-License-Identifier: MIT
#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "cli.hpp"

using namespace gk;
using namespace gk::cli;

namespace {

struct Ran {
    int code;
    std::string out, err;
};

Ran run_args(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("complex parsing") {
    CHECK(parse_complex("1.5-2i") == cplx(1.5, -2));
    CHECK(parse_complex("3") == cplx(3, 0));
    CHECK(parse_complex("-i") == cplx(0, -1));
    CHECK(parse_complex("2e-3+1e2i") == cplx(2e-3, 100));
    CHECK(parse_complex(format_complex(cplx(0.1, -1e-20))) == cplx(0.1, -1e-20));
    CHECK_THROWS_AS(parse_complex(""), parse_error);
    CHECK_THROWS_AS(parse_complex("1+xi"), parse_error);
}

TEST_CASE("run configuration round trips through its flags") {
    auto cfg = parse_args({"sieve", "--q0", "2+1i", "--a", "1/2", "--w1", "-1-1i", "--N", "50", "--M", "3", "--psi",
                           "0.1", "--family", "twist", "--seed", "42", "--nu", "0.2+3i", "--list", "--mode", "usum"});
    CHECK(cfg.q0 == GaussInt(2, 1));
    CHECK(cfg.w1 == GaussInt(-1, -1));
    CHECK(cfg.list);
    CHECK(parse_args(cfg.to_args()) == cfg);
    auto v = parse_args({"verify"});
    CHECK(v.suite == "all");
    CHECK(parse_args(v.to_args()) == v);
}

TEST_CASE("usage errors") {
    CHECK_THROWS_AS(parse_args({"verify", "--suite", ""}), config_error);
    CHECK(run_args({"verify", "--suite", ""}).code == domain_failure);
    CHECK(run_args({"verify", "--suite", "bogus"}).code == domain_failure);
    CHECK(run_args({}).code == domain_failure);
    CHECK(run_args({"cusps", "--q0", "1+"}).code == domain_failure);
    CHECK(run_args({"cusps", "--format", "xml"}).code == domain_failure);
    CHECK_THROWS(verify("", "fast", 1));
}

TEST_CASE("cusps example") {
    auto r = run_args({"cusps", "--q0", "1+1i", "--list"});
    REQUIRE(r.code == ok);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["count"] == 2);
    CHECK(j["classes"].size() == 2);
    CHECK(j["index"] == 3);
}

TEST_CASE("kloosterman example") {
    auto r = run_args({"kloosterman", "--q0", "1", "--a", "inf", "--b", "inf", "--w1", "1", "--w2", "1", "--c", "1+1i"});
    REQUIRE(r.code == ok);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["value"][0].get<double>() == doctest::Approx(1));
    CHECK(j["value"][1].get<double>() == doctest::Approx(0).epsilon(1e-12));
    auto b = run_args({"kloosterman", "--q0", "1", "--c", "2+1i", "--method", "brute"});
    CHECK(b.code == ok);
    CHECK(nlohmann::json::parse(b.out)["status"] == "stabilized");
}

TEST_CASE("csv output and determinism") {
    auto a = run_args({"cusps", "--q0", "3", "--list", "--format", "csv"});
    auto b = run_args({"cusps", "--q0", "3", "--list", "--format", "csv"});
    CHECK(a.code == ok);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("cusp,u,w", 0) == 0);
}

TEST_CASE("other subcommands run") {
    CHECK(run_args({"delta", "--q0", "2", "--w1", "1", "--w2", "1"}).code == ok);
    CHECK(run_args({"bessel", "--method", "kernel", "--nu", "0+1i", "--p", "1", "--z", "1+1i"}).code == ok);
    CHECK(run_args({"btransform", "--u", "1+1i", "--method", "bessel_1d"}).code == ok);
    CHECK(run_args({"sieve", "--mode", "esum", "--N", "10", "--M", "1", "--c", "1+1i"}).code == ok);
    CHECK(run_args({"sieve", "--mode", "usum", "--q0", "3", "--c", "1"}).code == domain_failure);
}

TEST_CASE("verify suite selection") {
    auto rs = verify("cusps", "fast", 1);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].pass);
    for (const auto& name : suite_names()) CHECK_FALSE(name.empty());
}
