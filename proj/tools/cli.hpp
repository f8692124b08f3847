// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gk/cusps.hpp"
#include "gk/gaussint.hpp"
#include "gk/numeric.hpp"

namespace gk::cli {

enum ExitCode { ok = 0, domain_failure = 1, verification_failure = 2, inconclusive = 3 };

// Every flag of every subcommand. Defaults are the values used when a flag is absent.
struct RunConfig {
    std::string subcommand;
    GaussInt q0{1};
    Cusp a = Cusp::inf(), b = Cusp::inf();
    GaussInt w1{1}, w2{1}, c{1};
    double P = 2, K = 2, sigma = 0.75;
    double N = 25, psi = 0, cutoff = 20;
    int M = 0;
    std::string method, mode, family = "ones", suite, budget = "fast", format = "json", out;
    std::uint64_t seed = 1;
    int threads = 1;
    bool list = false, alternate = false;
    // bessel / btransform / sieve arguments
    int n = 0, p = 0;
    cplx nu{0, 0}, z{1, 0}, u{1, 0}, s{1, 0};
    double y = 1, Delta = 1, T = 1, alpha = 1, beta = 0;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
    // Flags that parse back to this configuration.
    std::vector<std::string> to_args() const;
};

// "1.5-2i", "3", "-i"; throws parse_error with the offending position.
cplx parse_complex(const std::string& text);
std::string format_complex(cplx z);

// Parses argv (without the program name). Throws parse_error, config_error or domain_error.
RunConfig parse_args(const std::vector<std::string>& args);

// Runs one command; output goes to `out` unless --out names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
    std::string module, name;
    bool pass = false;
    bool inconclusive = false;
    std::string detail;
    double seconds = 0;
};
const std::vector<std::string>& suite_names();
// Throws config_error for an unknown or empty suite or budget.
std::vector<CheckResult> verify(const std::string& suite, const std::string& budget, int threads);

}  // namespace gk::cli
