// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gk/cusps.hpp"
#include "gk/gaussint.hpp"
#include "gk/numeric.hpp"

namespace gk {

struct KloostermanValue {
    cplx value{0, 0};
    std::int64_t terms = 0;
    double err = 0;
};

// S(m, n; c) = sum over delta mod c coprime to c of e(Re((m delta* + n delta) / c)).
KloostermanValue kloosterman_classical(const GaussInt& m, const GaussInt& n, const GaussInt& c);

// Term list of the classical sum, reused across many (m, n).
class ClassicalTable {
public:
    explicit ClassicalTable(const GaussInt& c);
    KloostermanValue evaluate(const GaussInt& m, const GaussInt& n) const;
    const GaussInt& modulus() const { return c_; }

private:
    GaussInt c_;
    std::int64_t norm_;
    RootTable roots_;
    std::vector<std::pair<GaussInt, GaussInt>> terms_;  // (delta* conj c, delta conj c)
};

// Which scaling matrix the same-cusp sum refers to: pi tau_v (default, shared with the
// other evaluators) or the lower-triangular [[u sqrt v, 0], [w sqrt v, 1/(u sqrt v)]].
enum class SameCuspConvention { scaling, lower_triangular };

// The restricted (alpha, delta) sum for S_{a,a}(w1, w2; c'), c' = gamma v w.
class SameCuspTable {
public:
    SameCuspTable(const CuspFrame& frame, const GaussInt& cprime);
    bool admissible() const { return !pairs_.empty(); }
    KloostermanValue evaluate(const GaussInt& w1, const GaussInt& w2,
                              SameCuspConvention conv = SameCuspConvention::scaling) const;
    std::size_t size() const { return pairs_.size(); }
    const std::vector<std::pair<GaussInt, GaussInt>>& pairs() const { return pairs_; }  // (alpha, delta)
    const GaussInt& gamma() const { return gamma_; }
    const GaussInt& u1() const { return u1_; }
    const GaussInt& gamma1() const { return gamma1_; }

private:
    CuspFrame frame_;
    GaussInt cprime_, gamma_, u1_, gamma1_;
    std::int64_t norm_;
    RootTable roots_;
    std::vector<std::pair<GaussInt, GaussInt>> pairs_;
    std::vector<std::pair<GaussInt, GaussInt>> scaled_;  // (alpha conj c', delta conj c')
};

KloostermanValue kloosterman_samecusp(const CuspFrame& frame, const GaussInt& w1, const GaussInt& w2,
                                      const GaussInt& cprime,
                                      SameCuspConvention conv = SameCuspConvention::scaling);

// The (A, D) double sum for S_{a,b}(m, n; C sqrt(v1 v2)), with exact membership tests.
class GeneralTable {
public:
    GeneralTable(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& C);
    bool admissible() const { return !pairs_.empty(); }
    KloostermanValue evaluate(const GaussInt& m, const GaussInt& n) const;
    std::size_t size() const { return pairs_.size(); }
    const std::vector<std::pair<GaussInt, GaussInt>>& pairs() const { return pairs_; }  // (A, D)

private:
    GaussInt C_, m1_, m2_;  // m1 = v1 C, m2 = v2 C
    std::int64_t n1_, n2_;
    std::vector<std::pair<GaussInt, GaussInt>> pairs_;
};

// Membership of pi_a g(A, D; C) pi_b^-1 in Gamma_0(q0).
bool chi_q0(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& A, const GaussInt& D, const GaussInt& C);

KloostermanValue kloosterman_general(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& m, const GaussInt& n,
                                     const GaussInt& C);

struct FactorParts {
    KloostermanValue general_part, simple_part;
    GaussInt C_prime, C_q0, C_tilde;
    CuspFrame a2, b2;  // shifted cusps C~ u_j / w_j
};
FactorParts kloosterman_factor(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& m, const GaussInt& n,
                               const GaussInt& C);

enum class BruteStatus { stabilized, inconclusive };
std::string to_string(BruteStatus s);

// Enumerates gamma in Gamma_0(q0) with all entry norms <= H^2 and records, for each
// lower-left entry C of pi_a^-1 gamma pi_b with |C|^2 <= max_norm, the double cosets
// (A mod v1 C, D mod v2 C). C = 0 records (M11, M12 mod v1) for the delta term.
class CosetEnumerator {
public:
    using Key = std::pair<std::int64_t, std::int64_t>;
    using CosetSet = std::set<Key>;

    CosetEnumerator(const CuspFrame& f1, const CuspFrame& f2, std::int64_t max_norm);
    // Cosets found at height H (cached).
    const std::map<GaussInt, CosetSet, std::less<>>& at_height(int H);
    const CuspFrame& f1() const { return f1_; }
    const CuspFrame& f2() const { return f2_; }

private:
    CuspFrame f1_, f2_;
    std::int64_t max_norm_;
    std::map<int, std::map<GaussInt, CosetSet, std::less<>>> cache_;
};

struct BruteResult {
    KloostermanValue value;
    BruteStatus status = BruteStatus::inconclusive;
    int height = 0;
    std::int64_t cosets = 0;
};

inline const int brute_heights[] = {8, 16, 32, 64};

BruteResult kloosterman_bruteforce(CosetEnumerator& en, const GaussInt& m, const GaussInt& n, const GaussInt& C,
                                   int max_height = 64);
BruteResult kloosterman_bruteforce(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& m, const GaussInt& n,
                                   const GaussInt& C, int max_height = 64);

struct DeltaTerm {
    cplx value{0, 0};
    int contributing_cosets = 0;
};
DeltaTerm delta_term(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& w1, const GaussInt& w2);

struct DeltaBrute {
    DeltaTerm term;
    BruteStatus status = BruteStatus::inconclusive;
    int height = 0;
};
DeltaBrute delta_term_bruteforce(CosetEnumerator& en, const GaussInt& w1, const GaussInt& w2, int max_height = 64);

// Element gamma of Gamma_0(q0) with gamma(b) = a, if the cusps are equivalent.
std::optional<Mat2> equivalence_witness(const Cusp& a, const Cusp& b, const GaussInt& q0);

// The sum K(w1, w2; d) for d | c' with the two congruence conditions.
KloostermanValue k_sum(const SameCuspTable& table, const CuspFrame& frame, const GaussInt& w1, const GaussInt& w2,
                       const GaussInt& d);
// Product over prime powers of c' of K(w1 l_j, w2 l_j; p_j^e_j).
KloostermanValue k_sum_crt(const SameCuspTable& table, const CuspFrame& frame, const GaussInt& w1,
                           const GaussInt& w2, const GaussInt& cprime);

// sum over beta mod p of e(Re(a beta^2 / p))
cplx gauss_sum(const GaussInt& a, const GaussInt& p);

enum class BoundKind { trivial, weil_estermann_prime, weil_estermann, general_trivial, general_we, samecusp };
std::string to_string(BoundKind k);

// One bound evaluation. Bounds containing a divisor count are evaluated with the
// count of divisor ideals and with the count of all divisors (associates included).
struct BoundRow {
    BoundKind kind;
    double lhs = 0;
    double rhs_ideal = 0;
    double rhs_assoc = 0;
    bool ok_ideal = true;
    bool ok_assoc = true;
};

BoundRow check_weil_estermann(const GaussInt& m, const GaussInt& n, const GaussInt& c, double abs_s);
BoundRow check_weil_estermann_prime(const GaussInt& m, const GaussInt& n, const GaussInt& prime, int k, double abs_s);
// |S_{a,b}(m, n; C sqrt(v1 v2))| against the trivial bound and the Weil-type bound.
BoundRow check_general_trivial(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& C, double abs_s);
BoundRow check_general_we(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& m, const GaussInt& n,
                          const GaussInt& C, double abs_s);
BoundRow check_trivial(const CuspFrame& f1, const CuspFrame& f2, const GaussInt& C, double abs_s);
BoundRow check_samecusp(const GaussInt& w1, const GaussInt& w2, const GaussInt& cprime, double abs_s);

}  // namespace gk
