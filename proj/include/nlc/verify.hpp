#pragma once

#include <string>
#include <vector>

#include "nlc/gp.hpp"
#include "nlc/measures.hpp"
#include "nlc/zp.hpp"

namespace nlc {

enum class Verdict { exact_match, within_tolerance, fail };

// Outcome of one ensemble-lemma check. Exhaustive checks use integer counts
// and demand zero discrepancy for an exact-match verdict.
struct LemmaReport {
    std::string lemma;
    uint32_t p;
    size_t n, k, l;
    std::vector<std::pair<std::string, double>> expected;
    std::vector<std::pair<std::string, double>> observed;
    Verdict verdict;
    std::string detail;
};

std::string to_text(const LemmaReport& r);
std::string lemma_csv_header();
std::string to_csv_row(const LemmaReport& r);

// Enumerates every (G, dG, B) draw and, for each fixed (a, m), counts the
// codeword aG + m dG + B over the draws; uniform means every point of Z_p^n
// occurs exactly total/p^n times. Requires p^{n(l+k+1)} <= 1e7.
LemmaReport verify_g_uniform(PrimeModulus p, size_t n, size_t k, size_t l);

enum class PairCase { same_m_diff_a, diff_m };

// Same enumeration; joint occurrence counts of (g(a,m), g(a~,m~)) for a
// representative pair per case must all equal total/p^{2n}.
LemmaReport verify_pairwise_independence(PrimeModulus p, size_t n, size_t k, size_t l, PairCase which);

// Enumerates every (H, c); P(u in outer code) must be exactly p^{-l} for
// every u, and p^{-2l} jointly for every ordered pair u != u~. Requires
// p^{nl+l} <= 1e7.
LemmaReport verify_parity_uniform_independent(PrimeModulus p, size_t n, size_t l);

// Exact rank census over all H in Z_p^{l x n}; full-rank count must equal
// (p^n-1)(p^n-p)...(p^n-p^{l-1}) and each deficient rank i in 1..l-1 must
// satisfy count/p^{nl} <= C(l,i) p^{i(l-i)} / p^{n(l-i)}. Requires p^{nl} <= 1e7.
LemmaReport verify_rank_distribution(PrimeModulus p, size_t n, size_t l);

struct ExponentPoint {
    size_t n;
    uint64_t samples, hits;
    double p_hat;
    double exponent;               // -(1/n) log2 p_hat; +inf when hits == 0
    double exponent_lo, exponent_hi;  // 95% Wilson interval mapped through -(1/n)log2
    bool lower_bound_only;         // hits == 0: only exponent_lo is meaningful
};

// For each n: draws a typical y (i.i.d. P_Y with rejection), then estimates
// P(Z^n jointly typical with y under P_XY) over `samples` i.i.d. Z^n draws.
// The exponent approaches D(P_XY || P_Z x P_Y) for small eps.
std::vector<ExponentPoint> estimate_typicality_exponent(const FiniteMeasure& P_XY,
                                                        const FiniteMeasure& P_Z,
                                                        const std::vector<size_t>& n_grid,
                                                        uint64_t samples, double eps, uint64_t seed);

struct SecondMomentReport {
    uint64_t trials;
    double mean_theta;
    double var_theta;
    double chebyshev_bound;  // var/mean^2; +inf when mean == 0
    double p_zero;           // empirical P(theta = 0)
};

// Samples codes and states, counting typical candidates theta per bin.
SecondMomentReport second_moment_report(const GpSimulator& sim, CodeDims dims, uint64_t master_seed,
                                        uint64_t trials);

}  // namespace nlc
