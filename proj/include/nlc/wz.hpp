#pragma once

#include <functional>
#include <optional>
#include <unordered_map>

#include "nlc/lattice.hpp"
#include "nlc/measures.hpp"
#include "nlc/nested_code.hpp"
#include "nlc/rng.hpp"

namespace nlc {

// Source with side information at the decoder. The auxiliary U lives on the
// lattice alphabet gamma(Z_p - (p-1)/2); the test channel acts on X only, so
// the joint P_XS W_{U|X} is Markov U - X - S by construction.
struct SourceSpec {
    LatticeParams lattice;

    std::vector<double> x_vals;
    std::vector<double> s_vals;
    // [x][s]: joint source law P_XS.
    std::vector<std::vector<double>> p_xs;

    // [x][u]: test channel W_{U|X} onto the lattice alphabet.
    std::vector<std::vector<double>> w_u_given_x;

    // [s][u]: reconstruction f(s, u).
    std::vector<std::vector<double>> f_val;

    // d(x, xhat) >= 0.
    std::function<double(double, double)> distortion;
    double target_d;

    void validate() const;

    size_t nu() const { return lattice.p.value(); }

    // Exact finite joints under P_XS W_{U|X}.
    FiniteMeasure joint_ux() const;  // atoms (u_val, x_val)
    FiniteMeasure joint_us() const;  // atoms (u_val, s_val)
    double expected_distortion() const;  // E{d(X, f(S,U))}
};

struct WzThresholds {
    double enc_bound;  // log2 p - D(P_UX || P_Z x P_X); encoder needs (l/n) log p below it
    double dec_bound;  // log2 p - D(P_US || P_Z x P_S); decoder needs ((k+l)/n) log p above it
    double rate_divergence;  // D(P_UX || P_Z P_X) - D(P_US || P_Z P_S)
    double rate_mi;          // I(X;U) - I(S;U); equals rate_divergence
};

WzThresholds wz_rate_thresholds(const SourceSpec& spec);

struct WzTrialRecord {
    uint64_t trial;
    size_t n, k, l;
    uint32_t p;
    double gamma, eps;
    uint64_t seed;
    bool encoder_found;
    bool decoder_unique;
    double block_distortion;  // meaningful only when both flags are set
    size_t rank_H;
};

// (1/n) sum d(x_i, xhat_i)
double block_distortion(const std::vector<double>& x, const std::vector<double>& xhat,
                        const std::function<double(double, double)>& d);

class WzSimulator {
  public:
    WzSimulator(SourceSpec spec, double eps);

    const SourceSpec& spec() const { return spec_; }
    double eps() const { return eps_; }

    // Enumerates the outer code {u : Hu = c} in solver order; the first u
    // jointly typical with x wins and its bin index dH u is returned.
    std::optional<BinIndex> encode(const ParityNestedCode& code,
                                   const std::vector<uint32_t>& x_idx) const;

    struct Decoded {
        ZpVector u;
        std::vector<double> xhat;
    };
    // Enumerates bin m = {u : Hu = c, dHu = m}; succeeds iff exactly one
    // candidate is jointly typical with s, and reconstructs xhat_i = f(s_i, u_i).
    std::optional<Decoded> decode(const ParityNestedCode& code, const BinIndex& m,
                                  const std::vector<uint32_t>& s_idx) const;

    WzTrialRecord run_trial(CodeDims dims, uint64_t master_seed, uint64_t trial_index) const;

    size_t x_index_of(double v) const;
    size_t s_index_of(double v) const;

  private:
    SourceSpec spec_;
    double eps_;
    TypicalityTester enc_tester_;  // universe (u, x)
    TypicalityTester dec_tester_;  // universe (u, s)
    std::vector<double> xs_cdf_;   // flattened joint (ix * ns + is)

    // cache (optional) memoizes results by count profile; valid only while
    // the paired sequence other_idx stays fixed.
    bool typical_with(const TypicalityTester& tester, const ZpVector& u,
                      const std::vector<uint32_t>& other_idx, size_t n_other,
                      std::unordered_map<uint64_t, bool>* cache = nullptr) const;
};

}  // namespace nlc
