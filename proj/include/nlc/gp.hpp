#pragma once

#include <optional>
#include <unordered_map>

#include "nlc/lattice.hpp"
#include "nlc/measures.hpp"
#include "nlc/nested_code.hpp"
#include "nlc/rng.hpp"

namespace nlc {

// Channel with state known at the encoder. All alphabets are finite sets of
// reals; the auxiliary U lives on the lattice alphabet gamma(Z_p - (p-1)/2).
// Conditional laws are row-stochastic tables over the value indices.
struct ChannelSpec {
    LatticeParams lattice;

    std::vector<double> s_vals;
    std::vector<double> p_s;

    // [s][u]: auxiliary law P_{U|S} over the lattice alphabet.
    std::vector<std::vector<double>> p_u_given_s;

    std::vector<double> x_vals;
    // [u][s][x]
    std::vector<std::vector<std::vector<double>>> w_x_given_us;

    std::vector<double> y_vals;
    // [x][s][y]
    std::vector<std::vector<std::vector<double>>> w_y_given_xs;

    // cost[x][s] >= 0 and budget W with E{w(X,S)} <= W under the induced joint.
    std::vector<std::vector<double>> cost;
    double cost_budget;

    void validate() const;

    size_t nu() const { return lattice.p.value(); }

    // Exact finite joints under P_S P_{U|S} W_{X|US} W_{Y|XS}.
    FiniteMeasure joint_us() const;  // atoms (u_val, s_val)
    FiniteMeasure joint_uy() const;  // atoms (u_val, y_val)
    double expected_cost() const;
};

struct GpThresholds {
    double enc_bound;  // D(P_US || P_Z x P_S); encoder needs (l/n) log p above it
    double dec_bound;  // D(P_UY || P_Z x P_Y); decoder needs ((k+l)/n) log p below it
    double rate_divergence;  // dec_bound - enc_bound
    double rate_mi;          // I(U;Y) - I(U;S); equals rate_divergence
};

GpThresholds gp_rate_thresholds(const ChannelSpec& spec);

struct GpTrialRecord {
    uint64_t trial;
    size_t n, k, l;
    uint32_t p;
    double gamma, eps;
    uint64_t seed;
    bool encoder_found;
    bool decoded_ok;
    double block_cost;
    bool budget_exceeded;
    size_t stacked_rank;
};

class GpSimulator {
  public:
    GpSimulator(ChannelSpec spec, double eps);

    const ChannelSpec& spec() const { return spec_; }
    double eps() const { return eps_; }

    // Scans a in Z_p^l lexicographically; first candidate u = g(a,m) jointly
    // typical with s wins. Returns the codeword (Z_p domain) or absent.
    std::optional<ZpVector> encode(const GeneratorNestedCode& code, const BinIndex& m,
                                   const std::vector<uint32_t>& s_idx) const;
    std::optional<LatticePoint> gp_encode(const GeneratorNestedCode& code, const BinIndex& m,
                                          const std::vector<double>& s_seq) const;

    // Per-letter sampling through W_{X|US} then W_{Y|XS}; returns block cost.
    struct TransmitResult {
        std::vector<uint32_t> x_idx, y_idx;
        double block_cost;
    };
    TransmitResult transmit(const std::vector<uint32_t>& u_idx, const std::vector<uint32_t>& s_idx,
                            Rng& rng) const;

    // Returns m iff exactly one bin contains a sequence jointly typical with y.
    std::optional<BinIndex> decode(const GeneratorNestedCode& code,
                                   const std::vector<uint32_t>& y_idx) const;

    // theta: number of a in Z_p^l with g(a, m) jointly typical with s.
    size_t count_typical_candidates(const GeneratorNestedCode& code, const BinIndex& m,
                                    const std::vector<uint32_t>& s_idx) const;

    std::vector<uint32_t> sample_state(size_t n, Rng& rng) const;

    GpTrialRecord run_trial(CodeDims dims, uint64_t master_seed, uint64_t trial_index) const;

    size_t s_index_of(double v) const;
    size_t y_index_of(double v) const;

  private:
    ChannelSpec spec_;
    double eps_;
    TypicalityTester enc_tester_;  // universe (u, s)
    TypicalityTester dec_tester_;  // universe (u, y)
    std::vector<double> s_cdf_;
    std::vector<std::vector<std::vector<double>>> x_cdf_, y_cdf_;

    // cache (optional) memoizes results by count profile; valid only while
    // the paired sequence other_idx stays fixed.
    bool typical_with(const TypicalityTester& tester, const ZpVector& u,
                      const std::vector<uint32_t>& other_idx, size_t n_other,
                      std::unordered_map<uint64_t, bool>* cache = nullptr) const;
};

}  // namespace nlc
