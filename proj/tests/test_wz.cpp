#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "nlc/harness.hpp"
#include "nlc/wz.hpp"

using namespace nlc;

namespace {

ZpVector zv(PrimeModulus p, std::vector<uint32_t> e) { return ZpVector(p, std::move(e)); }

double sq(double a, double b) { return (a - b) * (a - b); }

// X uniform ternary, S = X flipped to a uniform other symbol w.p. 0.1,
// U = X deterministically, f(s, u) = u.
SourceSpec deterministic_spec() {
    SourceSpec spec{LatticeParams(1.0, PrimeModulus(3)),
                    {-1.0, 0.0, 1.0},
                    {-1.0, 0.0, 1.0},
                    {},
                    {},
                    {},
                    sq,
                    0.0};
    spec.p_xs.assign(3, std::vector<double>(3));
    for (int x = 0; x < 3; ++x)
        for (int s = 0; s < 3; ++s) spec.p_xs[size_t(x)][size_t(s)] = (1.0 / 3.0) * (x == s ? 0.9 : 0.05);
    spec.w_u_given_x.assign(3, std::vector<double>(3, 0.0));
    for (size_t x = 0; x < 3; ++x) spec.w_u_given_x[x][x] = 1.0;
    spec.f_val.assign(3, std::vector<double>(3));
    for (size_t s = 0; s < 3; ++s)
        for (size_t u = 0; u < 3; ++u) spec.f_val[s][u] = double(u) - 1.0;
    spec.target_d = 0.0;
    return spec;
}

// U = X uniform ternary with S drawn independently (binary, asymmetric).
SourceSpec independent_side_spec() {
    SourceSpec spec = deterministic_spec();
    spec.s_vals = {0.0, 1.0};
    spec.p_xs.assign(3, {1.0 / 3.0 * 0.7, 1.0 / 3.0 * 0.3});
    spec.f_val.assign(2, std::vector<double>(3));
    for (size_t s = 0; s < 2; ++s)
        for (size_t u = 0; u < 3; ++u) spec.f_val[s][u] = double(u) - 1.0;
    return spec;
}

}  // namespace

TEST_CASE("source spec validation rejects malformed tables") {
    SourceSpec spec = deterministic_spec();
    CHECK_NOTHROW(spec.validate());
    SourceSpec bad = spec;
    bad.p_xs[0][0] += 0.2;  // joint not normalized
    CHECK_THROWS(bad.validate());
    bad = spec;
    bad.w_u_given_x[1] = {0.5, 0.1, 0.1};  // row not normalized
    CHECK_THROWS(bad.validate());
    bad = spec;
    bad.f_val[0][0] = 5.0;  // expected distortion now exceeds target 0
    CHECK_THROWS(bad.validate());
}

TEST_CASE("rate thresholds for independent side information") {
    WzThresholds th = wz_rate_thresholds(independent_side_spec());
    // U = X uniform: encoding bound log2 p - D(P_UX || P_Z P_X) = 0; S
    // independent of U: decoding bound log2 p; rate H(X) = log2 3.
    CHECK(th.enc_bound == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(th.dec_bound == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
    CHECK(th.rate_mi == doctest::Approx(std::log2(3.0)).epsilon(1e-9));
    CHECK(th.rate_divergence == doctest::Approx(th.rate_mi).epsilon(1e-9));
}

TEST_CASE("perfect side information drives the rate to zero") {
    SourceSpec spec = deterministic_spec();
    // S = X exactly.
    spec.p_xs.assign(3, std::vector<double>(3, 0.0));
    for (size_t x = 0; x < 3; ++x) spec.p_xs[x][x] = 1.0 / 3.0;
    WzThresholds th = wz_rate_thresholds(spec);
    CHECK(th.rate_mi == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(th.enc_bound == doctest::Approx(th.dec_bound).epsilon(1e-9));
}

TEST_CASE("flip instance thresholds match conditional entropies") {
    SourceSpec spec = make_wz_z3_flip01();
    WzThresholds th = wz_rate_thresholds(spec);
    CHECK(th.rate_divergence == doctest::Approx(th.rate_mi).epsilon(1e-9));
    // enc_bound = H(U|X): the test channel is a symmetric 0.9/0.05/0.05 flip.
    double h_flip = -(0.9 * std::log2(0.9) + 2 * 0.05 * std::log2(0.05));
    CHECK(th.enc_bound == doctest::Approx(h_flip).epsilon(1e-9));
    // dec_bound = H(U|S) computed independently from the joint.
    FiniteMeasure us = spec.joint_us();
    double h_us = entropy_bits(us) - entropy_bits(us.marginal(1));
    CHECK(th.dec_bound == doctest::Approx(h_us).epsilon(1e-9));
    CHECK(th.rate_mi > 0.0);
    // Markov structure U - X - S is accepted by validation.
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("block distortion worked examples") {
    CHECK(block_distortion({1, 2, 3}, {1, 2, 3}, sq) == 0.0);
    CHECK(block_distortion({1, 2, 3}, {2, 3, 4}, sq) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(block_distortion({0, 0, 0, 0}, {1, 1, 0, 0}, sq) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS(block_distortion({1, 2}, {1}, sq));
}

TEST_CASE("outer enumeration size is p^(n-l) for full-rank parity checks") {
    PrimeModulus p(3);
    ParityNestedCode code(ZpMatrix(p, 2, 5, {1, 0, 1, 2, 1, 0, 1, 1, 1, 2}), ZpMatrix(p, 1, 5),
                          zv(p, {1, 2}), zv(p, {0}));
    REQUIRE(rank(code.H()) == 2);
    CHECK(code.outer_solutions().count() == 27);  // 3^(5-2)
}

TEST_CASE("generous tolerance returns the first enumerated candidate's bin") {
    WzSimulator sim(deterministic_spec(), 1.0);
    PrimeModulus p(3);
    Rng rng(4);
    ParityNestedCode code = ParityNestedCode::sample(p, {6, 1, 2}, rng);
    std::vector<uint32_t> x_idx{0, 1, 2, 0, 1, 2};
    auto m = sim.encode(code, x_idx);
    REQUIRE(m.has_value());
    AffineSolutionSet outer = code.outer_solutions();
    auto it = outer.begin();
    REQUIRE_FALSE(it.done());
    CHECK(*m == mat_vec_mul(code.dH(), it.value()));
}

TEST_CASE("decoder fails closed on empty bins and on ambiguity") {
    WzSimulator sim(deterministic_spec(), 1.0);
    PrimeModulus p(3);
    // H = dH makes the bin system inconsistent whenever m != c.
    ParityNestedCode code(ZpMatrix(p, 1, 3, {1, 1, 0}), ZpMatrix(p, 1, 3, {1, 1, 0}),
                          zv(p, {0}), zv(p, {0}));
    std::vector<uint32_t> s_idx{0, 0, 0};
    CHECK_FALSE(sim.decode(code, zv(p, {1}), s_idx).has_value());
    // Full-rank stacked system: the bin holds 3 candidates and eps = 1 makes
    // all of them typical, so uniqueness fails.
    ParityNestedCode amb(ZpMatrix(p, 1, 3, {1, 0, 0}), ZpMatrix(p, 1, 3, {0, 1, 0}),
                         zv(p, {0}), zv(p, {0}));
    REQUIRE(rank(amb.H().stacked(amb.dH())) == 2);
    CHECK(amb.bin_solutions(zv(p, {1})).count() == 3);
    CHECK_FALSE(sim.decode(amb, zv(p, {1}), s_idx).has_value());
}

TEST_CASE("encoder success on the deterministic instance tracks the marginal ceiling") {
    // With U = X, encoding succeeds only if the empirical law of x itself is
    // within eps of uniform; at eps = 0.25, n = 9 that multinomial event has
    // probability 16422/19683 ~ 0.834, an upper bound approached as l grows.
    WzSimulator sim(deterministic_spec(), 0.25);
    int found2 = 0, found3 = 0;
    for (uint64_t t = 0; t < 500; ++t) {
        if (sim.run_trial({9, 1, 2}, 31415, t).encoder_found) ++found2;
        if (sim.run_trial({9, 1, 3}, 31415, t).encoder_found) ++found3;
    }
    double ceiling = 16422.0 / 19683.0;
    CHECK(double(found3) / 500.0 >= 0.75);
    CHECK(double(found3) / 500.0 <= ceiling + 0.04);
    // The outer code has p^(n-l) words, so the smaller l offers more
    // candidates and can only do better.
    CHECK(found2 >= found3);
    CHECK(double(found2) / 500.0 <= ceiling + 0.04);
}

TEST_CASE("trial records are reproducible and internally consistent") {
    WzSimulator sim(make_wz_z3_flip01(), 0.25);
    WzTrialRecord a = sim.run_trial({6, 2, 2}, 77, 13);
    WzTrialRecord b = sim.run_trial({6, 2, 2}, 77, 13);
    CHECK(a.encoder_found == b.encoder_found);
    CHECK(a.decoder_unique == b.decoder_unique);
    CHECK(a.block_distortion == b.block_distortion);
    CHECK(a.rank_H == b.rank_H);
    for (uint64_t t = 0; t < 200; ++t) {
        WzTrialRecord r = sim.run_trial({6, 2, 2}, 555, t);
        CHECK((!r.decoder_unique || r.encoder_found));
        CHECK(r.rank_H <= 2);
        if (r.encoder_found && r.decoder_unique) CHECK(r.block_distortion >= 0.0);
    }
}

TEST_CASE("sampled parity ranks match the ensemble formula") {
    // p=3, n=4, l=2: P(rank = 2) = (81-1)(81-3)/81^2.
    PrimeModulus p(3);
    Rng rng(8088);
    const uint64_t draws = 10000;
    uint64_t full = 0;
    for (uint64_t i = 0; i < draws; ++i)
        if (rank(ParityNestedCode::sample(p, {4, 1, 2}, rng).H()) == 2) ++full;
    double expected = 6240.0 / 6561.0;
    double sigma = std::sqrt(expected * (1 - expected) / double(draws));
    CHECK(std::abs(double(full) / double(draws) - expected) <= 3 * sigma);
}
