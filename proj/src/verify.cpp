#include "nlc/verify.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace nlc {

namespace {

constexpr uint64_t kEnumBudget = 10000000;  // 1e7 configurations

uint64_t pow_u64(uint64_t base, uint64_t exp) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < exp; ++i) {
        if (r > UINT64_MAX / base) throw std::overflow_error("pow_u64: overflow");
        r *= base;
    }
    return r;
}

void check_budget(uint64_t total, const char* what) {
    if (total > kEnumBudget)
        throw std::invalid_argument(std::string(what) + ": instance too large (enumeration budget 1e7)");
}

// Advances a base-p odometer; returns false after the last configuration.
bool next_config(std::vector<uint32_t>& digits, uint32_t p) {
    for (size_t i = digits.size(); i > 0; --i) {
        if (++digits[i - 1] < p) return true;
        digits[i - 1] = 0;
    }
    return false;
}

uint64_t binomial(uint64_t n, uint64_t r) {
    if (r > n) return 0;
    uint64_t v = 1;
    for (uint64_t i = 0; i < r; ++i) v = v * (n - i) / (i + 1);
    return v;
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::exact_match: return "exact-match";
        case Verdict::within_tolerance: return "within-tolerance";
        default: return "fail";
    }
}

}  // namespace

std::string to_text(const LemmaReport& r) {
    std::ostringstream os;
    os << r.lemma << " p=" << r.p << " n=" << r.n << " k=" << r.k << " l=" << r.l << "\n";
    char buf[96];
    for (size_t i = 0; i < r.expected.size(); ++i) {
        std::snprintf(buf, sizeof buf, "  %s: expected %.17g observed %.17g\n",
                      r.expected[i].first.c_str(), r.expected[i].second,
                      i < r.observed.size() ? r.observed[i].second : std::nan(""));
        os << buf;
    }
    os << "  verdict: " << verdict_name(r.verdict);
    if (!r.detail.empty()) os << " (" << r.detail << ")";
    os << "\n";
    return os.str();
}

std::string lemma_csv_header() { return "lemma,p,n,k,l,verdict,detail\n"; }

std::string to_csv_row(const LemmaReport& r) {
    std::ostringstream os;
    os << r.lemma << "," << r.p << "," << r.n << "," << r.k << "," << r.l << ","
       << verdict_name(r.verdict) << "," << r.detail << "\n";
    return os.str();
}

LemmaReport verify_g_uniform(PrimeModulus pm, size_t n, size_t k, size_t l) {
    uint32_t p = pm.value();
    uint64_t total = pow_u64(p, uint64_t(n) * (l + k + 1));
    check_budget(total, "verify_g_uniform");
    uint64_t points = pow_u64(p, n);
    uint64_t pairs = pow_u64(p, l + k);  // (a, m) configurations

    // digits: G (l*n) | dG (k*n) | B (n)
    std::vector<uint32_t> d(n * (l + k + 1), 0);
    std::vector<uint64_t> counts(pairs * points, 0);
    std::vector<uint32_t> u(n);
    do {
        const uint32_t* G = d.data();
        const uint32_t* dG = d.data() + l * n;
        const uint32_t* B = d.data() + (l + k) * n;
        for (uint64_t am = 0; am < pairs; ++am) {
            for (size_t j = 0; j < n; ++j) {
                uint64_t acc = B[j];
                uint64_t rem = am;
                for (size_t i = l + k; i > 0; --i) {
                    uint32_t digit = uint32_t(rem % p);
                    rem /= p;
                    // trailing digits of am are m (fast), leading are a
                    size_t row = i - 1;
                    const uint32_t* M = row < l ? G + row * n : dG + (row - l) * n;
                    acc += uint64_t(digit) * M[j];
                }
                u[j] = uint32_t(acc % p);
            }
            uint64_t uidx = 0;
            for (size_t j = 0; j < n; ++j) uidx = uidx * p + u[j];
            ++counts[am * points + uidx];
        }
    } while (next_config(d, p));

    uint64_t want = total / points;
    bool ok = total % points == 0;
    for (uint64_t c : counts)
        if (c != want) ok = false;

    LemmaReport r;
    r.lemma = "g-uniform";
    r.p = p;
    r.n = n;
    r.k = k;
    r.l = l;
    r.expected = {{"count-per-point", double(want)}};
    double worst = double(want);
    for (uint64_t c : counts)
        if (std::abs(double(c) - double(want)) > std::abs(worst - double(want))) worst = double(c);
    r.observed = {{"count-per-point", worst}};
    r.verdict = ok ? Verdict::exact_match : Verdict::fail;
    r.detail = "all (a;m) pairs; " + std::to_string(total) + " draws";
    return r;
}

LemmaReport verify_pairwise_independence(PrimeModulus pm, size_t n, size_t k, size_t l,
                                         PairCase which) {
    uint32_t p = pm.value();
    uint64_t total = pow_u64(p, uint64_t(n) * (l + k + 1));
    check_budget(total, "verify_pairwise_independence");
    uint64_t points = pow_u64(p, n);

    // Representative pair per case.
    std::vector<uint32_t> a1(l, 0), a2(l, 0), m1(k, 0), m2(k, 0);
    if (which == PairCase::same_m_diff_a) {
        a1[l - 1] = 1;
        a2[l - 1] = 2 % p;
    } else {
        a1[l - 1] = 1;
        a2[l - 1] = 1;
        m2[k - 1] = 1;
    }

    std::vector<uint32_t> d(n * (l + k + 1), 0);
    std::vector<uint64_t> counts(points * points, 0);
    do {
        const uint32_t* G = d.data();
        const uint32_t* dG = d.data() + l * n;
        const uint32_t* B = d.data() + (l + k) * n;
        uint64_t u1 = 0, u2 = 0;
        for (size_t j = 0; j < n; ++j) {
            uint64_t acc1 = B[j], acc2 = B[j];
            for (size_t i = 0; i < l; ++i) {
                acc1 += uint64_t(a1[i]) * G[i * n + j];
                acc2 += uint64_t(a2[i]) * G[i * n + j];
            }
            for (size_t i = 0; i < k; ++i) {
                acc1 += uint64_t(m1[i]) * dG[i * n + j];
                acc2 += uint64_t(m2[i]) * dG[i * n + j];
            }
            u1 = u1 * p + acc1 % p;
            u2 = u2 * p + acc2 % p;
        }
        ++counts[u1 * points + u2];
    } while (next_config(d, p));

    uint64_t want = total / (points * points);
    bool ok = total % (points * points) == 0;
    for (uint64_t c : counts)
        if (c != want) ok = false;

    LemmaReport r;
    r.lemma = which == PairCase::same_m_diff_a ? "pairwise-independent-same-bin"
                                               : "pairwise-independent-cross-bin";
    r.p = p;
    r.n = n;
    r.k = k;
    r.l = l;
    r.expected = {{"count-per-point-pair", double(want)}};
    double worst = double(want);
    for (uint64_t c : counts)
        if (std::abs(double(c) - double(want)) > std::abs(worst - double(want))) worst = double(c);
    r.observed = {{"count-per-point-pair", worst}};
    r.verdict = ok ? Verdict::exact_match : Verdict::fail;
    r.detail = std::to_string(total) + " draws";
    return r;
}

LemmaReport verify_parity_uniform_independent(PrimeModulus pm, size_t n, size_t l) {
    uint32_t p = pm.value();
    uint64_t total = pow_u64(p, uint64_t(n) * l + l);
    check_budget(total, "verify_parity_uniform_independent");
    uint64_t points = pow_u64(p, n);

    // digits: H (l*n) | c (l)
    std::vector<uint32_t> d(l * n + l, 0);
    std::vector<uint64_t> singles(points, 0);
    std::vector<uint64_t> pairs(points * points, 0);
    std::vector<uint32_t> u(n);
    std::vector<uint64_t> members;
    do {
        const uint32_t* H = d.data();
        const uint32_t* c = d.data() + l * n;
        members.clear();
        for (uint64_t uidx = 0; uidx < points; ++uidx) {
            uint64_t rem = uidx;
            for (size_t j = n; j > 0; --j) {
                u[j - 1] = uint32_t(rem % p);
                rem /= p;
            }
            bool member = true;
            for (size_t i = 0; i < l && member; ++i) {
                uint64_t acc = 0;
                for (size_t j = 0; j < n; ++j) acc += uint64_t(H[i * n + j]) * u[j];
                member = acc % p == c[i];
            }
            if (member) members.push_back(uidx);
        }
        for (uint64_t a : members) {
            ++singles[a];
            for (uint64_t b : members)
                if (b != a) ++pairs[a * points + b];
        }
    } while (next_config(d, p));

    uint64_t want1 = total / pow_u64(p, l);
    uint64_t want2 = total / pow_u64(p, 2 * l);
    bool ok = true;
    for (uint64_t c : singles)
        if (c != want1) ok = false;
    for (uint64_t a = 0; a < points; ++a)
        for (uint64_t b = 0; b < points; ++b)
            if (a != b && pairs[a * points + b] != want2) ok = false;

    LemmaReport r;
    r.lemma = "parity-uniform-independent";
    r.p = p;
    r.n = n;
    r.k = 0;
    r.l = l;
    r.expected = {{"single-count", double(want1)}, {"pair-count", double(want2)}};
    r.observed = {{"single-count", double(singles.empty() ? 0 : singles[0])},
                  {"pair-count", points > 1 ? double(pairs[1]) : 0.0}};
    r.verdict = ok ? Verdict::exact_match : Verdict::fail;
    r.detail = std::to_string(total) + " draws";
    return r;
}

LemmaReport verify_rank_distribution(PrimeModulus pm, size_t n, size_t l) {
    uint32_t p = pm.value();
    LemmaReport r;
    r.lemma = "rank-distribution";
    r.p = p;
    r.n = n;
    r.k = 0;
    r.l = l;
    if (l == 0) {
        r.expected = {{"full-rank-count", 1.0}};
        r.observed = {{"full-rank-count", 1.0}};
        r.verdict = Verdict::exact_match;
        r.detail = "empty matrix has rank 0 surely";
        return r;
    }
    uint64_t total = pow_u64(p, uint64_t(n) * l);
    check_budget(total, "verify_rank_distribution");

    std::vector<uint32_t> d(l * n, 0);
    std::vector<uint64_t> census(l + 1, 0);
    do {
        ZpMatrix H(pm, l, n, d);
        ++census[rank(H)];
    } while (next_config(d, p));

    // Full-rank count: (p^n - 1)(p^n - p)...(p^n - p^{l-1}).
    uint64_t pn = pow_u64(p, n);
    uint64_t expect_full = 1;
    bool possible = l <= n;
    for (size_t i = 0; i < l && possible; ++i) expect_full *= pn - pow_u64(p, i);
    if (!possible) expect_full = 0;

    bool ok = census[l] == expect_full;
    // Deficient ranks i = 1..l: count/p^{nl} <= C(l,i) p^{i(l-i)} / p^{n(l-i)}.
    for (size_t i = 1; i <= l; ++i) {
        unsigned __int128 lhs = (unsigned __int128)census[i] * pow_u64(p, uint64_t(n) * (l - i));
        unsigned __int128 rhs =
            (unsigned __int128)binomial(l, i) * pow_u64(p, uint64_t(i) * (l - i)) * total;
        if (lhs > rhs) ok = false;
    }

    r.expected = {{"full-rank-count", double(expect_full)}};
    r.observed = {{"full-rank-count", double(census[l])}};
    r.verdict = ok ? Verdict::exact_match : Verdict::fail;
    {
        std::ostringstream os;
        os << "census";
        for (size_t i = 0; i <= l; ++i) os << " r" << i << "=" << census[i];
        r.detail = os.str();
    }
    return r;
}

std::vector<ExponentPoint> estimate_typicality_exponent(const FiniteMeasure& P_XY,
                                                        const FiniteMeasure& P_Z,
                                                        const std::vector<size_t>& n_grid,
                                                        uint64_t samples, double eps, uint64_t seed) {
    if (P_XY.dim() != 2 || P_Z.dim() != 1)
        throw std::invalid_argument("estimate_typicality_exponent: need d=2 joint and d=1 reference");
    FiniteMeasure P_Y = P_XY.marginal(1);

    // Universe: product of the Z and Y supports, extended by any joint atoms
    // outside the product (so the model is always covered).
    size_t nz = P_Z.size(), ny = P_Y.size();
    std::vector<std::vector<double>> universe;
    for (const Atom& z : P_Z.atoms())
        for (const Atom& y : P_Y.atoms()) universe.push_back({z.point[0], y.point[0]});
    for (const Atom& a : P_XY.atoms()) {
        bool present = false;
        for (const auto& pt : universe)
            if (std::abs(pt[0] - a.point[0]) <= 1e-12 && std::abs(pt[1] - a.point[1]) <= 1e-12) {
                present = true;
                break;
            }
        if (!present) universe.push_back(a.point);
    }
    TypicalityTester joint_tester(P_XY, universe, eps);
    std::vector<std::vector<double>> y_universe;
    for (const Atom& y : P_Y.atoms()) y_universe.push_back(y.point);
    TypicalityTester y_tester(P_Y, y_universe, eps);

    std::vector<double> z_cdf, y_cdf;
    {
        double acc = 0;
        for (const Atom& a : P_Z.atoms()) z_cdf.push_back(acc += a.mass);
        z_cdf.back() = 1.0;
        acc = 0;
        for (const Atom& a : P_Y.atoms()) y_cdf.push_back(acc += a.mass);
        y_cdf.back() = 1.0;
    }
    std::vector<size_t> pair_idx(nz * ny);
    for (size_t iz = 0; iz < nz; ++iz)
        for (size_t iy = 0; iy < ny; ++iy)
            pair_idx[iz * ny + iy] =
                joint_tester.index_of({P_Z.atoms()[iz].point[0], P_Y.atoms()[iy].point[0]});

    std::vector<ExponentPoint> out;
    TypicalityTester::Scratch scratch;
    std::vector<uint32_t> counts;
    const double zq = 1.959963984540054;  // 95% normal quantile
    for (size_t gi = 0; gi < n_grid.size(); ++gi) {
        size_t n = n_grid[gi];
        Rng rng = Rng::for_trial(seed, gi);
        // Typical y via rejection.
        std::vector<uint32_t> y_idx(n);
        for (;;) {
            counts.assign(ny, 0);
            for (size_t t = 0; t < n; ++t) {
                y_idx[t] = uint32_t(rng.sample_cdf(y_cdf));
                ++counts[y_idx[t]];
            }
            if (y_tester.typical(counts.data(), uint32_t(n), scratch)) break;
        }

        uint64_t hits = 0;
        for (uint64_t s = 0; s < samples; ++s) {
            counts.assign(joint_tester.universe_size(), 0);
            for (size_t t = 0; t < n; ++t) {
                size_t iz = rng.sample_cdf(z_cdf);
                ++counts[pair_idx[iz * ny + y_idx[t]]];
            }
            if (joint_tester.typical(counts.data(), uint32_t(n), scratch)) ++hits;
        }

        ExponentPoint pt{};
        pt.n = n;
        pt.samples = samples;
        pt.hits = hits;
        pt.p_hat = double(hits) / double(samples);
        pt.lower_bound_only = hits == 0;
        double N = double(samples);
        double ph = pt.p_hat;
        double denom = 1.0 + zq * zq / N;
        double center = (ph + zq * zq / (2 * N)) / denom;
        double half = zq * std::sqrt(ph * (1 - ph) / N + zq * zq / (4 * N * N)) / denom;
        double p_lo = std::max(0.0, center - half);
        double p_hi = std::min(1.0, center + half);
        pt.exponent = hits == 0 ? std::numeric_limits<double>::infinity()
                                : -std::log2(ph) / double(n);
        pt.exponent_lo = p_hi > 0 ? -std::log2(p_hi) / double(n) : 0.0;
        pt.exponent_hi = p_lo > 0 ? -std::log2(p_lo) / double(n)
                                  : std::numeric_limits<double>::infinity();
        out.push_back(pt);
    }
    return out;
}

SecondMomentReport second_moment_report(const GpSimulator& sim, CodeDims dims, uint64_t master_seed,
                                        uint64_t trials) {
    if (trials == 0) throw std::invalid_argument("second_moment_report: trials must be positive");
    double sum = 0, sumsq = 0;
    uint64_t zeros = 0;
    PrimeModulus p = sim.spec().lattice.p;
    for (uint64_t t = 0; t < trials; ++t) {
        Rng rng = Rng::for_trial(master_seed, t);
        GeneratorNestedCode code = GeneratorNestedCode::sample(p, dims, rng);
        std::vector<uint32_t> s_idx = sim.sample_state(dims.n, rng);
        BinIndex m = ZpVector::uniform(p, dims.k, rng);
        double theta = double(sim.count_typical_candidates(code, m, s_idx));
        sum += theta;
        sumsq += theta * theta;
        if (theta == 0) ++zeros;
    }
    SecondMomentReport r{};
    r.trials = trials;
    r.mean_theta = sum / double(trials);
    r.var_theta = std::max(0.0, sumsq / double(trials) - r.mean_theta * r.mean_theta);
    r.chebyshev_bound = r.mean_theta > 0 ? r.var_theta / (r.mean_theta * r.mean_theta)
                                         : std::numeric_limits<double>::infinity();
    r.p_zero = double(zeros) / double(trials);
    return r;
}

}  // namespace nlc
