#include "nlc/wz.hpp"

#include <cmath>
#include <stdexcept>

namespace nlc {

namespace {

constexpr double kTol = 1e-12;

FiniteMeasure measure_from_table(const std::vector<double>& a_vals, const std::vector<double>& b_vals,
                                 const std::vector<std::vector<double>>& mass) {
    std::vector<Atom> atoms;
    for (size_t i = 0; i < a_vals.size(); ++i)
        for (size_t j = 0; j < b_vals.size(); ++j)
            if (mass[i][j] > 0) atoms.push_back({{a_vals[i], b_vals[j]}, mass[i][j]});
    return FiniteMeasure(2, std::move(atoms));
}

std::vector<std::vector<double>> universe_points(const std::vector<double>& u_vals,
                                                 const std::vector<double>& o_vals) {
    std::vector<std::vector<double>> pts;
    pts.reserve(u_vals.size() * o_vals.size());
    for (double u : u_vals)
        for (double o : o_vals) pts.push_back({u, o});
    return pts;
}

}  // namespace

void SourceSpec::validate() const {
    size_t nx = x_vals.size(), ns = s_vals.size(), nU = nu();
    if (nx == 0 || ns == 0) throw std::invalid_argument("SourceSpec: empty alphabet");
    if (p_xs.size() != nx) throw std::invalid_argument("SourceSpec: P_XS rows");
    double total = 0;
    for (const auto& r : p_xs) {
        if (r.size() != ns) throw std::invalid_argument("SourceSpec: P_XS cols");
        for (double v : r) {
            if (v < 0) throw std::invalid_argument("SourceSpec: negative probability");
            total += v;
        }
    }
    if (std::abs(total - 1.0) > kTol) throw std::invalid_argument("SourceSpec: P_XS not normalized");
    if (w_u_given_x.size() != nx) throw std::invalid_argument("SourceSpec: W_{U|X} rows");
    for (const auto& r : w_u_given_x) {
        if (r.size() != nU) throw std::invalid_argument("SourceSpec: W_{U|X} cols");
        double s = 0;
        for (double v : r) {
            if (v < 0) throw std::invalid_argument("SourceSpec: negative probability");
            s += v;
        }
        if (std::abs(s - 1.0) > kTol) throw std::invalid_argument("SourceSpec: W_{U|X} row not normalized");
    }
    if (f_val.size() != ns) throw std::invalid_argument("SourceSpec: f table rows");
    for (const auto& r : f_val)
        if (r.size() != nU) throw std::invalid_argument("SourceSpec: f table cols");
    if (!distortion) throw std::invalid_argument("SourceSpec: missing distortion function");

    // Markov U - X - S: on the assembled three-way joint, P(u | x, s) must
    // not depend on s wherever (x, s) has mass.
    for (size_t ix = 0; ix < nx; ++ix)
        for (size_t iu = 0; iu < nU; ++iu) {
            double ref = -1;
            for (size_t is = 0; is < ns; ++is) {
                if (p_xs[ix][is] <= 0) continue;
                double cond = p_xs[ix][is] * w_u_given_x[ix][iu] / p_xs[ix][is];
                if (ref < 0)
                    ref = cond;
                else if (std::abs(cond - ref) > kTol)
                    throw std::logic_error("SourceSpec: Markov structure violated");
            }
        }

    if (expected_distortion() > target_d + 1e-9)
        throw std::invalid_argument("SourceSpec: expected distortion exceeds target");
}

FiniteMeasure SourceSpec::joint_ux() const {
    std::vector<double> u_vals = lattice.alphabet();
    std::vector<std::vector<double>> mass(u_vals.size(), std::vector<double>(x_vals.size(), 0.0));
    for (size_t ix = 0; ix < x_vals.size(); ++ix) {
        double px = 0;
        for (double v : p_xs[ix]) px += v;
        for (size_t iu = 0; iu < u_vals.size(); ++iu) mass[iu][ix] = px * w_u_given_x[ix][iu];
    }
    return measure_from_table(u_vals, x_vals, mass);
}

FiniteMeasure SourceSpec::joint_us() const {
    std::vector<double> u_vals = lattice.alphabet();
    std::vector<std::vector<double>> mass(u_vals.size(), std::vector<double>(s_vals.size(), 0.0));
    for (size_t ix = 0; ix < x_vals.size(); ++ix)
        for (size_t is = 0; is < s_vals.size(); ++is) {
            double pxs = p_xs[ix][is];
            if (pxs <= 0) continue;
            for (size_t iu = 0; iu < u_vals.size(); ++iu) mass[iu][is] += pxs * w_u_given_x[ix][iu];
        }
    return measure_from_table(u_vals, s_vals, mass);
}

double SourceSpec::expected_distortion() const {
    double e = 0;
    for (size_t ix = 0; ix < x_vals.size(); ++ix)
        for (size_t is = 0; is < s_vals.size(); ++is) {
            double pxs = p_xs[ix][is];
            if (pxs <= 0) continue;
            for (size_t iu = 0; iu < nu(); ++iu)
                e += pxs * w_u_given_x[ix][iu] * distortion(x_vals[ix], f_val[is][iu]);
        }
    return e;
}

WzThresholds wz_rate_thresholds(const SourceSpec& spec) {
    std::vector<double> u_vals = spec.lattice.alphabet();
    std::vector<Atom> z_atoms;
    for (double u : u_vals) z_atoms.push_back({{u}, 1.0 / double(u_vals.size())});
    FiniteMeasure p_z(1, std::move(z_atoms));

    FiniteMeasure ux = spec.joint_ux();
    FiniteMeasure us = spec.joint_us();
    double log2p = std::log2(double(spec.nu()));
    double div_ux = kl_divergence(ux, FiniteMeasure::product(p_z, ux.marginal(1)));
    double div_us = kl_divergence(us, FiniteMeasure::product(p_z, us.marginal(1)));
    double rate_div = div_ux - div_us;
    double rate_mi = mutual_information(ux) - mutual_information(us);
    if (std::isfinite(rate_div) && std::abs(rate_div - rate_mi) > 1e-9)
        throw std::logic_error("wz_rate_thresholds: divergence/MI identity violated");
    return {log2p - div_ux, log2p - div_us, rate_div, rate_mi};
}

double block_distortion(const std::vector<double>& x, const std::vector<double>& xhat,
                        const std::function<double(double, double)>& d) {
    if (x.size() != xhat.size()) throw std::invalid_argument("block_distortion: length mismatch");
    if (x.empty()) throw std::invalid_argument("block_distortion: empty block");
    double s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += d(x[i], xhat[i]);
    return s / double(x.size());
}

WzSimulator::WzSimulator(SourceSpec spec, double eps)
    : spec_(std::move(spec)),
      eps_(eps),
      enc_tester_(spec_.joint_ux(), universe_points(spec_.lattice.alphabet(), spec_.x_vals), eps),
      dec_tester_(spec_.joint_us(), universe_points(spec_.lattice.alphabet(), spec_.s_vals), eps) {
    spec_.validate();
    if (!(eps > 0)) throw std::invalid_argument("WzSimulator: eps must be positive");
    xs_cdf_.reserve(spec_.x_vals.size() * spec_.s_vals.size());
    double acc = 0;
    for (const auto& row : spec_.p_xs)
        for (double v : row) {
            acc += v;
            xs_cdf_.push_back(acc);
        }
    xs_cdf_.back() = 1.0;
}

size_t WzSimulator::x_index_of(double v) const {
    for (size_t i = 0; i < spec_.x_vals.size(); ++i)
        if (std::abs(spec_.x_vals[i] - v) <= 1e-12) return i;
    throw std::invalid_argument("WzSimulator: source value outside alphabet");
}

size_t WzSimulator::s_index_of(double v) const {
    for (size_t i = 0; i < spec_.s_vals.size(); ++i)
        if (std::abs(spec_.s_vals[i] - v) <= 1e-12) return i;
    throw std::invalid_argument("WzSimulator: side-info value outside alphabet");
}

bool WzSimulator::typical_with(const TypicalityTester& tester, const ZpVector& u,
                               const std::vector<uint32_t>& other_idx, size_t n_other,
                               std::unordered_map<uint64_t, bool>* cache) const {
    static thread_local TypicalityTester::Scratch scratch;
    static thread_local std::vector<uint32_t> counts;
    size_t m = tester.universe_size();
    counts.assign(m, 0);
    size_t n = u.size();
    for (size_t t = 0; t < n; ++t) ++counts[size_t(u[t]) * n_other + other_idx[t]];
    if (cache && m <= 10 && n < 64) {
        uint64_t key = 0;
        for (uint32_t c : counts) key = (key << 6) | c;
        auto it = cache->find(key);
        if (it != cache->end()) return it->second;
        bool r = tester.typical(counts.data(), uint32_t(n), scratch);
        cache->emplace(key, r);
        return r;
    }
    return tester.typical(counts.data(), uint32_t(n), scratch);
}

std::optional<BinIndex> WzSimulator::encode(const ParityNestedCode& code,
                                            const std::vector<uint32_t>& x_idx) const {
    if (x_idx.size() != code.dims().n) throw std::invalid_argument("wz_encode: source length mismatch");
    size_t nx = spec_.x_vals.size();
    std::unordered_map<uint64_t, bool> cache;
    AffineSolutionSet outer = code.outer_solutions();
    for (auto it = outer.begin(); !it.done(); it.advance())
        if (typical_with(enc_tester_, it.value(), x_idx, nx, &cache))
            return mat_vec_mul(code.dH(), it.value());
    return std::nullopt;
}

std::optional<WzSimulator::Decoded> WzSimulator::decode(const ParityNestedCode& code,
                                                        const BinIndex& m,
                                                        const std::vector<uint32_t>& s_idx) const {
    if (s_idx.size() != code.dims().n) throw std::invalid_argument("wz_decode: side-info length mismatch");
    size_t ns = spec_.s_vals.size();
    std::optional<ZpVector> found;
    std::unordered_map<uint64_t, bool> cache;
    AffineSolutionSet bin = code.bin_solutions(m);
    for (auto it = bin.begin(); !it.done(); it.advance()) {
        if (!typical_with(dec_tester_, it.value(), s_idx, ns, &cache)) continue;
        if (found) return std::nullopt;  // ambiguity
        found = it.value();
    }
    if (!found) return std::nullopt;
    std::vector<double> xhat(s_idx.size());
    for (size_t i = 0; i < s_idx.size(); ++i) xhat[i] = spec_.f_val[s_idx[i]][(*found)[i]];
    return Decoded{std::move(*found), std::move(xhat)};
}

WzTrialRecord WzSimulator::run_trial(CodeDims dims, uint64_t master_seed, uint64_t trial_index) const {
    Rng rng = Rng::for_trial(master_seed, trial_index);
    ParityNestedCode code = ParityNestedCode::sample(spec_.lattice.p, dims, rng);

    size_t ns = spec_.s_vals.size();
    std::vector<uint32_t> x_idx(dims.n), s_idx(dims.n);
    std::vector<double> x_seq(dims.n);
    for (size_t t = 0; t < dims.n; ++t) {
        size_t flat = rng.sample_cdf(xs_cdf_);
        x_idx[t] = uint32_t(flat / ns);
        s_idx[t] = uint32_t(flat % ns);
        x_seq[t] = spec_.x_vals[x_idx[t]];
    }

    WzTrialRecord rec{};
    rec.trial = trial_index;
    rec.n = dims.n;
    rec.k = dims.k;
    rec.l = dims.l;
    rec.p = spec_.lattice.p.value();
    rec.gamma = spec_.lattice.gamma;
    rec.eps = eps_;
    rec.seed = master_seed;
    rec.rank_H = rank(code.H());

    auto m = encode(code, x_idx);
    rec.encoder_found = m.has_value();
    if (!m) return rec;

    auto dec = decode(code, *m, s_idx);
    rec.decoder_unique = dec.has_value();
    if (dec) rec.block_distortion = block_distortion(x_seq, dec->xhat, spec_.distortion);
    return rec;
}

}  // namespace nlc
