#include "nlc/gp.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace nlc {

namespace {

constexpr double kTol = 1e-12;

void check_pmf(const std::vector<double>& row, const char* what) {
    double s = 0;
    for (double v : row) {
        if (v < 0) throw std::invalid_argument(std::string(what) + ": negative probability");
        s += v;
    }
    if (std::abs(s - 1.0) > kTol) throw std::invalid_argument(std::string(what) + ": row not normalized");
}

std::vector<double> cdf_of(const std::vector<double>& pmf) {
    std::vector<double> c(pmf.size());
    double s = 0;
    for (size_t i = 0; i < pmf.size(); ++i) {
        s += pmf[i];
        c[i] = s;
    }
    c.back() = 1.0;
    return c;
}

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

void ChannelSpec::validate() const {
    size_t ns = s_vals.size(), nU = nu(), nx = x_vals.size(), ny = y_vals.size();
    if (ns == 0 || nx == 0 || ny == 0) throw std::invalid_argument("ChannelSpec: empty alphabet");
    check_pmf(p_s, "P_S");
    if (p_s.size() != ns) throw std::invalid_argument("ChannelSpec: P_S size");
    if (p_u_given_s.size() != ns) throw std::invalid_argument("ChannelSpec: P_{U|S} rows");
    for (const auto& r : p_u_given_s) {
        if (r.size() != nU) throw std::invalid_argument("ChannelSpec: P_{U|S} cols");
        check_pmf(r, "P_{U|S}");
    }
    if (w_x_given_us.size() != nU) throw std::invalid_argument("ChannelSpec: W_{X|US} dims");
    for (const auto& per_s : w_x_given_us) {
        if (per_s.size() != ns) throw std::invalid_argument("ChannelSpec: W_{X|US} dims");
        for (const auto& r : per_s) {
            if (r.size() != nx) throw std::invalid_argument("ChannelSpec: W_{X|US} cols");
            check_pmf(r, "W_{X|US}");
        }
    }
    if (w_y_given_xs.size() != nx) throw std::invalid_argument("ChannelSpec: W_{Y|XS} dims");
    for (const auto& per_s : w_y_given_xs) {
        if (per_s.size() != ns) throw std::invalid_argument("ChannelSpec: W_{Y|XS} dims");
        for (const auto& r : per_s) {
            if (r.size() != ny) throw std::invalid_argument("ChannelSpec: W_{Y|XS} cols");
            check_pmf(r, "W_{Y|XS}");
        }
    }
    if (cost.size() != nx) throw std::invalid_argument("ChannelSpec: cost dims");
    for (const auto& r : cost) {
        if (r.size() != ns) throw std::invalid_argument("ChannelSpec: cost dims");
        for (double v : r)
            if (v < 0) throw std::invalid_argument("ChannelSpec: negative cost");
    }
    if (expected_cost() > cost_budget + 1e-9)
        throw std::invalid_argument("ChannelSpec: expected cost exceeds budget");
}

FiniteMeasure ChannelSpec::joint_us() const {
    std::vector<double> u_vals = lattice.alphabet();
    std::vector<std::vector<double>> mass(u_vals.size(), std::vector<double>(s_vals.size(), 0.0));
    for (size_t is = 0; is < s_vals.size(); ++is)
        for (size_t iu = 0; iu < u_vals.size(); ++iu)
            mass[iu][is] = p_s[is] * p_u_given_s[is][iu];
    return measure_from_table(u_vals, s_vals, mass);
}

FiniteMeasure ChannelSpec::joint_uy() const {
    std::vector<double> u_vals = lattice.alphabet();
    std::vector<std::vector<double>> mass(u_vals.size(), std::vector<double>(y_vals.size(), 0.0));
    for (size_t is = 0; is < s_vals.size(); ++is)
        for (size_t iu = 0; iu < u_vals.size(); ++iu) {
            double pus = p_s[is] * p_u_given_s[is][iu];
            if (pus <= 0) continue;
            for (size_t ix = 0; ix < x_vals.size(); ++ix) {
                double px = w_x_given_us[iu][is][ix];
                if (px <= 0) continue;
                for (size_t iy = 0; iy < y_vals.size(); ++iy)
                    mass[iu][iy] += pus * px * w_y_given_xs[ix][is][iy];
            }
        }
    return measure_from_table(u_vals, y_vals, mass);
}

double ChannelSpec::expected_cost() const {
    double e = 0;
    for (size_t is = 0; is < s_vals.size(); ++is)
        for (size_t iu = 0; iu < nu(); ++iu) {
            double pus = p_s[is] * p_u_given_s[is][iu];
            if (pus <= 0) continue;
            for (size_t ix = 0; ix < x_vals.size(); ++ix) e += pus * w_x_given_us[iu][is][ix] * cost[ix][is];
        }
    return e;
}

GpThresholds gp_rate_thresholds(const ChannelSpec& spec) {
    std::vector<double> u_vals = spec.lattice.alphabet();
    std::vector<Atom> z_atoms;
    for (double u : u_vals) z_atoms.push_back({{u}, 1.0 / double(u_vals.size())});
    FiniteMeasure p_z(1, std::move(z_atoms));

    FiniteMeasure us = spec.joint_us();
    FiniteMeasure uy = spec.joint_uy();
    double enc = kl_divergence(us, FiniteMeasure::product(p_z, us.marginal(1)));
    double dec = kl_divergence(uy, FiniteMeasure::product(p_z, uy.marginal(1)));
    double rate_div = dec - enc;
    double rate_mi = mutual_information(uy) - mutual_information(us);
    if (std::isfinite(rate_div) && std::abs(rate_div - rate_mi) > 1e-9)
        throw std::logic_error("gp_rate_thresholds: divergence/MI identity violated");
    return {enc, dec, rate_div, rate_mi};
}

GpSimulator::GpSimulator(ChannelSpec spec, double eps)
    : spec_(std::move(spec)),
      eps_(eps),
      enc_tester_(spec_.joint_us(), universe_points(spec_.lattice.alphabet(), spec_.s_vals), eps),
      dec_tester_(spec_.joint_uy(), universe_points(spec_.lattice.alphabet(), spec_.y_vals), eps) {
    spec_.validate();
    if (!(eps > 0)) throw std::invalid_argument("GpSimulator: eps must be positive");
    s_cdf_ = cdf_of(spec_.p_s);
    x_cdf_.resize(spec_.nu());
    for (size_t iu = 0; iu < spec_.nu(); ++iu) {
        x_cdf_[iu].resize(spec_.s_vals.size());
        for (size_t is = 0; is < spec_.s_vals.size(); ++is)
            x_cdf_[iu][is] = cdf_of(spec_.w_x_given_us[iu][is]);
    }
    y_cdf_.resize(spec_.x_vals.size());
    for (size_t ix = 0; ix < spec_.x_vals.size(); ++ix) {
        y_cdf_[ix].resize(spec_.s_vals.size());
        for (size_t is = 0; is < spec_.s_vals.size(); ++is)
            y_cdf_[ix][is] = cdf_of(spec_.w_y_given_xs[ix][is]);
    }
}

size_t GpSimulator::s_index_of(double v) const {
    for (size_t i = 0; i < spec_.s_vals.size(); ++i)
        if (std::abs(spec_.s_vals[i] - v) <= 1e-12) return i;
    throw std::invalid_argument("GpSimulator: state value outside alphabet");
}

size_t GpSimulator::y_index_of(double v) const {
    for (size_t i = 0; i < spec_.y_vals.size(); ++i)
        if (std::abs(spec_.y_vals[i] - v) <= 1e-12) return i;
    throw std::invalid_argument("GpSimulator: output value outside alphabet");
}

bool GpSimulator::typical_with(const TypicalityTester& tester, const ZpVector& u,
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

std::optional<ZpVector> GpSimulator::encode(const GeneratorNestedCode& code, const BinIndex& m,
                                            const std::vector<uint32_t>& s_idx) const {
    CodeDims d = code.dims();
    if (s_idx.size() != d.n) throw std::invalid_argument("gp_encode: state length mismatch");
    PrimeModulus p = code.modulus();
    ZpVector base = vec_mat_mul(m, code.dG()) + code.B();
    ZpVector a(p, d.l);
    size_t ns = spec_.s_vals.size();
    std::unordered_map<uint64_t, bool> cache;
    for (;;) {
        ZpVector u = vec_mat_mul(a, code.G()) + base;
        if (typical_with(enc_tester_, u, s_idx, ns, &cache)) return u;
        // next a, lexicographic with the last entry fastest
        size_t i = d.l;
        bool done = true;
        while (i > 0) {
            --i;
            if (++a[i] < p.value()) {
                done = false;
                break;
            }
            a[i] = 0;
        }
        if (done) return std::nullopt;
    }
}

std::optional<LatticePoint> GpSimulator::gp_encode(const GeneratorNestedCode& code, const BinIndex& m,
                                                   const std::vector<double>& s_seq) const {
    std::vector<uint32_t> s_idx(s_seq.size());
    for (size_t i = 0; i < s_seq.size(); ++i) s_idx[i] = uint32_t(s_index_of(s_seq[i]));
    auto u = encode(code, m, s_idx);
    if (!u) return std::nullopt;
    return to_lattice_point(spec_.lattice, *u);
}

size_t GpSimulator::count_typical_candidates(const GeneratorNestedCode& code, const BinIndex& m,
                                             const std::vector<uint32_t>& s_idx) const {
    CodeDims d = code.dims();
    PrimeModulus p = code.modulus();
    ZpVector base = vec_mat_mul(m, code.dG()) + code.B();
    ZpVector a(p, d.l);
    size_t ns = spec_.s_vals.size();
    size_t theta = 0;
    std::unordered_map<uint64_t, bool> cache;
    for (;;) {
        ZpVector u = vec_mat_mul(a, code.G()) + base;
        if (typical_with(enc_tester_, u, s_idx, ns, &cache)) ++theta;
        size_t i = d.l;
        bool done = true;
        while (i > 0) {
            --i;
            if (++a[i] < p.value()) {
                done = false;
                break;
            }
            a[i] = 0;
        }
        if (done) return theta;
    }
}

std::vector<uint32_t> GpSimulator::sample_state(size_t n, Rng& rng) const {
    std::vector<uint32_t> s(n);
    for (auto& v : s) v = uint32_t(rng.sample_cdf(s_cdf_));
    return s;
}

GpSimulator::TransmitResult GpSimulator::transmit(const std::vector<uint32_t>& u_idx,
                                                  const std::vector<uint32_t>& s_idx, Rng& rng) const {
    size_t n = u_idx.size();
    if (s_idx.size() != n) throw std::invalid_argument("gp_transmit: length mismatch");
    TransmitResult r;
    r.x_idx.resize(n);
    r.y_idx.resize(n);
    double cost = 0;
    for (size_t t = 0; t < n; ++t) {
        uint32_t x = uint32_t(rng.sample_cdf(x_cdf_[u_idx[t]][s_idx[t]]));
        r.x_idx[t] = x;
        r.y_idx[t] = uint32_t(rng.sample_cdf(y_cdf_[x][s_idx[t]]));
        cost += spec_.cost[x][s_idx[t]];
    }
    r.block_cost = cost / double(n);
    return r;
}

std::optional<BinIndex> GpSimulator::decode(const GeneratorNestedCode& code,
                                            const std::vector<uint32_t>& y_idx) const {
    CodeDims d = code.dims();
    PrimeModulus p = code.modulus();
    size_t ny = spec_.y_vals.size();
    std::optional<BinIndex> found;
    BinIndex m(p, d.k);
    std::unordered_map<uint64_t, bool> cache;
    for (;;) {
        // does bin m contain a sequence typical with y?
        ZpVector base = vec_mat_mul(m, code.dG()) + code.B();
        ZpVector a(p, d.l);
        bool hit = false;
        for (;;) {
            ZpVector u = vec_mat_mul(a, code.G()) + base;
            if (typical_with(dec_tester_, u, y_idx, ny, &cache)) {
                hit = true;
                break;
            }
            size_t i = d.l;
            bool done = true;
            while (i > 0) {
                --i;
                if (++a[i] < p.value()) {
                    done = false;
                    break;
                }
                a[i] = 0;
            }
            if (done) break;
        }
        if (hit) {
            if (found) return std::nullopt;  // ambiguity
            found = m;
        }
        size_t i = d.k;
        bool done = true;
        while (i > 0) {
            --i;
            if (++m[i] < p.value()) {
                done = false;
                break;
            }
            m[i] = 0;
        }
        if (done) return found;
    }
}

GpTrialRecord GpSimulator::run_trial(CodeDims dims, uint64_t master_seed, uint64_t trial_index) const {
    Rng rng = Rng::for_trial(master_seed, trial_index);
    GeneratorNestedCode code = GeneratorNestedCode::sample(spec_.lattice.p, dims, rng);

    std::vector<uint32_t> s_idx(dims.n);
    for (auto& s : s_idx) s = uint32_t(rng.sample_cdf(s_cdf_));
    BinIndex m = ZpVector::uniform(spec_.lattice.p, dims.k, rng);

    GpTrialRecord rec{};
    rec.trial = trial_index;
    rec.n = dims.n;
    rec.k = dims.k;
    rec.l = dims.l;
    rec.p = spec_.lattice.p.value();
    rec.gamma = spec_.lattice.gamma;
    rec.eps = eps_;
    rec.seed = master_seed;
    rec.stacked_rank = code.stacked_rank();

    auto u = encode(code, m, s_idx);
    rec.encoder_found = u.has_value();
    if (!u) return rec;

    std::vector<uint32_t> u_idx(u->entries().begin(), u->entries().end());
    TransmitResult tr = transmit(u_idx, s_idx, rng);
    rec.block_cost = tr.block_cost;
    rec.budget_exceeded = tr.block_cost > spec_.cost_budget;

    auto decoded = decode(code, tr.y_idx);
    rec.decoded_ok = decoded.has_value() && *decoded == m;
    return rec;
}

}  // namespace nlc
