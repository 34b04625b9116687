#include "nlc/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace nlc {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, sep)) out.push_back(trim(tok));
    return out;
}

uint64_t parse_u64(const std::string& v, const std::string& key, int line_no) {
    try {
        size_t pos = 0;
        uint64_t r = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return r;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line_no) + ": field '" + key +
                          "' expects an unsigned integer, got '" + v + "'");
    }
}

double parse_double(const std::string& v, const std::string& key, int line_no) {
    try {
        size_t pos = 0;
        double r = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return r;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line_no) + ": field '" + key +
                          "' expects a number, got '" + v + "'");
    }
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    std::filesystem::create_directories(dir);
    std::filesystem::path path = std::filesystem::path(dir) / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

template <typename Fn>
void parallel_for(size_t count, unsigned workers, Fn fn) {
    if (workers <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= count) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

double wilson_half(double rate, uint64_t n) {
    if (n == 0) return 0;
    return 1.959963984540054 * std::sqrt(rate * (1 - rate) / double(n));
}

std::vector<std::vector<double>> parse_csv_numbers(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (first) {  // header
            first = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> row;
        for (const std::string& tok : split(line, ',')) row.push_back(std::stod(tok));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" + t + "'");
        cfg.apply(trim(t.substr(0, eq)), trim(t.substr(eq + 1)), line_no);
    }
    return cfg;
}

void ExperimentConfig::apply(const std::string& key, const std::string& value, int line_no) {
    auto u64_list = [&](std::vector<size_t>& dst) {
        dst.clear();
        for (const std::string& tok : split(value, ','))
            dst.push_back(size_t(parse_u64(tok, key, line_no)));
    };
    if (key == "mode")
        mode = value;
    else if (key == "instance")
        instance = value;
    else if (key == "n")
        u64_list(n_list);
    else if (key == "k")
        u64_list(k_list);
    else if (key == "l")
        u64_list(l_list);
    else if (key == "rate_mult")
        rate_mult = parse_double(value, key, line_no);
    else if (key == "enc_frac")
        enc_frac = parse_double(value, key, line_no);
    else if (key == "dec_frac")
        dec_frac = parse_double(value, key, line_no);
    else if (key == "eps")
        eps = parse_double(value, key, line_no);
    else if (key == "trials")
        trials = parse_u64(value, key, line_no);
    else if (key == "samples")
        samples = parse_u64(value, key, line_no);
    else if (key == "steps")
        steps = int(parse_u64(value, key, line_no));
    else if (key == "clip_levels") {
        clip_levels.clear();
        for (const std::string& tok : split(value, ','))
            clip_levels.push_back(parse_double(tok, key, line_no));
    } else if (key == "seed")
        master_seed = parse_u64(value, key, line_no);
    else if (key == "out")
        out_dir = value;
    else if (key == "workers")
        workers = unsigned(parse_u64(value, key, line_no));
    else
        throw ConfigError("line " + std::to_string(line_no) + ": unknown field '" + key + "'");
}

void ExperimentConfig::validate() const {
    if (mode != "gp" && mode != "wz" && mode != "verify" && mode != "exponent" && mode != "quantize")
        throw ConfigError("mode must be one of gp|wz|verify|exponent|quantize, got '" + mode + "'");
    if (!instance.empty() && instance != "gp-z3-flip01" && instance != "wz-z3-flip01" &&
        instance != "gauss-rho08" && instance != "binary-exponent-d1")
        throw ConfigError("unknown instance '" + instance + "'");
    if (!(eps > 0)) throw ConfigError("eps must be positive");
    if (trials == 0) throw ConfigError("trials must be positive");
    if (samples == 0) throw ConfigError("samples must be positive");
    if (steps <= 0) throw ConfigError("steps must be positive");
    if (!(rate_mult > 0) || rate_mult > 2) throw ConfigError("rate_mult must be in (0, 2]");
    if (!(enc_frac > 0) || enc_frac > 2 || !(dec_frac > 0) || dec_frac > 2)
        throw ConfigError("enc_frac/dec_frac must be in (0, 2]");
    if (workers == 0) throw ConfigError("workers must be positive");
    if (!k_list.empty() && k_list.size() != n_list.size())
        throw ConfigError("k list must match n list length");
    if (!l_list.empty() && l_list.size() != n_list.size())
        throw ConfigError("l list must match n list length");
    for (size_t n : n_list)
        if (n == 0) throw ConfigError("n entries must be positive");
}

ChannelSpec make_gp_z3_flip01() {
    ChannelSpec spec{LatticeParams(1.0, PrimeModulus(3)),
                     /*s_vals=*/{0.0, 1.0},
                     /*p_s=*/{0.5, 0.5},
                     /*p_u_given_s=*/{},
                     /*x_vals=*/{-1.0, 0.0, 1.0},
                     /*w_x_given_us=*/{},
                     /*y_vals=*/{-1.0, 0.0, 1.0},
                     /*w_y_given_xs=*/{},
                     /*cost=*/{},
                     /*cost_budget=*/0.7};
    spec.p_u_given_s = {{1.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    // X = U deterministically; Y = X with prob 0.9, each other symbol 0.05.
    spec.w_x_given_us.resize(3);
    for (size_t iu = 0; iu < 3; ++iu) {
        spec.w_x_given_us[iu].resize(2);
        for (size_t is = 0; is < 2; ++is) {
            std::vector<double> row(3, 0.0);
            row[iu] = 1.0;
            spec.w_x_given_us[iu][is] = row;
        }
    }
    spec.w_y_given_xs.resize(3);
    for (size_t ix = 0; ix < 3; ++ix) {
        spec.w_y_given_xs[ix].resize(2);
        for (size_t is = 0; is < 2; ++is) {
            std::vector<double> row(3, 0.05);
            row[ix] = 0.9;
            spec.w_y_given_xs[ix][is] = row;
        }
    }
    spec.cost.resize(3);
    for (size_t ix = 0; ix < 3; ++ix)
        spec.cost[ix] = {spec.x_vals[ix] * spec.x_vals[ix], spec.x_vals[ix] * spec.x_vals[ix]};
    spec.validate();
    return spec;
}

SourceSpec make_wz_z3_flip01() {
    SourceSpec spec{LatticeParams(1.0, PrimeModulus(3))};
    spec.x_vals = {-1.0, 0.0, 1.0};
    spec.s_vals = {-1.0, 0.0, 1.0};
    // X uniform; S = X with prob 0.9, each other symbol 0.05; the test
    // channel flips the same way, keeping U - X - S Markov.
    spec.p_xs.resize(3);
    spec.w_u_given_x.resize(3);
    for (size_t ix = 0; ix < 3; ++ix) {
        std::vector<double> flip(3, 0.05);
        flip[ix] = 0.9;
        spec.w_u_given_x[ix] = flip;
        spec.p_xs[ix].resize(3);
        for (size_t is = 0; is < 3; ++is) spec.p_xs[ix][is] = flip[is] / 3.0;
    }
    // Squared-error reconstruction f(s, u) = E[X | S=s, U=u], with the
    // U-channel taken at the design flip rate 0.1 + eps rather than 0.1:
    // weak*-typical encoding admits empirical test channels up to eps away
    // from the model, and the first-typical-candidate rule tends to land on
    // that boundary, so the estimator hedges toward the side information.
    const double design_flip = 0.1 + 0.25;
    spec.f_val.assign(3, std::vector<double>(3, 0.0));
    for (size_t is = 0; is < 3; ++is)
        for (size_t iu = 0; iu < 3; ++iu) {
            double num = 0, den = 0;
            for (size_t ix = 0; ix < 3; ++ix) {
                double wu = ix == iu ? 1.0 - design_flip : design_flip / 2.0;
                double w = spec.w_u_given_x[ix][is] * wu / 3.0;
                num += w * spec.x_vals[ix];
                den += w;
            }
            spec.f_val[is][iu] = num / den;
        }
    spec.distortion = [](double x, double xhat) {
        double d = x - xhat;
        return d * d;
    };
    spec.target_d = 0.25;
    spec.validate();
    return spec;
}

GridJoint2D make_gauss_rho08() { return GridJoint2D::gaussian(0.8); }

ExponentInstance make_binary_exponent_d1() {
    FiniteMeasure p_xy(2, {{{0.0, 0.0}, 0.5}, {{1.0, 1.0}, 0.5}});
    FiniteMeasure p_z(1, {{{0.0}, 0.5}, {{1.0}, 0.5}});
    return {std::move(p_xy), std::move(p_z), {8, 12, 16, 20}, 0.04};
}

CodeDims gp_dims_for(size_t n, double mult, const GpThresholds& th, uint32_t p) {
    double log2p = std::log2(double(p));
    size_t kl = size_t(std::lround(mult * th.dec_bound * double(n) / log2p));
    if (kl < 2) kl = 2;
    size_t k = kl / 2;
    if (k == 0) k = 1;
    size_t l = kl - k;
    if (l == 0) l = 1;
    return {n, k, l};
}

CodeDims wz_dims_for(size_t n, const WzThresholds& th, uint32_t p, double enc_frac, double dec_frac) {
    double log2p = std::log2(double(p));
    size_t l = size_t(std::lround(enc_frac * th.enc_bound * double(n) / log2p));
    if (l == 0) l = 1;
    size_t kl = size_t(std::ceil(dec_frac * th.dec_bound * double(n) / log2p));
    if (kl <= l) kl = l + 1;
    return {n, kl - l, l};
}

namespace {

std::string gp_trials_csv(const std::vector<GpTrialRecord>& recs) {
    std::ostringstream os;
    os << "trial,n,k,l,p,gamma,eps,encoder_found,decoded_ok,block_cost,stacked_rank\n";
    for (const GpTrialRecord& r : recs)
        os << r.trial << "," << r.n << "," << r.k << "," << r.l << "," << r.p << "," << fmt(r.gamma)
           << "," << fmt(r.eps) << "," << (r.encoder_found ? 1 : 0) << "," << (r.decoded_ok ? 1 : 0)
           << "," << fmt(r.encoder_found ? r.block_cost : 0.0) << "," << r.stacked_rank << "\n";
    return os.str();
}

std::string wz_trials_csv(const std::vector<WzTrialRecord>& recs) {
    std::ostringstream os;
    os << "trial,n,k,l,p,gamma,eps,encoder_found,decoder_unique,block_distortion,rank_H\n";
    for (const WzTrialRecord& r : recs)
        os << r.trial << "," << r.n << "," << r.k << "," << r.l << "," << r.p << "," << fmt(r.gamma)
           << "," << fmt(r.eps) << "," << (r.encoder_found ? 1 : 0) << ","
           << (r.decoder_unique ? 1 : 0) << ","
           << fmt(r.encoder_found && r.decoder_unique ? r.block_distortion : 0.0) << "," << r.rank_H
           << "\n";
    return os.str();
}

// Aggregate computed from parsed per-trial rows; the in-memory aggregate
// must match exactly (self-consistency contract).
SweepRow aggregate_rows(const std::vector<std::vector<double>>& rows, size_t n, size_t k, size_t l,
                        bool metric_needs_decoder) {
    SweepRow a{};
    a.n = n;
    a.k = k;
    a.l = l;
    uint64_t enc_fail = 0, dec_err = 0, enc_ok = 0, success = 0, metric_count = 0;
    double metric_sum = 0;
    for (const auto& r : rows) {
        if (size_t(r[1]) != n || size_t(r[2]) != k || size_t(r[3]) != l) continue;
        ++a.trials;
        bool found = r[7] != 0;
        bool decoded = r[8] != 0;
        if (!found) {
            ++enc_fail;
            continue;
        }
        ++enc_ok;
        if (!decoded) ++dec_err;
        if (decoded) ++success;
        bool count_metric = metric_needs_decoder ? decoded : true;
        if (count_metric) {
            metric_sum += r[9];
            ++metric_count;
        }
    }
    a.encoder_failure_rate = a.trials ? double(enc_fail) / double(a.trials) : 0.0;
    a.decode_error_rate = enc_ok ? double(dec_err) / double(enc_ok) : 1.0;
    a.success_rate = a.trials ? double(success) / double(a.trials) : 0.0;
    a.mean_metric = metric_count ? metric_sum / double(metric_count) : 0.0;
    a.ci_half = wilson_half(a.decode_error_rate, enc_ok);
    return a;
}

std::string aggregate_csv(const SweepReport& rep) {
    std::ostringstream os;
    os << "n,k,l,trials,encoder_failure_rate,decode_error_rate,success_rate,mean_metric,ci_half,"
          "enc_bound,dec_bound,rate\n";
    for (const SweepRow& r : rep.rows)
        os << r.n << "," << r.k << "," << r.l << "," << r.trials << ","
           << fmt(r.encoder_failure_rate) << "," << fmt(r.decode_error_rate) << ","
           << fmt(r.success_rate) << "," << fmt(r.mean_metric) << "," << fmt(r.ci_half) << ","
           << fmt(rep.enc_bound) << "," << fmt(rep.dec_bound) << "," << fmt(rep.rate) << "\n";
    return os.str();
}

bool rows_equal(const SweepRow& a, const SweepRow& b) {
    return a.n == b.n && a.k == b.k && a.l == b.l && a.trials == b.trials &&
           a.encoder_failure_rate == b.encoder_failure_rate &&
           a.decode_error_rate == b.decode_error_rate && a.success_rate == b.success_rate &&
           a.mean_metric == b.mean_metric && a.ci_half == b.ci_half;
}

SweepReport run_gp(const ExperimentConfig& cfg) {
    ChannelSpec spec = make_gp_z3_flip01();
    GpThresholds th = gp_rate_thresholds(spec);
    GpSimulator sim(spec, cfg.eps);

    std::vector<size_t> ns = cfg.n_list.empty() ? std::vector<size_t>{6, 9, 12} : cfg.n_list;
    SweepReport rep;
    rep.mode = "gp";
    rep.enc_bound = th.enc_bound;
    rep.dec_bound = th.dec_bound;
    rep.rate = th.rate_mi;

    std::vector<GpTrialRecord> all;
    for (size_t i = 0; i < ns.size(); ++i) {
        CodeDims dims = cfg.k_list.empty() ? gp_dims_for(ns[i], cfg.rate_mult, th, spec.lattice.p.value())
                                            : CodeDims{ns[i], cfg.k_list[i], cfg.l_list[i]};
        std::vector<GpTrialRecord> recs(cfg.trials);
        parallel_for(cfg.trials, cfg.workers, [&](size_t t) {
            recs[t] = sim.run_trial(dims, cfg.master_seed + i, t);
        });
        all.insert(all.end(), recs.begin(), recs.end());

        std::vector<std::vector<double>> rows;
        for (const GpTrialRecord& r : recs)
            rows.push_back({double(r.trial), double(r.n), double(r.k), double(r.l), double(r.p),
                            r.gamma, r.eps, r.encoder_found ? 1.0 : 0.0, r.decoded_ok ? 1.0 : 0.0,
                            r.encoder_found ? r.block_cost : 0.0, double(r.stacked_rank)});
        rep.rows.push_back(aggregate_rows(rows, dims.n, dims.k, dims.l, false));
    }

    std::string trials_text = gp_trials_csv(all);
    // Self-consistency: aggregates recomputed from the serialized rows must
    // match the in-memory aggregates exactly.
    std::vector<std::vector<double>> parsed = parse_csv_numbers(trials_text);
    for (const SweepRow& row : rep.rows)
        if (!rows_equal(row, aggregate_rows(parsed, row.n, row.k, row.l, false)))
            throw std::logic_error("gp aggregate does not match per-trial CSV");
    write_file(cfg.out_dir, "gp_trials.csv", trials_text);
    write_file(cfg.out_dir, "gp_aggregate.csv", aggregate_csv(rep));
    return rep;
}

SweepReport run_wz(const ExperimentConfig& cfg) {
    SourceSpec spec = make_wz_z3_flip01();
    WzThresholds th = wz_rate_thresholds(spec);
    WzSimulator sim(spec, cfg.eps);

    std::vector<size_t> ns = cfg.n_list.empty() ? std::vector<size_t>{6, 9, 12} : cfg.n_list;
    SweepReport rep;
    rep.mode = "wz";
    rep.enc_bound = th.enc_bound;
    rep.dec_bound = th.dec_bound;
    rep.rate = th.rate_mi;

    std::vector<WzTrialRecord> all;
    for (size_t i = 0; i < ns.size(); ++i) {
        CodeDims dims = cfg.k_list.empty()
                            ? wz_dims_for(ns[i], th, spec.lattice.p.value(), cfg.enc_frac, cfg.dec_frac)
                            : CodeDims{ns[i], cfg.k_list[i], cfg.l_list[i]};
        std::vector<WzTrialRecord> recs(cfg.trials);
        parallel_for(cfg.trials, cfg.workers, [&](size_t t) {
            recs[t] = sim.run_trial(dims, cfg.master_seed + i, t);
        });
        all.insert(all.end(), recs.begin(), recs.end());

        std::vector<std::vector<double>> rows;
        for (const WzTrialRecord& r : recs)
            rows.push_back({double(r.trial), double(r.n), double(r.k), double(r.l), double(r.p),
                            r.gamma, r.eps, r.encoder_found ? 1.0 : 0.0,
                            r.decoder_unique ? 1.0 : 0.0,
                            r.encoder_found && r.decoder_unique ? r.block_distortion : 0.0,
                            double(r.rank_H)});
        rep.rows.push_back(aggregate_rows(rows, dims.n, dims.k, dims.l, true));
    }

    std::string trials_text = wz_trials_csv(all);
    std::vector<std::vector<double>> parsed = parse_csv_numbers(trials_text);
    for (const SweepRow& row : rep.rows)
        if (!rows_equal(row, aggregate_rows(parsed, row.n, row.k, row.l, true)))
            throw std::logic_error("wz aggregate does not match per-trial CSV");
    write_file(cfg.out_dir, "wz_trials.csv", trials_text);
    write_file(cfg.out_dir, "wz_aggregate.csv", aggregate_csv(rep));
    return rep;
}

SweepReport run_verify(const ExperimentConfig& cfg) {
    SweepReport rep;
    rep.mode = "verify";
    std::vector<LemmaReport>& lr = rep.lemmas;
    if (!cfg.n_list.empty()) {
        for (size_t i = 0; i < cfg.n_list.size(); ++i) {
            size_t n = cfg.n_list[i];
            size_t k = cfg.k_list.empty() ? 1 : cfg.k_list[i];
            size_t l = cfg.l_list.empty() ? 1 : cfg.l_list[i];
            PrimeModulus p(3);
            lr.push_back(verify_g_uniform(p, n, k, l));
            lr.push_back(verify_pairwise_independence(p, n, k, l, PairCase::same_m_diff_a));
            lr.push_back(verify_pairwise_independence(p, n, k, l, PairCase::diff_m));
            lr.push_back(verify_parity_uniform_independent(p, n, l));
        }
    } else {
        PrimeModulus p3(3), p5(5);
        for (size_t n : {size_t(1), size_t(2)}) {
            lr.push_back(verify_g_uniform(p3, n, 1, 1));
            lr.push_back(verify_pairwise_independence(p3, n, 1, 1, PairCase::same_m_diff_a));
            lr.push_back(verify_pairwise_independence(p3, n, 1, 1, PairCase::diff_m));
            lr.push_back(verify_parity_uniform_independent(p3, n, 1));
        }
        lr.push_back(verify_rank_distribution(p3, 2, 1));
        lr.push_back(verify_rank_distribution(p3, 2, 2));
        lr.push_back(verify_rank_distribution(p5, 2, 1));
    }
    std::ostringstream csv;
    csv << lemma_csv_header();
    for (const LemmaReport& r : lr) {
        csv << to_csv_row(r);
        if (r.verdict == Verdict::fail) rep.failed = true;
    }
    write_file(cfg.out_dir, "lemmas.csv", csv.str());
    return rep;
}

SweepReport run_exponent(const ExperimentConfig& cfg) {
    ExponentInstance inst = make_binary_exponent_d1();
    std::vector<size_t> grid = cfg.n_list.empty() ? inst.n_grid : cfg.n_list;
    SweepReport rep;
    rep.mode = "exponent";
    rep.exponents =
        estimate_typicality_exponent(inst.p_xy, inst.p_z, grid, cfg.samples, inst.eps, cfg.master_seed);
    std::ostringstream csv;
    csv << "n,samples,hits,p_hat,exponent,exponent_lo,exponent_hi\n";
    for (const ExponentPoint& e : rep.exponents)
        csv << e.n << "," << e.samples << "," << e.hits << "," << fmt(e.p_hat) << ","
            << fmt(e.exponent) << "," << fmt(e.exponent_lo) << "," << fmt(e.exponent_hi) << "\n";
    write_file(cfg.out_dir, "exponent.csv", csv.str());
    return rep;
}

SweepReport run_quantize(const ExperimentConfig& cfg) {
    GridJoint2D ref = make_gauss_rho08();
    SweepReport rep;
    rep.mode = "quantize";
    rep.refinement = mi_refinement_sweep(ref, dyadic_schedule(cfg.steps));
    rep.clipping = clipping_sweep(ref, cfg.clip_levels);
    std::ostringstream r1;
    r1 << "n,gamma,p,mi_bits,prokhorov_to_ref\n";
    for (const RefinementStep& s : rep.refinement)
        r1 << s.n << "," << fmt(s.gamma) << "," << s.p << "," << fmt(s.mi_bits) << ","
           << fmt(s.prokhorov_to_ref) << "\n";
    write_file(cfg.out_dir, "refinement.csv", r1.str());
    std::ostringstream r2;
    r2 << "level,mi_bits\n";
    for (const ClipStep& s : rep.clipping) r2 << fmt(s.level) << "," << fmt(s.mi_bits) << "\n";
    write_file(cfg.out_dir, "clipping.csv", r2.str());
    return rep;
}

}  // namespace

SweepReport run(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.mode == "gp") return run_gp(cfg);
    if (cfg.mode == "wz") return run_wz(cfg);
    if (cfg.mode == "verify") return run_verify(cfg);
    if (cfg.mode == "exponent") return run_exponent(cfg);
    return run_quantize(cfg);
}

std::string emit_plotdata(const SweepReport& report) {
    std::ostringstream os;
    os << "# n k l trials encoder_failure_rate decode_error_rate success_rate mean_metric ci_half\n";
    for (const SweepRow& r : report.rows)
        os << r.n << " " << r.k << " " << r.l << " " << r.trials << " "
           << fmt(r.encoder_failure_rate) << " " << fmt(r.decode_error_rate) << " "
           << fmt(r.success_rate) << " " << fmt(r.mean_metric) << " " << fmt(r.ci_half) << "\n";
    return os.str();
}

}  // namespace nlc
