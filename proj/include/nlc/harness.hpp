#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nlc/gp.hpp"
#include "nlc/quantization.hpp"
#include "nlc/verify.hpp"
#include "nlc/wz.hpp"

namespace nlc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value experiment description ('#' comments). Unknown keys and
// malformed values are reported with their line number.
struct ExperimentConfig {
    std::string mode;      // gp | wz | verify | exponent | quantize
    std::string instance;  // built-in instance name; default chosen per mode

    std::vector<size_t> n_list;
    std::vector<size_t> k_list, l_list;  // explicit dims; empty = derive from multipliers
    double rate_mult = 0.5;              // gp: (k+l) log p / n relative to the decoding bound
    double enc_frac = 0.9, dec_frac = 1.1;  // wz placement inside the two bounds

    double eps = 0.25;
    uint64_t trials = 2000;
    uint64_t samples = 10000000;  // exponent mode
    int steps = 7;                // quantize refinement steps
    std::vector<double> clip_levels{0.5, 1, 2, 3, 4, 5, 6, 7, 8};
    uint64_t master_seed = 20250801;
    std::string out_dir = ".";
    unsigned workers = 1;

    static ExperimentConfig from_file(const std::string& path);
    void apply(const std::string& key, const std::string& value, int line_no);
    void validate() const;
};

struct SweepRow {
    size_t n, k, l;
    uint64_t trials;
    double encoder_failure_rate;
    double decode_error_rate;  // among encoder successes
    double success_rate;       // encoder and decoder both succeed
    double mean_metric;        // gp: block cost | wz: conditional block distortion
    double ci_half;            // 95% half-width on decode_error_rate
};

struct SweepReport {
    std::string mode;
    double enc_bound = 0, dec_bound = 0, rate = 0;
    std::vector<SweepRow> rows;
    std::vector<LemmaReport> lemmas;
    std::vector<ExponentPoint> exponents;
    std::vector<RefinementStep> refinement;
    std::vector<ClipStep> clipping;
    bool failed = false;
};

// Built-in reference instances.
ChannelSpec make_gp_z3_flip01();
SourceSpec make_wz_z3_flip01();
GridJoint2D make_gauss_rho08();
struct ExponentInstance {
    FiniteMeasure p_xy;
    FiniteMeasure p_z;
    std::vector<size_t> n_grid;
    double eps;
};
ExponentInstance make_binary_exponent_d1();

// Code dimensions placing ((k+l)/n) log2 p at mult * dec_bound (gp) or the
// two wz rates at enc_frac/dec_frac of their bounds.
CodeDims gp_dims_for(size_t n, double mult, const GpThresholds& th, uint32_t p);
CodeDims wz_dims_for(size_t n, const WzThresholds& th, uint32_t p, double enc_frac, double dec_frac);

// Executes the configured experiment, writing per-trial and aggregate CSV
// files under out_dir. Byte-identical output for identical config and seed.
SweepReport run(const ExperimentConfig& cfg);

// gnuplot-style columns with a commented header line.
std::string emit_plotdata(const SweepReport& report);

}  // namespace nlc
