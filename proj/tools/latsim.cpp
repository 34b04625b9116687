#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "nlc/harness.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    uint64_t seed = 0;
    uint64_t trials = 0;
    unsigned workers = 0;
    bool seed_set = false, trials_set = false, workers_set = false, out_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "experiment config file (key=value lines)");
    cmd->add_option("--seed", f.seed, "master seed")->each([&](const std::string&) { f.seed_set = true; });
    cmd->add_option("--trials", f.trials, "Monte Carlo trials per sweep point")
        ->each([&](const std::string&) { f.trials_set = true; });
    cmd->add_option("--out", f.out_dir, "output directory for CSV files")
        ->each([&](const std::string&) { f.out_set = true; });
    cmd->add_option("--workers", f.workers, "worker threads for trial-level parallelism")
        ->each([&](const std::string&) { f.workers_set = true; });
}

int run_mode(const std::string& mode, const CommonFlags& f) {
    nlc::ExperimentConfig cfg;
    try {
        if (!f.config_path.empty()) cfg = nlc::ExperimentConfig::from_file(f.config_path);
        cfg.mode = mode;
        if (f.seed_set) cfg.master_seed = f.seed;
        if (f.trials_set) cfg.trials = f.trials;
        if (f.out_set) cfg.out_dir = f.out_dir;
        if (f.workers_set) cfg.workers = f.workers;
        cfg.validate();
    } catch (const nlc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    try {
        nlc::SweepReport rep = nlc::run(cfg);
        if (rep.mode == "verify") {
            for (const nlc::LemmaReport& r : rep.lemmas) std::fputs(nlc::to_text(r).c_str(), stdout);
            if (rep.failed) {
                std::fprintf(stderr, "verification failure\n");
                return 1;
            }
        } else if (!rep.rows.empty()) {
            std::fputs(nlc::emit_plotdata(rep).c_str(), stdout);
        }
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nested lattice code experiments"};
    app.require_subcommand(1);

    const char* modes[] = {"verify", "gp", "wz", "exponent", "quantize"};
    const char* help[] = {"exhaustive ensemble lemma checks",
                          "channel-with-state simulation sweep",
                          "source-with-side-information simulation sweep",
                          "typicality-probability exponent estimation",
                          "dyadic quantization refinement and clipping sweeps"};
    CommonFlags flags[5];
    CLI::App* cmds[5];
    for (int i = 0; i < 5; ++i) {
        cmds[i] = app.add_subcommand(modes[i], help[i]);
        add_common(cmds[i], flags[i]);
    }

    CLI11_PARSE(app, argc, argv);

    for (int i = 0; i < 5; ++i)
        if (cmds[i]->parsed()) return run_mode(modes[i], flags[i]);
    return 2;
}
