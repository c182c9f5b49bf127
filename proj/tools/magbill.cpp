#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "magbill/config.hpp"
#include "magbill/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Magnetic-flow and Finsler-billiard verification toolkit"};
    app.name("magbill");

    std::string experiment;
    std::string config_path;
    std::string out_dir;
    long long seed = -1;
    bool verbose = false;

    app.add_option("experiment", experiment,
                   "geodesic | reflect | billiard | string | ellipse | density | verify-all")
        ->required();
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed, "RNG seed (overrides config)");
    app.add_flag("--verbose", verbose, "print per-check lines to stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        magbill::ExperimentConfig cfg = magbill::load_config_file(config_path);
        cfg.experiment = experiment;
        if (!out_dir.empty()) {
            cfg.out_dir = out_dir;
        } else if (cfg.out_dir.empty()) {
            const char* env = std::getenv("MAGBILL_OUT_DIR");
            cfg.out_dir = env ? env : "out";
        }
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        if (verbose) cfg.verbose = true;
        return magbill::run_experiment(cfg);
    } catch (const magbill::ConfigError& e) {
        std::fprintf(stderr, "magbill: config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "magbill: %s\n", e.what());
        return 1;
    }
}
