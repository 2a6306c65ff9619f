#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "fastmtgp/bench.hpp"
#include "fastmtgp/common.hpp"

namespace {

// --config is applied before flag parsing so explicit flags always win
fastmtgp::RunConfig preload_config(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") return fastmtgp::config_from_json(argv[i + 1]);
    return {};
}

void add_common(CLI::App* sub, fastmtgp::RunConfig& cfg, std::vector<std::size_t>& sizes,
                std::string& config_path) {
    sub->add_option("--problem", cfg.problem, "ackley | borehole | elliptic | rosenbrock");
    sub->add_option("--kernel", cfg.kernel, "si-lattice | dsi-digital | se-dense");
    sub->add_option("--loss", cfg.loss, "nmll | gcv");
    sub->add_option("--n", sizes, "samples per task, powers of two (user task order)")
        ->delimiter(',');
    sub->add_option("--steps", cfg.steps, "optimizer steps");
    sub->add_option("--trials", cfg.trials, "independent trials");
    sub->add_option("--seed", cfg.seed, "base seed; trial k shifts use seed+k");
    sub->add_option("--noise", cfg.noise, "observation noise stddev");
    sub->add_option("--jitter", cfg.jitter, "per-task noise floor xi");
    sub->add_option("--task-rank", cfg.task_rank, "columns of the task factor B");
    sub->add_option("--test-points", cfg.test_points, "held-out set size");
    sub->add_option("--dense-cap", cfg.dense_cap, "largest N the dense path accepts");
    sub->add_option("--d", cfg.dims, "dimension override (points only)");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_option("--config", config_path, "JSON config file; flags win (read before parsing)");
}

}  // namespace

int main(int argc, char** argv) {
    fastmtgp::RunConfig cfg;
    std::string config_path;
    try {
        cfg = preload_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    CLI::App app{"fast multitask GP regression and Bayesian cubature on lattices and digital nets"};
    app.require_subcommand(1);
    std::vector<std::size_t> sizes;

    CLI::App* points = app.add_subcommand("points", "emit the per-task designs as CSV");
    CLI::App* fit = app.add_subcommand("fit", "fit a model on a benchmark problem (JSON report)");
    fit->add_option("--model-out", cfg.model_out, "write the fitted model document here");
    CLI::App* cubature = app.add_subcommand("cubature", "fit, then report posterior integrals (JSON)");
    CLI::App* bench = app.add_subcommand("bench", "trial sweep with per-trial and median rows (CSV)");
    CLI::App* scaling = app.add_subcommand("scaling", "build+invert timing sweep (CSV)");
    for (CLI::App* sub : {points, fit, cubature, bench, scaling})
        add_common(sub, cfg, sizes, config_path);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!sizes.empty()) {
            cfg.m.clear();
            for (std::size_t n : sizes) cfg.m.push_back(fastmtgp::log2_exact(n));
        }
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!cfg.out.empty()) {
            file.open(cfg.out);
            if (!file) throw fastmtgp::FastMtgpError("cannot open output: " + cfg.out);
            os = &file;
        }
        if (points->parsed()) return fastmtgp::cmd_points(cfg, *os);
        if (fit->parsed()) return fastmtgp::cmd_fit(cfg, *os);
        if (cubature->parsed()) return fastmtgp::cmd_cubature(cfg, *os);
        if (bench->parsed()) return fastmtgp::cmd_bench(cfg, *os);
        if (scaling->parsed()) return fastmtgp::cmd_scaling(cfg, *os);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
