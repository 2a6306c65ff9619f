#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fastmtgp/gp_core.hpp"
#include "fastmtgp/problems.hpp"

// Benchmark/CLI driver layer: reproducible trial runs, CSV/JSON records,
// timing-scaling sweeps. All randomness derives from (config, seed): trial k
// shifts use seed+k, hyperparameter initialization an independent substream.

namespace fastmtgp {

struct RunConfig {
    std::string subcommand;
    std::string problem = "ackley";
    std::string kernel = "dsi-digital";   // si-lattice | dsi-digital | se-dense
    std::string loss = "nmll";
    std::vector<int> m;                   // log2 sample size per task (user order)
    int steps = 100;
    int trials = 1;
    std::uint64_t seed = 0;
    double noise = 0.0;                   // observation noise stddev added to y
    double jitter = 1e-8;                 // xi for the fast families
    int task_rank = 1;                    // s, columns of B
    std::string out;                      // output path ("" = stdout)
    std::string model_out;                // cmd_fit: model document path
    std::size_t test_points = 2048;
    std::size_t dense_cap = kDenseCap;
    int dims = 0;                         // cmd_points without a problem (0 = problem's d)
};

// Flags-over-file merge: parse `path` (JSON) then overwrite with any flag
// that was explicitly set on the command line.
RunConfig config_from_json(const std::string& path);

KernelFamily parse_kernel(const std::string& name);
LossKind parse_loss(const std::string& name);

struct TrialResult {
    int trial = 0;
    double time_per_step = 0.0;   // median over steps, seconds
    double l2_rel_error = 0.0;    // highest-fidelity task on the held-out set
    double cubature_abs_error = 0.0;  // task L vs frozen reference integral
    double final_loss = 0.0;
    std::vector<double> l2_rel_error_task;  // per task (user order)
};

// One fit trial: build design (seed+trial), evaluate the problem, fit,
// score on the 2048-point held-out set, run cubature.
TrialResult run_trial(const RunConfig& cfg, int trial);

// Trained-model scoring helpers shared with tests.
double l2_relative_error(const GpModel& model, const Problem& p, int user_task,
                         const std::vector<double>& Xtest, std::size_t count);
std::vector<double> test_set(const RunConfig& cfg, const Problem& p);

int cmd_points(const RunConfig& cfg, std::ostream& os);
int cmd_fit(const RunConfig& cfg, std::ostream& os);
int cmd_cubature(const RunConfig& cfg, std::ostream& os);
int cmd_bench(const RunConfig& cfg, std::ostream& os);
int cmd_scaling(const RunConfig& cfg, std::ostream& os);

// build_spectrum + invert_and_logdet wall time for one n-vector, median of
// `repeats` runs (cmd_scaling's primitive; exposed for the property checks).
double time_build_invert(SeqKind kind, KernelFamily family, const std::vector<int>& m,
                         std::uint64_t seed, int repeats);
// Median wall time of one Rprop step (loss + finite-difference gradient).
double time_per_step(const RunConfig& cfg, int steps);

}  // namespace fastmtgp
