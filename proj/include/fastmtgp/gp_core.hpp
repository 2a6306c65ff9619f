#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fastmtgp/cubature_types.hpp"
#include "fastmtgp/dense_baseline.hpp"
#include "fastmtgp/fast_gram.hpp"
#include "fastmtgp/kernels.hpp"
#include "fastmtgp/ld_sequences.hpp"

// Multitask GP fitting (NMLL/GCV, closed-form prior means, Rprop) and
// posterior inference. The fast transform path and the dense Cholesky path
// share this interface; se_dense always runs dense.

namespace fastmtgp {

enum class LossKind { nmll, gcv };

struct FitReport {
    std::vector<double> loss_trace;      // best-so-far after each step
    std::vector<double> step_seconds;    // wall time per step
    int steps = 0;
    int jitter_escalations = 0;
    Eigen::VectorXd tau;                 // user task order
    double final_loss = 0.0;
};

struct GpModel {
    LdDesign design;
    KernelFamily family = KernelFamily::dsi_digital;
    Hyperparams hyper;          // task-indexed fields in USER order
    std::vector<double> y;      // internal task order, length N
    LossKind loss = LossKind::nmll;

    // caches (internal order)
    std::optional<BlockSpectrum> spec;
    std::optional<BlockInverse> inv;
    std::optional<DenseGram> dense;
    Eigen::VectorXd tau_internal;
    std::vector<double> c;      // Ktilde^{-1} (y - E tau)
    int jitter_escalations = 0;
    double xi_effective = 0.0;  // after any escalation

    bool dense_path() const { return family == KernelFamily::se_dense; }
    void invalidate();
    // Rebuild spectrum/factorization, solve for tau (closed form) and c.
    // Applies the noise escalation schedule (x10, at most 6 times) on
    // SchurBreakdown / Cholesky failure.
    void refresh();
    bool fresh() const { return !c.empty(); }
};

// Observations in user task order per task; sizes must match the design.
GpModel make_model(LdDesign design, KernelFamily family, Hyperparams hyper,
                   const std::vector<std::vector<double>>& y_user, LossKind loss);

// Default-initialized hyperparameters for a fit: gamma = var(y), eta = 1,
// B ~ N(0, 0.1^2) (L x s), t = 0.1, b = (1,1,1,1), lengthscales = 0.25.
Hyperparams init_hyperparams(KernelFamily family, int d, int L, int s,
                             const std::vector<double>& y, double xi, std::uint64_t seed);

double nmll(GpModel& model);
double gcv(GpModel& model);
double loss_value(GpModel& model, LossKind kind);

// Closed-form optimal prior means (user order): Pi tau = E^T Ktilde^{-1} y
// for NMLL, Re(H Hbar^T) tau = E^T Ktilde^{-2} y for GCV.
Eigen::VectorXd optimal_tau(GpModel& model, LossKind kind);

// iRprop- on the unconstrained (log) parameters, central finite-difference
// gradients, tau refreshed in closed form every evaluation. Deterministic
// given (model, steps, kind).
FitReport fit(GpModel& model, int steps, LossKind kind);

double posterior_mean(const GpModel& model, int user_task, const double* x);
std::vector<double> posterior_mean_batch(const GpModel& model, int user_task,
                                         const std::vector<double>& X, std::size_t count);
double posterior_cov(const GpModel& model, int user_task, const double* x,
                     int user_task2, const double* xp);

// Model document (JSON): design descriptor, hyperparameters, observations.
std::string model_to_json(const GpModel& model);
GpModel model_from_json(const std::string& text);

}  // namespace fastmtgp
