#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "fastmtgp/common.hpp"

// Spatial kernels (squared exponential, shift-invariant Bernoulli,
// digitally-shift-invariant Walsh), the task kernel R = B B^T + diag(t),
// and the multitask product kernel R(l,l') * Q(x,x').

namespace fastmtgp {

enum class KernelFamily { si_lattice, dsi_digital, se_dense };

// All model parameters. Positive parameters (gamma, eta, b, t, lengthscales)
// are optimized through their natural logs; B is unconstrained; xi is fixed
// during optimization; tau is set in closed form.
struct Hyperparams {
    double gamma = 1.0;
    std::vector<double> eta;              // per-dimension product weights
    int si_alpha = 1;                     // 1 | 2
    std::array<double, 4> b{1, 1, 1, 1};  // DSI order weights
    Eigen::MatrixXd B;                    // L x s task factor (s may be 0)
    std::vector<double> t;                // task diagonal, > 0
    std::vector<double> xi;               // per-task noise, >= 0
    std::vector<double> tau;              // prior means
    std::vector<double> lengthscales;     // SE only
};

double se_kernel(const double* x, const double* xp, int d, double gamma,
                 const std::vector<double>& lengthscales);

// ((-1)^{alpha+1} (2 pi)^{2 alpha} / (2 alpha)!) * B_{2 alpha}((x - x') mod 1).
double si_bernoulli_1d(double x, double xp, int alpha);

// Order-alpha Walsh-series kernels evaluated at u = x xor x' through their
// closed forms; wal-coefficient decay 2^{-mu_alpha(k)} (order 1: 2*4^{-mu_1}).
// With beta(u) = 1-based index of the first one bit of u, t_v = 2^{-v beta},
// X3(u) = sum_a u_a 8^{-a}:
//   k1 = 1 - 3 t1
//   k2 = -1 - beta u + (5/2)(1 - t1)
//   k3 = -1 + beta u^2 - 5(1 - t1) u + (43/18)(1 - t2)
//   k4 = -1 - (2/3) beta u^3 + 5(1 - t1) u^2 - (43/9)(1 - t2) u
//        + (701/294)(1 - t3) - beta X3 / 3
// Each has zero mean on [0,1) and is positive definite; the u = 0 limits are
// 1, 3/2, 25/18, 407/294.
double dsi_order_1d(int alpha, double x, double xp);
double dsi_walsh_1d(double x, double xp, const std::array<double, 4>& b);

struct SpatialKernel {
    KernelFamily family = KernelFamily::dsi_digital;
    double gamma = 1.0;
    std::vector<double> eta;
    int si_alpha = 1;
    std::array<double, 4> b{1, 1, 1, 1};
    std::vector<double> lengthscales;  // se_dense only

    // gamma * prod_j (1 + eta_j * base(x_j, x'_j)) for the periodic families,
    // gamma * exp(-sum_j (x_j-x'_j)^2 / (2 ls_j^2)) for se_dense.
    double operator()(const double* x, const double* xp, int d) const;

    static SpatialKernel from(const Hyperparams& h, KernelFamily family);
};

double product_kernel(const double* x, const double* xp, int d, double gamma,
                      const std::vector<double>& eta, const SpatialKernel& base);

// R = B B^T + diag(t); throws on non-positive t.
Eigen::MatrixXd task_gram(const Eigen::MatrixXd& B, const std::vector<double>& t);

double mt_kernel(int l, const double* x, int lp, const double* xp, int d,
                 const Eigen::MatrixXd& R, const SpatialKernel& spatial);

}  // namespace fastmtgp
