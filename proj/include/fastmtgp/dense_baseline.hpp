#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fastmtgp/kernels.hpp"

// Reference dense multitask GP pieces (Cholesky): the correctness oracle for
// every fast-path quantity and the dense-SE comparator in benchmarks.

namespace fastmtgp {

struct DenseGram {
    int L = 0;
    std::size_t N = 0;
    std::vector<std::size_t> offset;  // task offsets; E is never materialized
    Eigen::MatrixXd K;                // with per-task noise on diagonal blocks
    Eigen::LLT<Eigen::MatrixXd> llt;
    double logdet = 0.0;
};

inline constexpr std::size_t kDenseCap = 4096;

// points[l]: row-major n_l x d block of task l (internal order).
DenseGram dense_assemble(const std::vector<std::vector<double>>& points, int d,
                         const Eigen::MatrixXd& R, const SpatialKernel& spatial,
                         const std::vector<double>& xi, std::size_t cap = kDenseCap);

// Factor in place; returns false when Cholesky fails (caller escalates noise).
bool dense_factor(DenseGram& gram);

Eigen::VectorXd dense_solve(const DenseGram& gram, const Eigen::VectorXd& rhs);

// (tau_nmll, tau_gcv) from the L x L normal equations
// (E^T Ktilde^{-1} E) tau = E^T Ktilde^{-1} y and the K^{-2} analogue.
std::pair<Eigen::VectorXd, Eigen::VectorXd> dense_normal_equations(const DenseGram& gram,
                                                                   const Eigen::VectorXd& y);

}  // namespace fastmtgp
