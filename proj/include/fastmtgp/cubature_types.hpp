#pragma once

#include <Eigen/Dense>

namespace fastmtgp {

struct CubatureResult {
    Eigen::VectorXd mu;     // posterior integral means, user task order
    Eigen::MatrixXd Sigma;  // posterior integral covariance (symmetric PSD)
};

}  // namespace fastmtgp
