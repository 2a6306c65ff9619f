#include "fastmtgp/cubature.hpp"

#include <cmath>

namespace fastmtgp {

namespace {

Eigen::MatrixXd pi_user_order(GpModel& m) {
    const LdDesign& dz = m.design;
    Eigen::MatrixXd pi_int(dz.L, dz.L);
    if (m.dense_path()) {
        const Eigen::Index N = static_cast<Eigen::Index>(dz.N);
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(N, dz.L);
        for (int l = 0; l < dz.L; ++l)
            for (std::size_t k = dz.offset[l]; k < dz.offset[l + 1]; ++k)
                E(static_cast<Eigen::Index>(k), l) = 1.0;
        pi_int = E.transpose() * m.dense->llt.solve(E);
    } else {
        pi_int = extract_pi_h(*m.inv).Pi;
    }
    Eigen::MatrixXd pi(dz.L, dz.L);
    for (int l = 0; l < dz.L; ++l)
        for (int lp = 0; lp < dz.L; ++lp)
            pi(dz.internal_to_user[l], dz.internal_to_user[lp]) = pi_int(l, lp);
    return pi;
}

}  // namespace

std::pair<double, double> single_task_cubature(GpModel& model) {
    if (model.design.L != 1) throw FastMtgpError("single_task_cubature: L != 1");
    model.refresh();
    // integral of the task-0 kernel slice: R00 * gamma
    const double geff = task_gram(model.hyper.B, model.hyper.t)(0, 0) * model.hyper.gamma;
    double mu = model.tau_internal[0];
    for (double v : model.c) mu += geff * v;
    double var;
    if (model.dense_path()) {
        const Eigen::Index N = static_cast<Eigen::Index>(model.design.N);
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(N);
        var = geff - geff * geff * ones.dot(model.dense->llt.solve(ones));
    } else {
        // constant vectors are eigenvectors of the block-circulant Gram; the
        // matching eigenvalue is the column sum, the leading spectrum entry
        const double lam0 = model.spec->pair(0, 0)[0].real();
        var = geff - geff * geff * static_cast<double>(model.design.N) / lam0;
    }
    return {mu, var};
}

CubatureResult multitask_cubature(GpModel& model) {
    model.refresh();
    const LdDesign& dz = model.design;
    const double gamma = model.hyper.gamma;
    const Eigen::MatrixXd R_user = task_gram(model.hyper.B, model.hyper.t);

    Eigen::VectorXd etc = Eigen::VectorXd::Zero(dz.L);  // E^T c in user order
    for (int l = 0; l < dz.L; ++l) {
        double s = 0.0;
        for (std::size_t k = dz.offset[l]; k < dz.offset[l + 1]; ++k) s += model.c[k];
        etc[dz.internal_to_user[l]] = s;
    }
    Eigen::VectorXd tau_user(dz.L);
    for (int l = 0; l < dz.L; ++l) tau_user[dz.internal_to_user[l]] = model.tau_internal[l];

    CubatureResult out;
    out.mu = tau_user + gamma * (R_user * etc);
    const Eigen::MatrixXd pi = pi_user_order(model);
    out.Sigma = gamma * R_user - gamma * gamma * (R_user * pi * R_user);
    out.Sigma = ((out.Sigma + out.Sigma.transpose()) / 2.0).eval();
    for (int l = 0; l < dz.L; ++l)
        if (out.Sigma(l, l) < 0.0 && out.Sigma(l, l) > -1e-12) out.Sigma(l, l) = 0.0;
    return out;
}

std::pair<Eigen::VectorXd, double> optimal_weights(const Eigen::VectorXd& mu,
                                                   const Eigen::MatrixXd& Sigma,
                                                   const Eigen::VectorXd& chi) {
    const Eigen::MatrixXd M = Sigma + mu * mu.transpose();
    const Eigen::VectorXd Minv_mu = Eigen::LDLT<Eigen::MatrixXd>(M).solve(mu);
    const double target = chi.dot(mu);
    const Eigen::VectorXd w = target * Minv_mu;
    const double mse = target * target * (1.0 - mu.dot(Minv_mu));
    return {w, mse};
}

double weights_mse(const Eigen::VectorXd& omega, const Eigen::VectorXd& mu,
                   const Eigen::MatrixXd& Sigma, const Eigen::VectorXd& chi) {
    const double miss = omega.dot(mu) - chi.dot(mu);
    return omega.dot(Sigma * omega) + miss * miss;
}

}  // namespace fastmtgp
