#include "fastmtgp/dense_baseline.hpp"

#include <cmath>

#include "fastmtgp/common.hpp"

namespace fastmtgp {

DenseGram dense_assemble(const std::vector<std::vector<double>>& points, int d,
                         const Eigen::MatrixXd& R, const SpatialKernel& spatial,
                         const std::vector<double>& xi, std::size_t cap) {
    DenseGram g;
    g.L = static_cast<int>(points.size());
    if (R.rows() != g.L || R.cols() != g.L) throw FastMtgpError("dense_assemble: R size mismatch");
    if (xi.size() != points.size()) throw FastMtgpError("dense_assemble: xi size mismatch");
    g.offset.assign(1, 0);
    for (const auto& p : points) {
        if (p.size() % static_cast<std::size_t>(d) != 0)
            throw FastMtgpError("dense_assemble: ragged point block");
        g.offset.push_back(g.offset.back() + p.size() / static_cast<std::size_t>(d));
    }
    g.N = g.offset.back();
    if (g.N > cap) throw FastMtgpError("dense_assemble: problem exceeds dense cap");

    g.K.resize(static_cast<Eigen::Index>(g.N), static_cast<Eigen::Index>(g.N));
    parallel_for(g.N, [&](std::size_t row) {
        int l = 0;
        while (g.offset[l + 1] <= row) ++l;
        const double* x = points[l].data() + (row - g.offset[l]) * static_cast<std::size_t>(d);
        for (int lp = 0; lp < g.L; ++lp) {
            const double r = R(l, lp);
            const std::size_t nlp = g.offset[lp + 1] - g.offset[lp];
            for (std::size_t j = 0; j < nlp; ++j) {
                const double* xp = points[lp].data() + j * static_cast<std::size_t>(d);
                g.K(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(g.offset[lp] + j)) =
                    r * spatial(x, xp, d);
            }
        }
        g.K(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(row)) += xi[l];
    });
    return g;
}

bool dense_factor(DenseGram& gram) {
    gram.llt.compute(gram.K);
    if (gram.llt.info() != Eigen::Success) return false;
    gram.logdet = 0.0;
    const auto& L = gram.llt.matrixLLT();
    for (Eigen::Index i = 0; i < L.rows(); ++i) gram.logdet += 2.0 * std::log(L(i, i));
    return std::isfinite(gram.logdet);
}

Eigen::VectorXd dense_solve(const DenseGram& gram, const Eigen::VectorXd& rhs) {
    return gram.llt.solve(rhs);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> dense_normal_equations(const DenseGram& gram,
                                                                   const Eigen::VectorXd& y) {
    const Eigen::Index N = static_cast<Eigen::Index>(gram.N);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(N, gram.L);
    for (int l = 0; l < gram.L; ++l)
        for (std::size_t k = gram.offset[l]; k < gram.offset[l + 1]; ++k)
            E(static_cast<Eigen::Index>(k), l) = 1.0;
    const Eigen::MatrixXd Z = gram.llt.solve(E);       // K^{-1} E
    const Eigen::VectorXd w = gram.llt.solve(y);       // K^{-1} y
    const Eigen::MatrixXd pi = E.transpose() * Z;
    const Eigen::VectorXd tau_n = Eigen::LDLT<Eigen::MatrixXd>(pi).solve(E.transpose() * w);
    const Eigen::MatrixXd hh = Z.transpose() * Z;      // E^T K^{-2} E
    const Eigen::VectorXd tau_g = Eigen::LDLT<Eigen::MatrixXd>(hh).solve(Z.transpose() * w);
    return {tau_n, tau_g};
}

}  // namespace fastmtgp
