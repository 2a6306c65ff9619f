#include "fastmtgp/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fastmtgp/ld_sequences.hpp"

namespace fastmtgp {

double se_kernel(const double* x, const double* xp, int d, double gamma,
                 const std::vector<double>& lengthscales) {
    if (static_cast<int>(lengthscales.size()) != d)
        throw FastMtgpError("se_kernel: lengthscale dimension mismatch");
    double q = 0.0;
    for (int j = 0; j < d; ++j) {
        const double ls = lengthscales[j];
        if (!(ls > 0.0)) throw FastMtgpError("se_kernel: non-positive lengthscale");
        const double diff = (x[j] - xp[j]) / ls;
        q += diff * diff;
    }
    return gamma * std::exp(-0.5 * q);
}

double si_bernoulli_1d(double x, double xp, int alpha) {
    // B_{2a} is even about 1/2, so evaluate on the canonical representative
    // min(frac(d), frac(-d)); this makes the evaluation symmetric to the bit
    const double diff = x - xp;
    const double u1 = diff - std::floor(diff);
    const double u2 = -diff - std::floor(-diff);
    double u = std::min(u1, u2);
    if (u >= 1.0) u = 0.0;
    constexpr double pi2 = 9.869604401089358618834491;  // pi^2
    if (alpha == 1) return 2.0 * pi2 * (u * (u - 1.0) + 1.0 / 6.0);
    if (alpha == 2) {
        // -(2 pi)^4 / 4! * B4(u)
        const double b4 = ((u - 2.0) * u + 1.0) * u * u - 1.0 / 30.0;
        return -(2.0 / 3.0) * pi2 * pi2 * b4;
    }
    throw FastMtgpError("si_bernoulli_1d: alpha must be 1 or 2");
}

double dsi_order_1d(int alpha, double x, double xp) {
    const std::uint64_t w = frac_to_bits(x) ^ frac_to_bits(xp);
    if (w == 0) {
        switch (alpha) {
            case 1: return 1.0;
            case 2: return 1.5;
            case 3: return 25.0 / 18.0;
            case 4: return 407.0 / 294.0;
        }
        throw FastMtgpError("dsi_order_1d: alpha must be in 1..4");
    }
    const int beta = kDigitalBits - std::bit_width(w) + 1;
    const double u = static_cast<double>(w) * 0x1p-53;
    const double t1 = std::ldexp(1.0, -beta);
    switch (alpha) {
        case 1:
            return 1.0 - 3.0 * t1;
        case 2:
            return -1.0 - beta * u + 2.5 * (1.0 - t1);
        case 3: {
            const double t2 = t1 * t1;
            return -1.0 + beta * u * u - 5.0 * (1.0 - t1) * u + (43.0 / 18.0) * (1.0 - t2);
        }
        case 4: {
            const double t2 = t1 * t1;
            const double t3 = t2 * t1;
            double x3 = 0.0;  // X3(u) = sum of 8^{-a} over the one digits u_a
            std::uint64_t rem = w;
            while (rem) {
                const int a = kDigitalBits - std::countr_zero(rem);
                x3 += std::ldexp(1.0, -3 * a);
                rem &= rem - 1;
            }
            return -1.0 - (2.0 / 3.0) * beta * u * u * u + 5.0 * (1.0 - t1) * u * u
                   - (43.0 / 9.0) * (1.0 - t2) * u + (701.0 / 294.0) * (1.0 - t3)
                   - beta * x3 / 3.0;
        }
    }
    throw FastMtgpError("dsi_order_1d: alpha must be in 1..4");
}

double dsi_walsh_1d(double x, double xp, const std::array<double, 4>& b) {
    double acc = 0.0;
    for (int alpha = 1; alpha <= 4; ++alpha)
        if (b[alpha - 1] != 0.0) acc += b[alpha - 1] * dsi_order_1d(alpha, x, xp);
    return acc;
}

double SpatialKernel::operator()(const double* x, const double* xp, int d) const {
    if (family == KernelFamily::se_dense) return se_kernel(x, xp, d, gamma, lengthscales);
    if (static_cast<int>(eta.size()) != d)
        throw FastMtgpError("product kernel: eta dimension mismatch");
    double prod = gamma;
    for (int j = 0; j < d; ++j) {
        const double base = family == KernelFamily::si_lattice
                                ? si_bernoulli_1d(x[j], xp[j], si_alpha)
                                : dsi_walsh_1d(x[j], xp[j], b);
        prod *= 1.0 + eta[j] * base;
    }
    return prod;
}

SpatialKernel SpatialKernel::from(const Hyperparams& h, KernelFamily family) {
    SpatialKernel q;
    q.family = family;
    q.gamma = h.gamma;
    q.eta = h.eta;
    q.si_alpha = h.si_alpha;
    q.b = h.b;
    q.lengthscales = h.lengthscales;
    return q;
}

double product_kernel(const double* x, const double* xp, int d, double gamma,
                      const std::vector<double>& eta, const SpatialKernel& base) {
    SpatialKernel q = base;
    q.gamma = gamma;
    q.eta = eta;
    return q(x, xp, d);
}

Eigen::MatrixXd task_gram(const Eigen::MatrixXd& B, const std::vector<double>& t) {
    const int L = static_cast<int>(t.size());
    for (double tl : t)
        if (!(tl > 0.0)) throw FastMtgpError("task_gram: non-positive diagonal entry");
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(L, L);
    if (B.size() > 0) {
        if (B.rows() != L) throw FastMtgpError("task_gram: B rows != L");
        R = B * B.transpose();
    }
    for (int l = 0; l < L; ++l) R(l, l) += t[l];
    return R;
}

double mt_kernel(int l, const double* x, int lp, const double* xp, int d,
                 const Eigen::MatrixXd& R, const SpatialKernel& spatial) {
    if (l < 0 || lp < 0 || l >= R.rows() || lp >= R.rows())
        throw FastMtgpError("mt_kernel: task index out of range");
    return R(l, lp) * spatial(x, xp, d);
}

}  // namespace fastmtgp
