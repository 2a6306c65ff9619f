#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fastmtgp/kernels.hpp"
#include "fastmtgp/ld_sequences.hpp"

// Transformed block Gram matrix Lam = blockdiag(Vbar) Ktilde blockdiag(V):
// every task-pair block is a stack of diagonal matrices, so Ktilde factors
// through O(n log n) transforms. Inversion runs the recursive diagonal
// Schur-complement sweep, O(N log N + N^2 / n_L) total.

namespace fastmtgp {

struct BlockSpectrum {
    int L = 0;
    bool complex_path = false;  // SI/lattice path is complex, DSI real
    std::vector<int> m;         // internal (descending) order
    std::vector<std::uint64_t> n;
    std::vector<std::size_t> offset;
    std::size_t N = 0;
    double gamma = 0.0;            // scale of the spatial kernel (cubature uses it)
    Eigen::MatrixXd R;             // task kernel in internal order
    // lam[pair(l,lp)] for l <= lp: length n_l vector holding the tall block
    // Lam_{l,lp} as 2^{m_l - m_lp} stacked diagonals; the (lp,l) block is its
    // conjugate transpose. Noise xi_l is already added to the (l,l) vectors.
    std::vector<std::vector<cplx>> lam;

    std::size_t pair_index(int l, int lp) const;          // l <= lp
    const std::vector<cplx>& pair(int l, int lp) const { return lam[pair_index(l, lp)]; }
};

BlockSpectrum build_spectrum(const LdDesign& design, const Eigen::MatrixXd& R_internal,
                             const SpatialKernel& spatial, const std::vector<double>& xi_internal);

// Ktilde * y through the transforms and the sparse block structure.
std::vector<double> gram_matvec(const BlockSpectrum& spec, const std::vector<double>& y);

struct BlockInverse {
    int L = 0;
    bool complex_path = false;
    std::vector<std::uint64_t> n;
    std::vector<std::size_t> offset;
    std::size_t N = 0;
    std::size_t base = 0;  // n_L
    std::size_t r = 0;     // N / n_L
    // grid[i*r+j]: length-base diagonal of block (i,j) of Lam^{-1};
    // an empty vector is a structural zero block.
    std::vector<std::vector<cplx>> grid;
    double logdet = 0.0;

    const std::vector<cplx>& block(std::size_t i, std::size_t j) const { return grid[i * r + j]; }
};

// Throws SchurBreakdown when a Schur diagonal entry is not safely positive.
BlockInverse invert_and_logdet(const BlockSpectrum& spec);

// Ktilde^{-1} y; throws if the imaginary residue of the result is abnormal.
std::vector<double> solve(const BlockInverse& inv, const std::vector<double>& y);

double trace_inverse(const BlockInverse& inv);

struct PiH {
    Eigen::MatrixXd Pi;    // E^T Ktilde^{-1} E, L x L (internal order)
    Eigen::MatrixXcd H;    // sqrt(n_l) (Lam^{-1})_{N_{l-1}, k n_L}, L x r
    Eigen::MatrixXd HHbar() const { return (H * H.adjoint()).real(); }
};

PiH extract_pi_h(const BlockInverse& inv);

}  // namespace fastmtgp
