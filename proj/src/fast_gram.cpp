#include "fastmtgp/fast_gram.hpp"

#include <cmath>

#include "fastmtgp/transforms.hpp"

namespace fastmtgp {

namespace {

void forward_transform(std::vector<cplx>& v, bool complex_path) {
    if (complex_path) {
        fft_bitrev(v);
        return;
    }
    std::vector<double> re(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) re[i] = v[i].real();
    fwht(re);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = re[i];
}

void inverse_transform(std::vector<cplx>& v, bool complex_path) {
    if (complex_path) {
        fft_bitrev_inv(v);
        return;
    }
    std::vector<double> re(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) re[i] = v[i].real();
    fwht(re);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = re[i];
}

}  // namespace

std::size_t BlockSpectrum::pair_index(int l, int lp) const {
    if (l > lp || l < 0 || lp >= L) throw FastMtgpError("pair_index: need 0 <= l <= lp < L");
    // pairs enumerated row by row: (0,0),(0,1),...,(0,L-1),(1,1),...
    const std::size_t row_start = static_cast<std::size_t>(l) * L - static_cast<std::size_t>(l) * (l - 1) / 2;
    return row_start + (lp - l);
}

BlockSpectrum build_spectrum(const LdDesign& design, const Eigen::MatrixXd& R_internal,
                             const SpatialKernel& spatial, const std::vector<double>& xi_internal) {
    const int L = design.L;
    if (R_internal.rows() != L || R_internal.cols() != L)
        throw FastMtgpError("build_spectrum: task kernel size mismatch");
    if (static_cast<int>(xi_internal.size()) != L)
        throw FastMtgpError("build_spectrum: xi size mismatch");
    const bool lattice = design.kind == SeqKind::lattice;
    if (lattice && spatial.family != KernelFamily::si_lattice)
        throw FastMtgpError("build_spectrum: lattice designs need the si kernel family");
    if (!lattice && spatial.family != KernelFamily::dsi_digital)
        throw FastMtgpError("build_spectrum: digital designs need the dsi kernel family");
    for (int l = 0; l + 1 < L; ++l)
        if (design.m[l] < design.m[l + 1])
            throw FastMtgpError("build_spectrum: task sizes must be descending");

    BlockSpectrum spec;
    spec.L = L;
    spec.complex_path = lattice;
    spec.m = design.m;
    spec.n = design.n;
    spec.offset = design.offset;
    spec.N = design.N;
    spec.gamma = spatial.gamma;
    spec.R = R_internal;
    spec.lam.resize(static_cast<std::size_t>(L) * (L + 1) / 2);

    std::vector<std::pair<int, int>> pairs;
    for (int l = 0; l < L; ++l)
        for (int lp = l; lp < L; ++lp) pairs.emplace_back(l, lp);

    parallel_for(pairs.size(), [&](std::size_t pi) {
        const auto [l, lp] = pairs[pi];
        const std::size_t nl = design.n[l];
        std::vector<cplx> col(nl);
        const double* x0 = design.point(lp, 0);
        const double rll = R_internal(l, lp);
        for (std::size_t i = 0; i < nl; ++i)
            col[i] = rll * spatial(design.point(l, i), x0, design.d);
        forward_transform(col, spec.complex_path);
        const double scale = std::sqrt(static_cast<double>(design.n[lp]));
        for (auto& v : col) v *= scale;
        if (l == lp)
            for (auto& v : col) v += xi_internal[l];
        spec.lam[spec.pair_index(l, lp)] = std::move(col);
    });
    return spec;
}

std::vector<double> gram_matvec(const BlockSpectrum& spec, const std::vector<double>& y) {
    if (y.size() != spec.N) throw FastMtgpError("gram_matvec: length mismatch");
    const int L = spec.L;
    // z = blockdiag(Vbar) y
    std::vector<std::vector<cplx>> z(L), out(L);
    for (int l = 0; l < L; ++l) {
        z[l].assign(y.begin() + spec.offset[l], y.begin() + spec.offset[l + 1]);
        forward_transform(z[l], spec.complex_path);
        out[l].assign(spec.n[l], cplx{0.0, 0.0});
    }
    for (int l = 0; l < L; ++l)
        for (int lp = l; lp < L; ++lp) {
            const auto& lam = spec.pair(l, lp);
            const std::size_t nl = spec.n[l], nlp = spec.n[lp];
            if (l == lp) {
                for (std::size_t k = 0; k < nl; ++k) out[l][k] += lam[k] * z[l][k];
                continue;
            }
            // tall block (l,lp): stacked diagonals; wide block (lp,l) is its adjoint
            for (std::size_t c = 0; c * nlp < nl; ++c)
                for (std::size_t k = 0; k < nlp; ++k) {
                    const std::size_t row = c * nlp + k;
                    out[l][row] += lam[row] * z[lp][k];
                    out[lp][k] += std::conj(lam[row]) * z[l][row];
                }
        }
    // back through blockdiag(V); result must be essentially real
    std::vector<double> result(spec.N);
    for (int l = 0; l < L; ++l) {
        inverse_transform(out[l], spec.complex_path);
        double lim = 0.0, lre = 0.0;
        for (std::size_t k = 0; k < spec.n[l]; ++k) {
            lim = std::max(lim, std::abs(out[l][k].imag()));
            lre = std::max(lre, std::abs(out[l][k].real()));
            result[spec.offset[l] + k] = out[l][k].real();
        }
        if (lim > 1e-8 * std::max(1.0, lre))
            throw FastMtgpError("gram_matvec: abnormal imaginary residue");
    }
    return result;
}

namespace {

// stage-l ingredients: per-chunk column vectors B_i of the tall blocks
// Lam_{l', l} (l' < l), each of length n_l
std::vector<const cplx*> stage_columns(const BlockSpectrum& spec, int l) {
    const std::size_t nl = spec.n[l];
    const std::size_t rows = spec.offset[l] / nl;
    std::vector<const cplx*> B(rows);
    for (int lp = 0; lp < l; ++lp) {
        const auto& lam = spec.pair(lp, l);
        const std::size_t first = spec.offset[lp] / nl;
        for (std::size_t c = 0; c * nl < spec.n[lp]; ++c) B[first + c] = lam.data() + c * nl;
    }
    return B;
}

}  // namespace

BlockInverse invert_and_logdet(const BlockSpectrum& spec) {
    const int L = spec.L;
    BlockInverse inv;
    inv.L = L;
    inv.complex_path = spec.complex_path;
    inv.n = spec.n;
    inv.offset = spec.offset;
    inv.N = spec.N;
    inv.base = spec.n[L - 1];
    inv.r = spec.N / inv.base;
    inv.logdet = 0.0;

    // working grid at the granularity of the current stage
    std::vector<std::vector<cplx>> A;
    std::size_t r = 0;  // current grid side

    auto check_positive = [&](std::vector<cplx>& s, const char* stage) {
        double remax = 0.0;
        for (const auto& v : s) remax = std::max(remax, std::abs(v.real()));
        for (auto& v : s) {
            if (std::abs(v.imag()) > 1e-8 * std::max(1.0, remax))
                throw FastMtgpError(std::string("invert_and_logdet: non-real Schur complement at ") + stage);
            if (!(v.real() > 0.0))
                throw SchurBreakdown(std::string("non-positive Schur entry at ") + stage);
            inv.logdet += std::log(v.real());
            v = cplx{v.real(), 0.0};  // project to the mathematically real value
        }
    };

    for (int l = 0; l < L; ++l) {
        const std::size_t nl = spec.n[l];
        if (l == 0) {
            std::vector<cplx> s = spec.pair(0, 0);
            check_positive(s, "stage 1");
            for (auto& v : s) v = 1.0 / v;
            A.assign(1, std::move(s));
            r = 1;
            continue;
        }
        // refine granularity n_{l-1} -> n_l: every diagonal block splits into
        // a diagonal sub-grid of f chunks
        const std::size_t f = spec.n[l - 1] / nl;
        if (f > 1) {
            const std::size_t rn = r * f;
            std::vector<std::vector<cplx>> refined(rn * rn);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) {
                    const auto& blk = A[i * r + j];
                    if (blk.empty()) continue;
                    for (std::size_t a = 0; a < f; ++a)
                        refined[(i * f + a) * rn + (j * f + a)] =
                            std::vector<cplx>(blk.begin() + a * nl, blk.begin() + (a + 1) * nl);
                }
            A = std::move(refined);
            r = rn;
        }

        const auto B = stage_columns(spec, l);
        // Lcol_i = sum_j A_{ij} B_j ; F = sum_i conj(B_i) Lcol_i
        std::vector<std::vector<cplx>> Lcol(r, std::vector<cplx>(nl, cplx{0, 0}));
        parallel_for(r, [&](std::size_t i) {
            auto& li = Lcol[i];
            for (std::size_t j = 0; j < r; ++j) {
                const auto& blk = A[i * r + j];
                if (blk.empty()) continue;
                const cplx* bj = B[j];
                for (std::size_t k = 0; k < nl; ++k) li[k] += blk[k] * bj[k];
            }
        });
        std::vector<cplx> S = spec.pair(l, l);
        for (std::size_t i = 0; i < r; ++i) {
            const cplx* bi = B[i];
            const auto& li = Lcol[i];
            for (std::size_t k = 0; k < nl; ++k) S[k] -= std::conj(bi[k]) * li[k];
        }
        check_positive(S, ("stage " + std::to_string(l + 1)).c_str());

        std::vector<double> G(nl);
        for (std::size_t k = 0; k < nl; ++k) G[k] = 1.0 / S[k].real();
        std::vector<std::vector<cplx>> H(r, std::vector<cplx>(nl));
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t k = 0; k < nl; ++k) H[i][k] = Lcol[i][k] * G[k];

        // grown grid [[A + H G^{-1}... precisely A + (H_i conj(L_j)), -H], [-conj(H), G]]
        const std::size_t rn = r + 1;
        std::vector<std::vector<cplx>> grown(rn * rn);
        parallel_for(r, [&](std::size_t i) {
            for (std::size_t j = 0; j < r; ++j) {
                std::vector<cplx> blk = std::move(A[i * r + j]);
                if (blk.empty()) blk.assign(nl, cplx{0, 0});
                const auto& hi = H[i];
                const auto& lj = Lcol[j];
                for (std::size_t k = 0; k < nl; ++k) blk[k] += hi[k] * std::conj(lj[k]);
                grown[i * rn + j] = std::move(blk);
            }
            std::vector<cplx> right(nl);
            for (std::size_t k = 0; k < nl; ++k) right[k] = -H[i][k];
            grown[i * rn + r] = std::move(right);
            std::vector<cplx> bottom(nl);
            for (std::size_t k = 0; k < nl; ++k) bottom[k] = -std::conj(H[i][k]);
            grown[r * rn + i] = std::move(bottom);
        });
        std::vector<cplx> corner(nl);
        for (std::size_t k = 0; k < nl; ++k) corner[k] = G[k];
        grown[r * rn + r] = std::move(corner);
        A = std::move(grown);
        r = rn;
    }

    if (r != inv.r) throw FastMtgpError("invert_and_logdet: grid size bookkeeping error");
    inv.grid = std::move(A);
    return inv;
}

std::vector<double> solve(const BlockInverse& inv, const std::vector<double>& y) {
    if (y.size() != inv.N) throw FastMtgpError("solve: length mismatch");
    const int L = inv.L;
    std::vector<cplx> z(inv.N);
    for (int l = 0; l < L; ++l) {
        std::vector<cplx> blk(y.begin() + inv.offset[l], y.begin() + inv.offset[l + 1]);
        forward_transform(blk, inv.complex_path);
        std::copy(blk.begin(), blk.end(), z.begin() + inv.offset[l]);
    }
    const std::size_t base = inv.base, r = inv.r;
    std::vector<cplx> w(inv.N, cplx{0, 0});
    parallel_for(r, [&](std::size_t i) {
        cplx* wi = w.data() + i * base;
        for (std::size_t j = 0; j < r; ++j) {
            const auto& blk = inv.block(i, j);
            if (blk.empty()) continue;
            const cplx* zj = z.data() + j * base;
            for (std::size_t k = 0; k < base; ++k) wi[k] += blk[k] * zj[k];
        }
    });
    std::vector<double> result(inv.N);
    for (int l = 0; l < L; ++l) {
        std::vector<cplx> blk(w.begin() + inv.offset[l], w.begin() + inv.offset[l + 1]);
        inverse_transform(blk, inv.complex_path);
        double lim = 0.0, lre = 0.0;
        for (std::size_t k = 0; k < blk.size(); ++k) {
            lim = std::max(lim, std::abs(blk[k].imag()));
            lre = std::max(lre, std::abs(blk[k].real()));
            result[inv.offset[l] + k] = blk[k].real();
        }
        if (lim > 1e-8 * std::max(1.0, lre))
            throw FastMtgpError("solve: abnormal imaginary residue");
    }
    return result;
}

double trace_inverse(const BlockInverse& inv) {
    double tr = 0.0;
    for (std::size_t i = 0; i < inv.r; ++i) {
        const auto& blk = inv.block(i, i);
        if (blk.empty()) continue;
        for (const auto& v : blk) tr += v.real();
    }
    return tr;
}

PiH extract_pi_h(const BlockInverse& inv) {
    const int L = inv.L;
    PiH out;
    out.Pi.resize(L, L);
    out.H.resize(L, static_cast<Eigen::Index>(inv.r));
    for (int l = 0; l < L; ++l) {
        const std::size_t row = inv.offset[l] / inv.base;
        const double sl = std::sqrt(static_cast<double>(inv.n[l]));
        for (std::size_t k = 0; k < inv.r; ++k) {
            const auto& blk = inv.block(row, k);
            out.H(l, static_cast<Eigen::Index>(k)) = blk.empty() ? cplx{0, 0} : sl * blk[0];
        }
        for (int lp = 0; lp < L; ++lp) {
            const std::size_t col = inv.offset[lp] / inv.base;
            const auto& blk = inv.block(row, col);
            const cplx v = blk.empty() ? cplx{0, 0}
                                       : std::sqrt(static_cast<double>(inv.n[l]) *
                                                   static_cast<double>(inv.n[lp])) * blk[0];
            if (std::abs(v.imag()) > 1e-8 * std::max(1.0, std::abs(v.real())))
                throw FastMtgpError("extract_pi_h: non-real Pi entry");
            out.Pi(l, lp) = v.real();
        }
    }
    return out;
}

}  // namespace fastmtgp
