#include "fastmtgp/transforms.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace fastmtgp {

std::uint64_t bit_reverse(std::uint64_t i, int m) {
    std::uint64_t r = 0;
    for (int k = 0; k < m; ++k) {
        r = (r << 1) | (i & 1);
        i >>= 1;
    }
    return r;
}

void fwht(double* a, std::size_t n) {
    const int m = log2_exact(n);
    for (std::size_t len = 1; len < n; len <<= 1)
        for (std::size_t i = 0; i < n; i += 2 * len)
            for (std::size_t j = i; j < i + len; ++j) {
                const double u = a[j], v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
    const double scale = std::pow(0.5, 0.5 * m);
    for (std::size_t i = 0; i < n; ++i) a[i] *= scale;
}

void fwht(std::vector<double>& a) { fwht(a.data(), a.size()); }

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// w(m)[j] = exp(-2 pi i j / 2^m) for j < 2^{m-1}
std::shared_ptr<const std::vector<cplx>> twiddles(int m) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const std::vector<cplx>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it == cache.end()) {
        const std::size_t half = std::size_t{1} << (m > 0 ? m - 1 : 0);
        auto w = std::make_shared<std::vector<cplx>>(half);
        for (std::size_t j = 0; j < half; ++j) {
            const double ang = -kTwoPi * static_cast<double>(j) / static_cast<double>(std::size_t{1} << m);
            (*w)[j] = cplx(std::cos(ang), std::sin(ang));
        }
        it = cache.emplace(m, std::move(w)).first;
    }
    return it->second;
}

}  // namespace

// Vbar a = DFT_u(bitrev(a)): decimation-in-time butterflies consume
// bit-reversed input, so no explicit permutation is needed.
void fft_bitrev(cplx* a, std::size_t n) {
    const int m = log2_exact(n);
    if (n == 1) return;
    const auto w = twiddles(m);
    const std::vector<cplx>& tw = *w;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1, stride = n / len;
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t j = 0; j < half; ++j) {
                const cplx v = a[i + j + half] * tw[j * stride];
                const cplx u = a[i + j];
                a[i + j] = u + v;
                a[i + j + half] = u - v;
            }
    }
    const double scale = std::pow(0.5, 0.5 * m);
    for (std::size_t i = 0; i < n; ++i) a[i] *= scale;
}

void fft_bitrev(std::vector<cplx>& a) { fft_bitrev(a.data(), a.size()); }

// V a = bitrev(IDFT_u(a)): decimation-in-frequency butterflies with
// conjugated twiddles emit bit-reversed output, again permutation-free.
void fft_bitrev_inv(cplx* a, std::size_t n) {
    const int m = log2_exact(n);
    if (n == 1) return;
    const auto w = twiddles(m);
    const std::vector<cplx>& tw = *w;
    for (std::size_t len = n; len >= 2; len >>= 1) {
        const std::size_t half = len >> 1, stride = n / len;
        for (std::size_t i = 0; i < n; i += len)
            for (std::size_t j = 0; j < half; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + half];
                a[i + j] = u + v;
                a[i + j + half] = (u - v) * std::conj(tw[j * stride]);
            }
    }
    const double scale = std::pow(0.5, 0.5 * m);
    for (std::size_t i = 0; i < n; ++i) a[i] *= scale;
}

void fft_bitrev_inv(std::vector<cplx>& a) { fft_bitrev_inv(a.data(), a.size()); }

}  // namespace fastmtgp
