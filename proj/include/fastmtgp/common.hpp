#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fastmtgp {

using cplx = std::complex<double>;

// Ill-conditioned task configuration detected while forming a Schur
// complement; callers may retry with escalated noise.
struct SchurBreakdown : std::runtime_error {
    explicit SchurBreakdown(const std::string& what) : std::runtime_error(what) {}
};

struct FastMtgpError : std::runtime_error {
    explicit FastMtgpError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline int log2_exact(std::uint64_t n) {
    if (!is_pow2(n)) throw FastMtgpError("length must be a power of two");
    int m = 0;
    while ((std::uint64_t{1} << m) < n) ++m;
    return m;
}

// Worker count: FASTMTGP_THREADS if set, else hardware concurrency.
int thread_count();

// Run body(i) for i in [0, n), split across threads when profitable.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fastmtgp
