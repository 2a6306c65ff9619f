#pragma once

#include <cstdint>
#include <vector>

#include "fastmtgp/common.hpp"

// Orthonormal fast transforms diagonalizing the structured Gram blocks.
// Conventions (fixed by the Gram factorizations K = V diag(lam) Vbar):
//   fwht          : H a,  H = H_1^{otimes m} / 2^{m/2}; self-inverse.
//   fft_bitrev    : Vbar a = unitary-DFT(bit-reversal(a)).
//   fft_bitrev_inv: V a    = bit-reversal(unitary-IDFT(a)); exact inverse.
// Both V and Vbar map the constant vector to sqrt(n) * e_0.

namespace fastmtgp {

std::uint64_t bit_reverse(std::uint64_t i, int m);

void fwht(double* a, std::size_t n);
void fwht(std::vector<double>& a);

void fft_bitrev(cplx* a, std::size_t n);
void fft_bitrev(std::vector<cplx>& a);

void fft_bitrev_inv(cplx* a, std::size_t n);
void fft_bitrev_inv(std::vector<cplx>& a);

}  // namespace fastmtgp
