#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fastmtgp/common.hpp"

// Shifted rank-1 lattices and digitally-shifted base-2 digital sequences in
// radical-inverse (extensible) order. All tasks of a design share one
// generator; each task gets an independent shift substream.

namespace fastmtgp {

enum class SeqKind { lattice, digital };

inline constexpr int kDigitalBits = 53;  // points exactly representable in binary64

struct LatticeGenerator {
    int d = 0;
    std::vector<std::uint64_t> g;  // generating vector, g[0] == 1 by convention
    std::uint64_t n_max = 0;       // power of two
};

struct DigitalGenerator {
    int d = 0;
    int t = kDigitalBits;  // bits of precision per coordinate
    int m_max = 0;         // columns per dimension
    // columns[j][p]: p-th direction number of dimension j as the numerator
    // of a t-bit fraction (msb-aligned).
    std::vector<std::vector<std::uint64_t>> columns;
};

// v(i): binary radical inverse, v(0) = 0, v(1) = 1/2, ...
double van_der_corput(std::uint64_t i);

// Row r of the result is (v(i0+r) * g + shift) mod 1, row-major count x d.
std::vector<double> lattice_points(const LatticeGenerator& gen,
                                   const std::vector<double>& shift,
                                   std::uint64_t i0, std::uint64_t count);

// Bitwise XOR of two t-bit fractions.
double digital_shift(double a, double b);
std::uint64_t frac_to_bits(double x);          // floor(x * 2^53), x in [0,1)
inline double bits_to_frac(std::uint64_t u) { return static_cast<double>(u) * 0x1p-53; }

// Row r is (xor of direction columns selected by the bits of i0+r) xor shift.
std::vector<double> digital_net_points(const DigitalGenerator& gen,
                                       const std::vector<std::uint64_t>& shift_bits,
                                       std::uint64_t i0, std::uint64_t count);

// Shipped tables (embedded at build time), valid to d = 100.
const LatticeGenerator& default_lattice(int d);
const DigitalGenerator& default_digital(int d);

// Per-task point sets with a shared generator. Tasks are stored internally
// in descending-size order (stable for ties); user_task/internal maps keep
// the caller's task numbering visible at the interfaces.
struct LdDesign {
    SeqKind kind = SeqKind::digital;
    int d = 0;
    int L = 0;
    std::uint64_t seed = 0;
    std::vector<int> m;                 // internal order, m[0] >= m[1] >= ...
    std::vector<std::uint64_t> n;       // 2^m
    std::vector<std::size_t> offset;    // offset[l] = n[0]+...+n[l-1]; offset[L] = N
    std::size_t N = 0;
    std::vector<int> internal_to_user;  // internal l -> user task index (0-based)
    std::vector<int> user_to_internal;
    std::vector<std::vector<double>> shift;              // [internal l][d]
    std::vector<std::vector<std::uint64_t>> shift_bits;  // digital kind only
    std::vector<std::vector<double>> X;                  // [internal l] n_l x d row-major

    const double* point(int internal_l, std::size_t i) const {
        return X[internal_l].data() + i * static_cast<std::size_t>(d);
    }
};

// m_user[l] = log2 sample size of user task l; shifts are drawn from
// stream = user task index so task identity is independent of ordering.
LdDesign make_design(SeqKind kind, int d, const std::vector<int>& m_user,
                     std::uint64_t seed);

// Standalone shifted point set (e.g. held-out test designs); the stream
// selects an independent shift substream of the seed.
std::vector<double> shifted_points(SeqKind kind, int d, std::uint64_t i0,
                                   std::uint64_t count, std::uint64_t seed,
                                   std::uint64_t stream);

}  // namespace fastmtgp
