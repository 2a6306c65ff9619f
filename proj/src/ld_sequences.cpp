#include "fastmtgp/ld_sequences.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>

#include "fastmtgp/rng.hpp"
#include "fastmtgp/transforms.hpp"

namespace fastmtgp {

namespace embedded {
extern const char* const lattice_table;
extern const char* const sobol_table;
}  // namespace embedded

namespace {
constexpr std::uint64_t kMask53 = (std::uint64_t{1} << kDigitalBits) - 1;
}

double van_der_corput(std::uint64_t i) {
    if (i > kMask53)
        throw FastMtgpError("van_der_corput: index needs more than 53 bits");
    // reverse the 53-bit word: v(i) = bitrev_53(i) / 2^53
    return bits_to_frac(bit_reverse(i, kDigitalBits));
}

std::vector<double> lattice_points(const LatticeGenerator& gen,
                                   const std::vector<double>& shift,
                                   std::uint64_t i0, std::uint64_t count) {
    if (static_cast<int>(shift.size()) != gen.d)
        throw FastMtgpError("lattice_points: shift dimension mismatch");
    if (i0 + count > gen.n_max)
        throw FastMtgpError("lattice_points: index range exceeds generator n_max");
    const int mgen = log2_exact(gen.n_max);
    const std::uint64_t mask = gen.n_max - 1;
    std::vector<std::uint64_t> shift_bits(gen.d);
    for (int j = 0; j < gen.d; ++j) shift_bits[j] = frac_to_bits(shift[j]);
    // exact arithmetic: v(i) g_j mod 1 = (bitrev_m(i) g_j mod 2^m) / 2^m,
    // and adding the shift mod 1 is integer addition of 53-bit fractions
    std::vector<double> out(count * gen.d);
    for (std::uint64_t r = 0; r < count; ++r) {
        const std::uint64_t k = bit_reverse(i0 + r, mgen);
        for (int j = 0; j < gen.d; ++j) {
            const std::uint64_t frac = ((k * gen.g[j]) & mask) << (kDigitalBits - mgen);
            out[r * gen.d + j] = bits_to_frac((frac + shift_bits[j]) & kMask53);
        }
    }
    return out;
}

std::uint64_t frac_to_bits(double x) {
    if (x < 0.0 || x >= 1.0) throw FastMtgpError("fraction outside [0,1)");
    return static_cast<std::uint64_t>(x * 0x1p53);
}

double digital_shift(double a, double b) {
    return bits_to_frac(frac_to_bits(a) ^ frac_to_bits(b));
}

std::vector<double> digital_net_points(const DigitalGenerator& gen,
                                       const std::vector<std::uint64_t>& shift_bits,
                                       std::uint64_t i0, std::uint64_t count) {
    if (static_cast<int>(shift_bits.size()) != gen.d)
        throw FastMtgpError("digital_net_points: shift dimension mismatch");
    if (gen.m_max < 64 && i0 + count > (std::uint64_t{1} << gen.m_max))
        throw FastMtgpError("digital_net_points: index range exceeds generator columns");
    std::vector<double> out(count * gen.d);
    for (std::uint64_t r = 0; r < count; ++r) {
        const std::uint64_t i = i0 + r;
        for (int j = 0; j < gen.d; ++j) {
            std::uint64_t bits = shift_bits[j];
            std::uint64_t rem = i;
            int p = 0;
            while (rem) {
                if (rem & 1) bits ^= gen.columns[j][p];
                rem >>= 1;
                ++p;
            }
            out[r * gen.d + j] = bits_to_frac(bits);
        }
    }
    return out;
}

namespace {

std::vector<std::vector<std::uint64_t>> parse_table(const char* text) {
    std::vector<std::vector<std::uint64_t>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::vector<std::uint64_t> row;
        std::uint64_t v;
        while (ls >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    return rows;
}

const std::vector<std::uint64_t>& full_lattice_g() {
    static const std::vector<std::uint64_t> g = [] {
        auto rows = parse_table(embedded::lattice_table);
        std::vector<std::uint64_t> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.at(0));
        return out;
    }();
    return g;
}

const std::vector<std::vector<std::uint64_t>>& full_digital_columns() {
    static const std::vector<std::vector<std::uint64_t>> cols = [] {
        auto rows = parse_table(embedded::sobol_table);
        // table stores 32-bit msb-aligned columns; rescale to t = 53 bits
        for (auto& r : rows)
            for (auto& c : r) c <<= (kDigitalBits - 32);
        return rows;
    }();
    return cols;
}

}  // namespace

const LatticeGenerator& default_lattice(int d) {
    static std::mutex mu;
    static std::map<int, LatticeGenerator> cache;
    const auto& g = full_lattice_g();
    if (d < 1 || d > static_cast<int>(g.size()))
        throw FastMtgpError("default_lattice: dimension beyond shipped table");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it == cache.end())
        it = cache.emplace(d, LatticeGenerator{d, {g.begin(), g.begin() + d},
                                               std::uint64_t{1} << 20}).first;
    return it->second;
}

const DigitalGenerator& default_digital(int d) {
    static std::mutex mu;
    static std::map<int, DigitalGenerator> cache;
    const auto& cols = full_digital_columns();
    if (d < 1 || d > static_cast<int>(cols.size()))
        throw FastMtgpError("default_digital: dimension beyond shipped table");
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it == cache.end()) {
        DigitalGenerator gen;
        gen.d = d;
        gen.t = kDigitalBits;
        gen.m_max = static_cast<int>(cols[0].size());
        gen.columns.assign(cols.begin(), cols.begin() + d);
        it = cache.emplace(d, std::move(gen)).first;
    }
    return it->second;
}

LdDesign make_design(SeqKind kind, int d, const std::vector<int>& m_user,
                     std::uint64_t seed) {
    const int L = static_cast<int>(m_user.size());
    if (L < 1) throw FastMtgpError("make_design: need at least one task");
    if (L > 8) throw FastMtgpError("make_design: at most 8 tasks supported");
    LdDesign dz;
    dz.kind = kind;
    dz.d = d;
    dz.L = L;
    dz.seed = seed;
    dz.internal_to_user.resize(L);
    std::iota(dz.internal_to_user.begin(), dz.internal_to_user.end(), 0);
    std::stable_sort(dz.internal_to_user.begin(), dz.internal_to_user.end(),
                     [&](int a, int b) { return m_user[a] > m_user[b]; });
    dz.user_to_internal.resize(L);
    for (int l = 0; l < L; ++l) dz.user_to_internal[dz.internal_to_user[l]] = l;

    dz.m.resize(L);
    dz.n.resize(L);
    dz.offset.assign(L + 1, 0);
    for (int l = 0; l < L; ++l) {
        const int m = m_user[dz.internal_to_user[l]];
        if (m < 0 || m > 26) throw FastMtgpError("make_design: log2 size out of range");
        dz.m[l] = m;
        dz.n[l] = std::uint64_t{1} << m;
        dz.offset[l + 1] = dz.offset[l] + dz.n[l];
    }
    dz.N = dz.offset[L];

    dz.shift.resize(L);
    dz.shift_bits.resize(L);
    dz.X.resize(L);
    for (int l = 0; l < L; ++l) {
        const int user = dz.internal_to_user[l];  // shift substream = user task
        dz.shift[l].resize(d);
        dz.shift_bits[l].resize(d);
        for (int j = 0; j < d; ++j) {
            dz.shift_bits[l][j] = rng::bits53(seed, static_cast<std::uint64_t>(user), j);
            dz.shift[l][j] = bits_to_frac(dz.shift_bits[l][j]);
        }
        if (kind == SeqKind::lattice)
            dz.X[l] = lattice_points(default_lattice(d), dz.shift[l], 0, dz.n[l]);
        else
            dz.X[l] = digital_net_points(default_digital(d), dz.shift_bits[l], 0, dz.n[l]);
    }
    return dz;
}

std::vector<double> shifted_points(SeqKind kind, int d, std::uint64_t i0,
                                   std::uint64_t count, std::uint64_t seed,
                                   std::uint64_t stream) {
    if (kind == SeqKind::lattice) {
        std::vector<double> shift(d);
        for (int j = 0; j < d; ++j) shift[j] = rng::uniform01(seed, stream, j);
        return lattice_points(default_lattice(d), shift, i0, count);
    }
    std::vector<std::uint64_t> shift(d);
    for (int j = 0; j < d; ++j) shift[j] = rng::bits53(seed, stream, j);
    return digital_net_points(default_digital(d), shift, i0, count);
}

}  // namespace fastmtgp
