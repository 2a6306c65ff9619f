#!/usr/bin/env python3
"""Generate the low-discrepancy generator tables shipped under data/.

Outputs:
  data/sobol_directions_d100_m32.txt   -- base-2 digital-net direction numbers
  data/lattice_gen_d100_n2p20.txt      -- rank-1 lattice generating vector

The digital-net columns are the Joe--Kuo ("new-joe-kuo-6.21201") direction
numbers embedded in SciPy, msb-aligned within 32 bits. The lattice vector is
built here by a randomized component-by-component search minimizing the
shift-invariant worst-case error with product weights 1/j^2; first component
fixed to 1, all components odd (hence coprime with the power-of-two sizes).
"""

import os

import numpy as np

D = 100
MBITS = 32
NLAT = 1 << 20
CBC_SEED = 20250825
CBC_POOL = 24

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "data")


def sobol_table():
    from scipy.stats import _sobol

    v = np.zeros((D, MBITS), dtype=np.uint64)
    _sobol._initialize_v(v, dim=D, bits=MBITS)
    return v


def write_sobol(v):
    path = os.path.join(DATA, "sobol_directions_d100_m32.txt")
    with open(path, "w") as f:
        f.write("# base-2 digital-net direction numbers, one line per dimension\n")
        f.write("# source: Joe-Kuo new-joe-kuo-6.21201 tables as embedded in SciPy "
                "(scipy.stats._sobol._initialize_v, scipy 1.15.3)\n")
        f.write("# columns msb-aligned in 32 bits: column p encodes the fraction "
                "value[p] / 2^32\n")
        f.write(f"# d={D} m={MBITS}\n")
        for j in range(D):
            f.write(" ".join(str(int(c)) for c in v[j]) + "\n")
    print("wrote", path)


def cbc_vector():
    # worst-case-error kernel: 2*pi^2*B2(u), B2(u) = u^2 - u + 1/6
    rng = np.random.default_rng(CBC_SEED)
    idx = np.arange(NLAT, dtype=np.uint64)
    mask = np.uint64(NLAT - 1)

    def omega(z):
        u = ((idx * np.uint64(z)) & mask).astype(np.float64) / NLAT
        return 2.0 * np.pi**2 * (u * (u - 1.0) + 1.0 / 6.0)

    g = [1]
    prod = 1.0 + 1.0 * omega(1)  # gamma_1 = 1
    for j in range(2, D + 1):
        gamma = 1.0 / j**2
        cands = 2 * rng.integers(1, NLAT // 2, size=CBC_POOL) + 1
        best_z, best_e = None, np.inf
        for z in cands:
            e = float(np.mean(prod * (1.0 + gamma * omega(int(z)))))
            if e < best_e:
                best_z, best_e = int(z), e
        g.append(best_z)
        prod = prod * (1.0 + gamma * omega(best_z))
        if j in (2, 4, 8, 16, 32, 64, 100):
            print(f"  cbc dim {j}: g_j={best_z} sq-wce={best_e - 1.0:.6e}")
    return g


def write_lattice(g):
    path = os.path.join(DATA, "lattice_gen_d100_n2p20.txt")
    with open(path, "w") as f:
        f.write("# rank-1 lattice generating vector, one component per line\n")
        f.write("# randomized component-by-component search (scripts/make_tables.py), "
                f"seed {CBC_SEED}, pool {CBC_POOL}\n")
        f.write("# criterion: product-weight (1/j^2) shift-invariant worst-case error "
                "at n=2^20; all components odd, g_1=1\n")
        f.write(f"# d={D} n_max={NLAT}\n")
        for z in g:
            f.write(f"{z}\n")
    print("wrote", path)


def main():
    os.makedirs(DATA, exist_ok=True)
    write_sobol(sobol_table())
    write_lattice(cbc_vector())


if __name__ == "__main__":
    main()
