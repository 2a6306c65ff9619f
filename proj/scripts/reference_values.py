#!/usr/bin/env python3
"""Freeze reference constants for the benchmark problems into data/reference_values.json.

Reference integrals over [0,1)^d are estimated with scrambled Sobol QMC
(scipy.stats.qmc, independent of the C++ implementation): 8 replicates of
2^20 points, mean of replicate means, spread recorded. Rosenbrock tasks 2 and 3
are polynomials with exact means (152 and 1367/3), used to cross-check the
estimator. Borehole values at the all-median point are stored as regression
constants.
"""

import json
import math
import os

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
SEEDS = [1001 + k for k in range(8)]
M = 20
EPS = 2.0**-53


def rosenbrock(level, x):
    p = 4.0 * x - 2.0
    x1, x2 = p[:, 0], p[:, 1]
    f3 = 100.0 * (x2 - x1**2) ** 2 + (1.0 - x1) ** 2
    if level == 3:
        return f3
    if level == 2:
        return 50.0 * (x2 - x1**2) ** 2 + (-2.0 - x1) ** 2 - 80.0 - 0.25 * x1 * x2
    return (f3 - 4.0 - 0.5 * x1 - 0.5 * x2) / (10.0 + 0.25 * x1 + 0.25 * x2)


def ackley(level, x):
    t = 65.536 * x - 32.768
    c = 0.0 if level == 1 else 2.0 * np.pi
    return (-20.0 * np.exp(-0.2 * np.sqrt(np.mean(t**2, axis=1)))
            - np.exp(np.mean(np.cos(c * t), axis=1)) + 20.0 + math.e)


def borehole(level, x):
    x = np.clip(x, EPS, 1.0 - EPS)
    c1, c2 = (2.0, 1.0) if level == 1 else (5.0, 1.5)
    rw = 0.1 + 0.0161812 * ndtri(x[:, 0])
    ri = np.exp(7.71 + 1.0056 * ndtri(x[:, 1]))
    tu = 63070.0 + x[:, 2] * (115600.0 - 63070.0)
    hu = 990.0 + x[:, 3] * (1110.0 - 990.0)
    tl = 63.1 + x[:, 4] * (116.0 - 63.1)
    hl = 700.0 + x[:, 5] * (820.0 - 700.0)
    lb = 1120.0 + x[:, 6] * (1680.0 - 1120.0)
    kw = 9855.0 + x[:, 7] * (12045.0 - 9855.0)
    lr = np.log(ri / rw)
    return c1 * np.pi * tu * (hu - hl) / (lr * (c2 + 2.0 * lb * tu / (lr * rw**2 * kw) + tu / tl))


def elliptic(level, x):
    # -d/du( e^{a(u,x)} dF/du ) = 1, F(0)=F(1)=0, a = sum_j ndtri(x_j) sin(pi j u)/j,
    # 3-point scheme with e^a at interval midpoints, Thomas solve, return max F.
    x = np.clip(x, EPS, 1.0 - EPS)
    d = x.shape[1]
    mm = 2 ** (1 + level)
    h = 1.0 / mm
    umid = (np.arange(mm) + 0.5) * h
    jj = np.arange(1, d + 1)
    smat = np.sin(np.pi * np.outer(umid, jj)) / jj  # (mm, d)
    z = ndtri(x)  # (B, d)
    c = np.exp(smat @ z.T)  # (mm, B)
    nin = mm - 1
    diag = c[:-1] + c[1:]          # (nin, B)
    lower = -c[1:-1]               # (nin-1, B) sub/super diagonal (symmetric)
    rhs = np.full_like(diag, h * h)
    # Thomas, vectorized over the batch axis
    cp = np.empty_like(lower)
    dp = np.empty_like(diag)
    dp[0] = rhs[0] / diag[0]
    if nin > 1:
        cp[0] = lower[0] / diag[0]
        for k in range(1, nin):
            denom = diag[k] - lower[k - 1] * cp[k - 1]
            if k < nin - 1:
                cp[k] = lower[k] / denom
            dp[k] = (rhs[k] - lower[k - 1] * dp[k - 1]) / denom
        for k in range(nin - 2, -1, -1):
            dp[k] = dp[k] - cp[k] * dp[k + 1]
    return dp.max(axis=0)


PROBLEMS = {
    "rosenbrock": (2, 3, rosenbrock),
    "ackley": (4, 2, ackley),
    "borehole": (8, 2, borehole),
    "elliptic": (16, 3, elliptic),
}


def integral(fn, d, level):
    means = []
    for s in SEEDS:
        x = qmc.Sobol(d, scramble=True, seed=s).random_base2(M)
        vals = np.concatenate([fn(level, x[k:k + (1 << 17)])
                               for k in range(0, 1 << M, 1 << 17)])
        means.append(float(np.mean(vals)))
    return float(np.mean(means)), float(np.std(means))


def main():
    out = {"method": f"scrambled Sobol (scipy.stats.qmc), {len(SEEDS)} replicates x 2^{M} points",
           "seeds": SEEDS, "integrals": {}, "spread": {}, "borehole_median": {}}
    for name, (d, ltop, fn) in PROBLEMS.items():
        out["integrals"][name] = {}
        out["spread"][name] = {}
        for level in range(1, ltop + 1):
            mean, spread = integral(fn, d, level)
            out["integrals"][name][str(level)] = mean
            out["spread"][name][str(level)] = spread
            print(f"{name} task {level}: {mean:.10f} (replicate std {spread:.2e})")

    # polynomial tasks have exact means; QMC above is only a cross-check
    assert abs(out["integrals"]["rosenbrock"]["2"] - 152.0) < 1e-5
    assert abs(out["integrals"]["rosenbrock"]["3"] - 1367.0 / 3.0) < 1e-5
    out["integrals"]["rosenbrock"]["2"] = 152.0
    out["integrals"]["rosenbrock"]["3"] = 1367.0 / 3.0
    print("rosenbrock exact task2=152, task3=1367/3 =", 1367.0 / 3.0)
    med = np.full((1, 8), 0.5)
    out["borehole_median"]["low"] = float(borehole(1, med)[0])
    out["borehole_median"]["high"] = float(borehole(2, med)[0])
    print("borehole at all-median point:", out["borehole_median"])
    for level in (1, 2, 3):
        v = float(elliptic(level, np.full((1, 16), 0.5))[0])
        print(f"elliptic task {level} at all-median point: {v!r}")

    path = os.path.join(ROOT, "data", "reference_values.json")
    with open(path, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")
    print("wrote", path)


if __name__ == "__main__":
    main()
