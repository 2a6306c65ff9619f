"""Smoke tests for the python module: end-to-end fit, cubature, transforms."""

import math

import fastmtgp


def approx(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def test_design_points():
    pts = fastmtgp.design_points("digital", 2, [8, 4], seed=3)
    assert len(pts) == 2
    assert len(pts[0]) == 8 * 2 and len(pts[1]) == 4 * 2
    assert all(0.0 <= x < 1.0 for block in pts for x in block)
    again = fastmtgp.design_points("digital", 2, [8, 4], seed=3)
    assert pts == again
    assert fastmtgp.design_points("lattice", 2, [8, 4], seed=4) != pts


def test_transforms():
    a = [1.0, 2.0, -1.0, 0.5]
    assert all(approx(x, y, 1e-12) for x, y in zip(fastmtgp.fwht(fastmtgp.fwht(a)), a))
    z = [complex(1, 0), complex(0, 1), complex(-1, 0), complex(0, -1)]
    back = fastmtgp.fft_bitrev_inv(fastmtgp.fft_bitrev(z))
    assert all(abs(x - y) < 1e-12 for x, y in zip(back, z))


def test_kernels():
    assert approx(fastmtgp.si_bernoulli(0.25, 0.25, 1), math.pi**2 / 3.0, 1e-12)
    assert approx(fastmtgp.dsi_order(1, 0.5, 0.5), 1.0, 1e-12)


def test_problems():
    names = fastmtgp.problem_names()
    assert "ackley" in names and "rosenbrock" in names
    info = fastmtgp.problem_info("ackley")
    assert info["d"] == 4 and info["L"] == 2 and len(info["ref_integral"]) == 2
    assert abs(fastmtgp.problem_eval("ackley", 2, [0.5] * 4)) < 1e-12


def test_fit_and_cubature():
    n = [64, 64]
    pts = fastmtgp.design_points("digital", 4, n, seed=0)
    y = [
        [fastmtgp.problem_eval("ackley", u + 1, pts[u][4 * i : 4 * i + 4]) for i in range(n[u])]
        for u in range(2)
    ]
    model = fastmtgp.Model(kernel="dsi-digital", d=4, n=n, seed=0, y=y)
    report = model.fit(steps=10)
    assert report["steps"] == 10
    assert len(report["loss_trace"]) == 10
    assert report["loss_trace"][-1] <= report["loss_trace"][0]
    assert math.isfinite(model.loss())

    mu, sigma = model.cubature()
    ref = fastmtgp.problem_info("ackley")["ref_integral"]
    assert len(mu) == 2
    assert abs(mu[1] - ref[1]) < 2.0  # loose: 10 steps on 64 points
    assert sigma[0][0] >= 0.0 and sigma[1][1] >= 0.0

    w, mse = fastmtgp.optimal_weights(mu, sigma, [1.0, 1.0])
    assert len(w) == 2 and mse >= 0.0

    x = [0.3, 0.7, 0.1, 0.9]
    m1 = model.posterior_mean(1, x)
    assert math.isfinite(m1)
    batch = model.posterior_mean_batch(1, [x, [0.2, 0.2, 0.2, 0.2]])
    assert approx(batch[0], m1, 1e-12)
    assert model.posterior_cov(1, x, 1, x) >= -1e-9

    clone = fastmtgp.Model.from_json(model.to_json())
    assert approx(clone.posterior_mean(1, x), m1, 1e-10)


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok - {t.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
