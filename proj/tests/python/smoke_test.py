"""Smoke tests of the python bindings: parameter algebra, spectral
primitives, a tiny ground state and a short regularized evolution."""

import math

import numpy as np

import choquard as cq


def close(a, b, rel):
    return abs(a - b) <= rel * max(abs(a), abs(b), 1e-300)


def test_exponents():
    p = cq.ProblemParams(N=3, alpha=2.0, p=3.0, b=-0.1, a=1, delta=0.0)
    ok, violations = cq.validate(p)
    assert ok, violations
    e = cq.derive_exponents(p)
    assert close(e["p_mass"], 7.0 / 3.0, 1e-13)
    assert close(e["p_energy"], 5.0, 1e-13)
    assert close(e["sigma"], 1.0, 1e-12)
    assert cq.classify_regime(p) == "inter-critical"

    bad = cq.ProblemParams(N=3, alpha=2.0, p=5.0)
    ok, violations = cq.validate(bad)
    assert not ok and any("p^b" in v for v in violations)

    assert close(p.riesz_normalization(), 1.0 / (4.0 * math.pi), 1e-13)


def test_spectral():
    cq.self_test()
    g = cq.Grid(dim=3, n=32, L=8.0)
    u = cq.gaussian_field(g, width=1.0)
    assert u.shape == (32, 32, 32)
    assert close(cq.mass(g, u), math.pi ** 1.5, 1e-9)
    assert close(cq.gradient_squared(g, u), 1.5 * math.pi ** 1.5, 1e-7)

    # unitarity of the free propagator
    moved = cq.kinetic_multiplier_step(g, u, 0.3)
    assert close(cq.mass(g, moved), cq.mass(g, u), 1e-12)

    # riesz potential of a unit-mass gaussian against the closed form;
    # |gaussian(width 1)|^2 = e^{-r^2} has width 1/sqrt(2) and mass pi^{3/2}
    s = 1.0 / math.sqrt(2.0)
    rho = u.astype(complex) ** 2 / math.pi ** 1.5
    pot = cq.riesz_convolve(g, rho, 2.0)
    x = np.array(g.coords())
    i, j = len(x) // 2 + 4, len(x) // 2
    idx = (i, j, j)
    r = math.sqrt(x[i] ** 2 + 2.0 * x[j] ** 2)  # half-cell offset grid
    exact = math.erf(r / (math.sqrt(2.0) * s)) / (4.0 * math.pi * r)
    assert close(pot[idx].real, exact, 1e-3)


def test_functionals_and_ground_state():
    g = cq.Grid(dim=3, n=16, L=6.0)
    p = cq.ProblemParams(N=3, alpha=2.0, p=2.0, b=0.0, a=1, delta=0.0)
    u = cq.gaussian_field(g, width=1.1)
    rep = cq.functional_report(g, u, p)
    assert close(rep["energy"],
                 0.5 * (rep["kinetic"] + rep["potential_term"]) - rep["nonlocal_term"] / 4.0,
                 1e-12)
    assert rep["weinstein"] > 0.0
    assert cq.hls_sharp_constant(3, 2.0) > 0.0

    gs = cq.minimize_weinstein(p, cq.Grid(dim=3, n=16, L=8.0))
    assert gs["c_gn"] > 0.0
    assert gs["el_residual"] < 1e-6
    assert close(gs["c_gn_from_Q"], gs["c_gn"], 1e-2)

    th = cq.thresholds(1.0, cq.ProblemParams(N=3, alpha=2.0, p=3.0, b=-0.1))
    assert close(th["K"], math.sqrt(1.5), 1e-12)
    assert close(th["H"], 0.375, 1e-12)


def test_evolution():
    g = cq.Grid(dim=3, n=16, L=6.0)
    p = cq.ProblemParams(N=3, alpha=2.0, p=2.0, b=-0.1, a=1, delta=0.1)
    u0 = cq.gaussian_field(g, width=1.0)
    tr = cq.evolve(g, u0, p, dt=2e-3, t_max=0.05, save_every=5,
                   tail_fraction_max=1e-2)
    assert tr["outcome"] in ("completed", "blowup-detected", "resolution-lost")
    m = tr["mass"]
    assert close(m[0], m[-1], 1e-11)
    assert len(tr["times"]) == len(tr["variance"])

    stepped = cq.strang_step(g, u0, 1e-3, p)
    assert close(cq.mass(g, stepped), cq.mass(g, u0), 1e-12)

    var, mom = cq.variance_and_momentum(g, u0)
    assert var > 0.0 and abs(mom) < 1e-10 * var


def main():
    test_exponents()
    test_spectral()
    test_functionals_and_ground_state()
    test_evolution()
    print("python smoke tests passed")


if __name__ == "__main__":
    main()
