"""Quick invariant checks run by ``qwork selftest``."""
from __future__ import annotations

import numpy as np

from . import twolevel as tl
from . import vibronic as vb
from . import workstats as ws
from .numerics import eig_hermitian_2x2, laguerre_assoc, unitarity_error
from .switching import SwitchingFunction
from .units import beta_from_kelvin


def _laguerre():
    from fractions import Fraction
    from math import comb, factorial
    for n, k, x in [(0, 2, 0.04), (5, 2, 0.04), (12, 3, 1.7), (30, 0, 3.2)]:
        fx = Fraction(x)  # exact series: float summation cancels badly
        series = float(sum(comb(n + k, n - j) * (-fx) ** j / factorial(j) for j in range(n + 1)))
        if abs(laguerre_assoc(n, k, x) - series) > 1e-10 * max(1.0, abs(series)):
            return False
    return True


def _eig():
    h = np.array([[0.3, 0.2 - 0.7j], [0.2 + 0.7j, -1.1]])
    e = eig_hermitian_2x2(h)
    return np.allclose(e.vectors @ np.diag(e.values) @ e.vectors.conj().T, h, atol=1e-11)


def _switching():
    sw = SwitchingFunction()
    return all(sw.G(2.0 * m) == m for m in range(5)) and sw.g(0.5) == 1 and sw.g(9.0) == 0


def _rwa_oracle():
    from .numerics import propagate
    p, sw = tl.AtomParams(rabi=0.37, theta=0.4), SwitchingFunction()
    u = propagate(tl.h_rotating(p, sw, rwa=True), 0.0, 6.3, 2000, sw.edges(0, 6.3))
    return np.max(np.abs(u - tl.u_rwa(p, sw, 6.3, frame="rotating"))) < 1e-9


def _full_unitary():
    p, sw = tl.AtomParams(), SwitchingFunction()
    return unitarity_error(tl.u_full(p, sw, 8.0)) < 1e-10


def _trace_purity():
    p, sw = tl.AtomParams(), SwitchingFunction()
    rho0 = tl.InitialDensity(0.7, 0.2 + 0.1j)
    rho = tl.evolve_density(rho0, tl.u_full_grid(p, sw, np.linspace(0, 8, 41)))
    tr = np.trace(rho, axis1=1, axis2=2)
    pur = np.trace(rho @ rho, axis1=1, axis2=2)
    return np.all(np.abs(tr - 1) < 1e-12) and np.all(np.abs(pur - pur[0]) < 1e-10)


def _char_norm():
    p, sw = tl.AtomParams(rabi=0.8), SwitchingFunction()
    nus = np.linspace(-9, 9, 37)
    ch = ws.char_rwa(p, sw, 3.3, 0.8, nus)
    d = ws.work_distribution_rwa(p, sw, 3.3, 0.8)
    return (ws.char_rwa(p, sw, 3.3, 0.8, 0.0) == 1
            and np.allclose(ch, d.characteristic(nus), atol=1e-10)
            and np.allclose(ws.char_rwa(p, sw, 3.3, 0.8, -nus), np.conj(ch), atol=1e-12))


def _first_law():
    p, sw = tl.AtomParams(), SwitchingFunction()
    t = np.linspace(0, 8, 50)
    return np.allclose(ws.internal_energy_change(p, sw, t, tl.InitialDensity(0.9)),
                       ws.average_work_rwa(p, sw, t, 0.9), atol=1e-10)


def _jarzynski():
    p, sw = tl.AtomParams(), SwitchingFunction()
    for T in (5.0, 30.0, 300.0):
        beta = beta_from_kelvin(T)
        A = tl.InitialDensity.thermal(beta, p.omega0).A
        for t in np.linspace(0, 8, 11):
            if ws.average_work_rwa(p, sw, t, A) - ws.delta_f_rwa(p, sw, t, A, beta) < -1e-10:
                return False
        u = tl.u_full(p, sw, 8.0)
        ch = ws.char_tpm(tl.h_bare(p), tl.h_lab_full(p, sw, 8.0), u, tl.InitialDensity(A), 1j * beta)
        if abs(ch - 1) > 1e-9:
            return False
    return True


def _vibronic():
    v = vb.VibronicParams()
    th = vb.thermal_occupation(30.0, v.trap)
    tau = np.linspace(0, 3000, 61) / v.kappa
    a, b = vb.coefficients(v, np.arange(th.n_max + 1), tau[:, None])
    pop2, pop1 = vb.populations(v, vb.AtomMix(0.3, 0.7), th, tau)
    d = vb.work_distribution_vibronic(v, vb.GS, th, tau[17])
    return (np.max(np.abs(np.abs(a) ** 2 + np.abs(b) ** 2 - 1)) < 1e-12
            and np.max(np.abs(pop1 + pop2 - 1)) < 1e-9
            and abs(d.mean() - vb.average_work_vibronic(v, vb.GS, th, tau[17])) < 1e-10)


CHECKS = {
    "laguerre recurrence matches series": _laguerre,
    "2x2 eigendecomposition reconstructs input": _eig,
    "pulse area G(2m) = m": _switching,
    "RWA propagation matches closed form": _rwa_oracle,
    "full propagator is unitary": _full_unitary,
    "trace and purity preserved": _trace_purity,
    "characteristic function normalization, duality, hermiticity": _char_norm,
    "internal energy change equals average work": _first_law,
    "Jarzynski inequality and cyclic equality": _jarzynski,
    "vibronic unitarity, completeness, mean work": _vibronic,
}


def run(stream=None) -> bool:
    import sys
    stream = stream or sys.stdout
    ok = True
    for name, check in CHECKS.items():
        try:
            passed = bool(check())
        except Exception as exc:  # report, keep going
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok &= passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}", file=stream)
    return ok
