"""
Driven two-level atom
=====================

Basis ordering is ``(|1>, |2>)``: index 0 is the ground state, index 1 the
excited state with energy ``omega0``. With ``sigma+ = |2><1|`` the
rotating-frame Hamiltonian (frame ``R = exp(-i omega_L t sigma+ sigma-)``) is

    H~ = Delta |2><2| - Omega g(t) (e^{-i theta} sigma+ + h.c.)
                      - Omega g(t) (e^{-i theta} e^{2 i omega_L t} sigma+ + h.c.)

Dropping the last (counter-rotating) term gives the RWA Hamiltonian. On
resonance its propagator only depends on the pulse area ``G(t) Omega``:

    U~ = [[cos GW, i e^{i theta} sin GW], [i e^{-i theta} sin GW, cos GW]]

and the lab-frame propagator is ``U = R(t) U~``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .numerics import (
    NumericalContractError,
    auto_steps,
    dagger,
    propagate,
    propagate_grid,
    unitarity_error,
)
from .switching import SwitchingFunction

log = logging.getLogger(__name__)

RESONANCE_TOL = 1e-12
#: floor used when writing log(0) to text output
LOG_CLAMP = -745.0


@dataclass(frozen=True)
class AtomParams:
    """Bare atom and drive. Frequencies in rad/ps, ``theta`` in radians."""

    omega0: float = 1.0
    omega_laser: float = 1.0
    rabi: float = 0.5
    theta: float = 0.0

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"atom.omega0 must be positive, got {self.omega0}")
        if not self.rabi >= 0:
            raise ValueError(f"atom.rabi must be non-negative, got {self.rabi}")
        if not (math.isfinite(self.omega_laser) and math.isfinite(self.theta)):
            raise ValueError("atom.omega_laser and atom.theta must be finite")

    @property
    def detuning(self) -> float:
        return self.omega0 - self.omega_laser

    @property
    def on_resonance(self) -> bool:
        return abs(self.detuning) <= RESONANCE_TOL * max(1.0, self.omega0)


@dataclass(frozen=True)
class InitialDensity:
    """``rho(0) = [[A, conj(xi)], [xi, 1 - A]]`` with ``A`` the ground population."""

    A: float = 1.0
    xi: complex = 0j

    def __post_init__(self):
        if not 0.0 <= self.A <= 1.0:
            raise ValueError(f"initial.A must lie in [0, 1], got {self.A}")
        if abs(self.xi) ** 2 > self.A * (1.0 - self.A) + 1e-12:
            raise ValueError("initial.xi violates positivity: |xi|^2 > A (1 - A)")

    @classmethod
    def thermal(cls, beta: float, omega0: float) -> "InitialDensity":
        """Gibbs state of the bare atom at inverse temperature ``beta``."""
        return cls(A=float(1.0 / (1.0 + np.exp(-beta * omega0))))

    @property
    def matrix(self) -> np.ndarray:
        xi = complex(self.xi)
        return np.array([[self.A, np.conj(xi)], [xi, 1.0 - self.A]], dtype=complex)

    @property
    def diagonal(self) -> "InitialDensity":
        return InitialDensity(self.A)


def _require_resonance(params: AtomParams, what: str):
    if not params.on_resonance:
        raise ValueError(
            f"{what} needs Delta = 0 (got Delta = {params.detuning:g}); "
            "use u_offresonance for detuned driving"
        )


# ---------------------------------------------------------------------------
# Hamiltonians
# ---------------------------------------------------------------------------

def rotating_frame(params: AtomParams, t) -> np.ndarray:
    """``R(t) = diag(1, exp(-i omega_L t))``."""
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = 1.0
    out[..., 1, 1] = np.exp(-1j * params.omega_laser * t)
    return out


def h_rotating(params: AtomParams, sw: SwitchingFunction, rwa: bool = True):
    """Rotating-frame Hamiltonian as a vectorized function of time."""
    def h(t):
        t = np.asarray(t, dtype=float)
        coupling = -params.rabi * sw.g(t) * np.exp(1j * params.theta) * np.ones_like(t)
        if not rwa:
            coupling = coupling * (1.0 + np.exp(-2j * params.omega_laser * t))
        out = np.zeros(t.shape + (2, 2), dtype=complex)
        out[..., 0, 1] = coupling
        out[..., 1, 0] = np.conj(coupling)
        out[..., 1, 1] = params.detuning
        return out
    return h


def h_bare(params: AtomParams) -> np.ndarray:
    return np.diag([0.0, params.omega0]).astype(complex)


def h_lab_rwa(params: AtomParams, sw: SwitchingFunction, t) -> np.ndarray:
    """Lab-frame RWA Hamiltonian, off-diagonal ``-g Omega exp(i(theta + omega_L t))``."""
    t = np.asarray(t, dtype=float)
    c = -sw.g(t) * params.rabi * np.exp(1j * (params.theta + params.omega_laser * t))
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    out[..., 0, 1] = c
    out[..., 1, 0] = np.conj(c)
    out[..., 1, 1] = params.omega0
    return out


def h_lab_full(params: AtomParams, sw: SwitchingFunction, t) -> np.ndarray:
    """Lab-frame Hamiltonian with both rotating and counter-rotating terms.

    Off-diagonal ``-2 g Omega exp(i theta) cos(omega_L t)``: the factor 2 is
    what transforming the rotating-frame Hamiltonian back to the lab gives.
    """
    t = np.asarray(t, dtype=float)
    c = -2.0 * sw.g(t) * params.rabi * np.exp(1j * params.theta) * np.cos(params.omega_laser * t)
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    out[..., 0, 1] = c
    out[..., 1, 0] = np.conj(c)
    out[..., 1, 1] = params.omega0
    return out


# ---------------------------------------------------------------------------
# Propagators
# ---------------------------------------------------------------------------

def _to_frame(params: AtomParams, u_rot: np.ndarray, t, frame: str) -> np.ndarray:
    if frame == "rotating":
        return u_rot
    if frame == "lab":
        return rotating_frame(params, t) @ u_rot
    raise ValueError(f"frame must be 'lab' or 'rotating', got {frame!r}")


def u_rwa(params: AtomParams, sw: SwitchingFunction, t, frame: str = "lab") -> np.ndarray:
    """Closed-form on-resonance RWA propagator (vectorized over ``t``)."""
    _require_resonance(params, "u_rwa")
    t = np.asarray(t, dtype=float)
    gw = params.rabi * np.asarray(sw.G(t))
    c, s = np.cos(gw), np.sin(gw)
    e = np.exp(1j * params.theta)
    u = np.empty(t.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 1, 1] = c
    u[..., 0, 1] = 1j * e * s
    u[..., 1, 0] = 1j * np.conj(e) * s
    return _to_frame(params, u, t, frame)


def full_rate(params: AtomParams, sw: SwitchingFunction) -> float:
    """Bound on the spectral norm plus the fastest oscillation of the full H~."""
    return 2.0 * params.rabi * abs(sw.amplitude) + abs(params.detuning) + 2.0 * abs(params.omega_laser)


def u_full(params: AtomParams, sw: SwitchingFunction, t: float, steps: int | None = None,
           frame: str = "lab") -> np.ndarray:
    """Numerical propagator keeping the counter-rotating terms."""
    if steps is None:
        steps = auto_steps(t, full_rate(params, sw))
    u = propagate(h_rotating(params, sw, rwa=False), 0.0, float(t), steps, sw.edges(0.0, t))
    return _to_frame(params, u, t, frame)


def u_full_grid(params: AtomParams, sw: SwitchingFunction, times, steps: int | None = None,
                frame: str = "lab", workers: int = 1) -> np.ndarray:
    """``u_full`` on an ascending grid starting at ``t = 0`` (or later)."""
    times = np.asarray(times, dtype=float)
    if steps is None:
        steps = auto_steps(times[-1], full_rate(params, sw))
    grid = times if times[0] == 0 else np.concatenate([[0.0], times])
    u = propagate_grid(h_rotating(params, sw, rwa=False), grid, steps,
                       sw.edges(0.0, grid[-1]), workers=workers)
    if grid is not times:
        u = u[1:]
    return _to_frame(params, u, times, frame)


class _Blowup(Exception):
    pass


def _v_from_coordinates(A: complex, B: complex, C: complex) -> np.ndarray:
    # V = exp(i A sigma-) exp(i B sigma+) exp(i C sigma_z), sigma_z = diag(-1, 1)
    return np.array([
        [(1 - A * B) * np.exp(-1j * C), 1j * A * np.exp(1j * C)],
        [1j * B * np.exp(-1j * C), np.exp(1j * C)],
    ])


def _offresonance_ode(params: AtomParams, sw: SwitchingFunction, t: float,
                      rtol: float, blowup: float) -> np.ndarray:
    """Integrate the (A, B, C) coordinates of V~ piecewise over the pulses.

    With p = g Omega exp(-i(theta - Delta t)) and q = conj-partner
    g Omega exp(i(theta - Delta t)):

        A' = q + p A^2,   B' = p (1 - 2 A B),   C' = i A p,   f' = 0
    """
    w, th, dl = params.rabi, params.theta, params.detuning

    def rhs(s, y, amp):
        A, B = y[0], y[1]
        p = amp * w * np.exp(-1j * (th - dl * s))
        q = amp * w * np.exp(1j * (th - dl * s))
        return [q + p * A * A, p * (1.0 - 2.0 * A * B), 1j * A * p]

    def too_big(s, y, amp):
        return blowup - max(abs(y[0]), abs(y[1]))
    too_big.terminal = True

    y = np.zeros(3, dtype=complex)
    edges = np.unique(np.concatenate([[0.0], sw.edges(0.0, t), [t]]))
    edges = edges[edges <= t]
    for a, b in zip(edges[:-1], edges[1:]):
        amp = float(sw.g(0.5 * (a + b)))
        if amp == 0.0 or w == 0.0:
            continue
        sol = solve_ivp(rhs, (a, b), y, method="DOP853", args=(amp,), rtol=rtol,
                        atol=rtol * 1e-2, events=too_big)
        if sol.status != 0 or not np.all(np.isfinite(sol.y[:, -1])):
            raise _Blowup(f"ODE coordinates diverged near t = {sol.t[-1]:.6g}")
        y = sol.y[:, -1]
    v = _v_from_coordinates(*y)
    return np.diag([1.0, np.exp(-1j * dl * t)]) @ v


def u_offresonance(params: AtomParams, sw: SwitchingFunction, t: float, steps: int | None = None,
                   method: str = "ode", frame: str = "lab", rtol: float = 1e-12,
                   blowup: float = 1e6, return_info: bool = False):
    """Detuned RWA propagator.

    ``method="ode"`` integrates the disentangled-exponential coordinates of
    ``U~ = exp(-i Delta t sigma+ sigma-) exp(i A sigma-) exp(i B sigma+) exp(i C sigma_z)``.
    These coordinates are singular where ``<2|U~|2>`` vanishes; if they
    diverge the call falls back to ``method="direct"`` (stepwise propagation of
    the detuned RWA Hamiltonian), logs a warning and, with ``return_info``,
    reports ``{"method": "direct", "fallback": True}``.
    """
    info = {"method": method, "fallback": False}
    if method == "ode":
        try:
            u = _offresonance_ode(params, sw, float(t), rtol, blowup)
        except _Blowup as exc:
            log.warning("off-resonance ODE fell back to direct propagation: %s", exc)
            info = {"method": "direct", "fallback": True, "reason": str(exc)}
            method = "direct"
    if method == "direct":
        if steps is None:
            steps = auto_steps(t, params.rabi * abs(sw.amplitude) + abs(params.detuning))
        u = propagate(h_rotating(params, sw, rwa=True), 0.0, float(t), steps, sw.edges(0.0, t))
    elif method != "ode":
        raise ValueError(f"method must be 'ode' or 'direct', got {method!r}")
    if unitarity_error(u) > 1e-8:
        raise NumericalContractError("off-resonance propagator lost unitarity")
    u = _to_frame(params, u, t, frame)
    return (u, info) if return_info else u


# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------

def evolve_density(rho0, u: np.ndarray) -> np.ndarray:
    """``U rho(0) U^dagger`` (``u`` may be a stack of propagators)."""
    rho = rho0.matrix if isinstance(rho0, InitialDensity) else np.asarray(rho0, dtype=complex)
    return u @ rho @ dagger(u)


def population_ground(rho: np.ndarray):
    """Return ``(rho11, rho11**2)``.

    ``rho11`` is the ground-state occupation probability. The second value
    is the squared matrix element that the two-level population figures
    display; it equals the probability only at 0 and 1.
    """
    rho11 = np.asarray(rho)[..., 0, 0].real
    return rho11, rho11 ** 2


def decoherency(gw):
    """Closed-form RWA decoherency ``-log 2 + log|sin(G Omega)|``.

    Returns ``-inf`` where the sine vanishes.
    """
    with np.errstate(divide="ignore"):
        out = -math.log(2.0) + np.log(np.abs(np.sin(np.asarray(gw, dtype=float))))
    return float(out) if np.ndim(out) == 0 else out


def decoherency_from_density(rho: np.ndarray):
    """``log|rho12|`` of an evolved density matrix (any propagation path)."""
    with np.errstate(divide="ignore"):
        out = np.log(np.abs(np.asarray(rho)[..., 0, 1]))
    return float(out) if np.ndim(out) == 0 else out


def clamp_log(values, floor: float = LOG_CLAMP):
    """Replace ``-inf`` (and anything below ``floor``) for text output.

    Returns ``(clamped, flag)`` where ``flag`` is 1.0 at clamped points.
    """
    values = np.asarray(values, dtype=float)
    flag = ~(values > floor)
    return np.where(flag, floor, values), flag.astype(float)
