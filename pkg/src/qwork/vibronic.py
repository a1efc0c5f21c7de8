"""
Trapped (vibronic) two-level atom driven near the k-th red sideband
===================================================================

The laser ``omega_L = omega21 - k nu + dw`` resonantly couples the pairs
``|1, n + k> <-> |2, n>``. Each pair evolves under a 2x2 block with

    a_n = e^{-i dw t/2} [cos(G_n t) + i dw / (2 G_n) sin(G_n t)]
    b_n = e^{-i dw t/2} |kappa| g w_n / (i G_n) sin(G_n t)
    G_n = sqrt((dw/2)^2 + g^2 w_n^2 |kappa|^2)
    w_n = cos(pi k / 2) eta^k e^{-eta^2/2} sqrt(n! / (n + k)!) L_n^(k)(eta^2)

while the ``k`` lowest ground-manifold levels ``|1, q < k>`` are untouched.
Every work quantum exchanged is ``omega21 - k nu`` (hbar = 1).

Note the ``cos(pi k / 2)`` factor makes every odd sideband vanish.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .numerics import NumericalContractError, laguerre_assoc_table
from .units import beta_from_kelvin
from .workstats import WorkDistribution


@dataclass(frozen=True)
class VibronicParams:
    """Trap ``trap`` (nu), transition ``omega21``, coupling ``kappa`` (|kappa|),
    Lamb-Dicke ``eta``, sideband index ``sideband`` (k), sideband detuning
    ``detuning`` (dw) and spinor phase ``theta``. Frequencies in rad/ps."""

    trap: float = 2.0
    omega21: float = 10.0
    kappa: float = 0.1
    eta: float = 0.2
    sideband: int = 2
    detuning: float = 0.0005
    theta: float = 0.0

    def __post_init__(self):
        if not self.trap > 0:
            raise ValueError(f"vibronic.trap must be positive, got {self.trap}")
        if not self.eta > 0:
            raise ValueError(f"vibronic.eta must be positive, got {self.eta}")
        if not self.kappa >= 0:
            raise ValueError(f"vibronic.kappa must be non-negative, got {self.kappa}")
        if int(self.sideband) != self.sideband or self.sideband < 0:
            raise ValueError(f"vibronic.sideband must be a non-negative integer, got {self.sideband}")
        if abs(self.detuning) >= 0.1 * self.trap:
            warnings.warn("sideband detuning is not small compared with the trap frequency", stacklevel=2)

    @property
    def k(self) -> int:
        return int(self.sideband)

    @property
    def work_quantum(self) -> float:
        """``omega21 - k nu``: energy gained by the atom on |1, n+k> -> |2, n>."""
        return self.omega21 - self.k * self.trap

    @property
    def omega_laser(self) -> float:
        return self.omega21 - self.k * self.trap + self.detuning


@dataclass(frozen=True)
class ThermalState:
    """Truncated phonon occupation ``p(n)``, ``n = 0..n_max``."""

    temperature: float
    probs: np.ndarray
    tail_mass: float = 0.0

    @property
    def n_max(self) -> int:
        return len(self.probs) - 1

    def shifted(self, k: int) -> np.ndarray:
        """``p(n + k)`` on ``n = 0..n_max`` (zero beyond the table)."""
        out = np.zeros_like(self.probs)
        if k <= self.n_max:
            out[: len(self.probs) - k] = self.probs[k:]
        return out

    @classmethod
    def fock(cls, n: int) -> "ThermalState":
        probs = np.zeros(n + 1)
        probs[n] = 1.0
        return cls(0.0, probs)


@dataclass(frozen=True)
class AtomMix:
    """Initial electronic populations: ``excited`` (A) and ``ground`` (B)."""

    excited: float = 0.0
    ground: float = 1.0

    def __post_init__(self):
        if self.excited < 0 or self.ground < 0 or abs(self.excited + self.ground - 1) > 1e-12:
            raise ValueError("initial atomic weights must be non-negative and sum to 1")


ES = AtomMix(excited=1.0, ground=0.0)
GS = AtomMix(excited=0.0, ground=1.0)


def thermal_occupation(temperature: float, trap: float, tail_tol: float = 1e-10) -> ThermalState:
    """Bose-Einstein occupation of a mode of frequency ``trap`` at ``temperature`` kelvin.

    The table stops at the first ``n_max`` whose discarded tail
    ``exp(-(n_max + 1) x)`` is below ``tail_tol`` and is then renormalized.
    """
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    if not trap > 0:
        raise ValueError("trap frequency must be positive")
    x = beta_from_kelvin(temperature) * trap
    # tail beyond n_max is q^(n_max + 1), q = exp(-x)
    n_max = max(0, int(math.ceil(-math.log(tail_tol) / x)) - 1)
    n = np.arange(n_max + 1)
    probs = -np.expm1(-x) * np.exp(-x * n)
    tail = math.exp(-x * (n_max + 1))
    return ThermalState(float(temperature), probs / probs.sum(), tail)


# ---------------------------------------------------------------------------
# Sideband coefficients
# ---------------------------------------------------------------------------

_COS_QUARTER = (1.0, 0.0, -1.0, 0.0)


def sideband_coupling(params: VibronicParams, n):
    """Dimensionless coupling ``w_n`` (scalar or array of ``n``)."""
    n_arr = np.atleast_1d(np.asarray(n, dtype=int))
    if np.any(n_arr < 0):
        raise ValueError("Fock index must be non-negative")
    k, eta = params.k, params.eta
    lag = laguerre_assoc_table(int(n_arr.max()), k, eta * eta)[n_arr]
    ratio = np.ones(n_arr.shape)
    for j in range(1, k + 1):
        ratio = ratio / (n_arr + j)
    out = _COS_QUARTER[k % 4] * eta ** k * math.exp(-eta * eta / 2) * np.sqrt(ratio) * lag
    return float(out[0]) if np.ndim(n) == 0 else out


def rabi_frequency(params: VibronicParams, n, g: float = 1.0):
    """``G_n = sqrt((dw/2)^2 + g^2 w_n^2 |kappa|^2)``."""
    wn = sideband_coupling(params, n)
    return np.hypot(params.detuning / 2, g * wn * params.kappa)


def coefficients(params: VibronicParams, n, tau, g: float = 1.0):
    """Block amplitudes ``(a_n(tau), b_n(tau))``, broadcast over ``n`` and ``tau``.

    ``g`` is the constant amplitude during a rectangular pulse of length ``tau``.
    Where ``G_n = 0`` the block is frozen (``a = 1, b = 0``).
    """
    n = np.asarray(n)
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("interaction time must be non-negative")
    wn = np.asarray(sideband_coupling(params, n))
    gam = np.hypot(params.detuning / 2, g * wn * params.kappa)
    gt = gam * tau
    dw = params.detuning
    safe = np.where(gam > 0, gam, 1.0)
    # sin(G t) / G, finite as G -> 0
    sinc = np.where(gam > 0, np.sin(gt) / safe, tau)
    phase = np.exp(-0.5j * dw * tau)
    a = phase * (np.cos(gt) + 0.5j * dw * sinc)
    b = phase * params.kappa * g * wn * sinc / 1j
    frozen = gam == 0
    if np.any(frozen):
        a = np.where(frozen, 1.0 + 0j, a)
        b = np.where(frozen, 0j, b)
    return a, b


@dataclass(frozen=True)
class SidebandCoefficients:
    n: np.ndarray
    omega_n: np.ndarray
    gamma_n: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def rows(self):
        """``(n, w_n, G_n, |a_n|^2, |b_n|^2)`` per Fock index."""
        return np.column_stack([self.n, self.omega_n, self.gamma_n,
                                np.abs(self.a) ** 2, np.abs(self.b) ** 2])


def coefficient_table(params: VibronicParams, n_max: int, tau: float, g: float = 1.0) -> SidebandCoefficients:
    n = np.arange(n_max + 1)
    a, b = coefficients(params, n, tau, g)
    return SidebandCoefficients(n, sideband_coupling(params, n), rabi_frequency(params, n, g), a, b)


def _block_weights(params, th: ThermalState, tau, g):
    n = np.arange(th.n_max + 1)
    a, b = coefficients(params, n, np.asarray(tau, dtype=float)[..., None], g)
    return np.abs(a) ** 2, np.abs(b) ** 2, th.probs, th.shifted(params.k)


def _untouched(params, th: ThermalState) -> float:
    return float(th.probs[: params.k].sum())


# ---------------------------------------------------------------------------
# Observables
# ---------------------------------------------------------------------------

def populations(params: VibronicParams, mix: AtomMix, th: ThermalState, tau, g: float = 1.0):
    """``(pop2, pop1)``: excited and ground populations after a pulse of length ``tau``."""
    a2, b2, p, pk = _block_weights(params, th, tau, g)
    pop2 = mix.excited * (a2 @ p) + mix.ground * (b2 @ pk)
    pop1 = mix.excited * (b2 @ p) + mix.ground * (a2 @ pk) + mix.ground * _untouched(params, th)
    return pop2, pop1


def _sum_weights(params, mix, th, tau, g):
    a2, b2, p, pk = _block_weights(params, th, tau, g)
    lose = mix.excited * (b2 @ p)          # |2, n> -> |1, n + k>
    gain = mix.ground * (b2 @ pk)          # |1, n + k> -> |2, n>
    stay = mix.excited * (a2 @ p) + mix.ground * (a2 @ pk) + mix.ground * _untouched(params, th)
    return lose, stay, gain


def char_vibronic(params: VibronicParams, mix: AtomMix, th: ThermalState, tau, g: float, lam):
    """Characteristic function of work for the product initial state."""
    lose, stay, gain = _sum_weights(params, mix, th, tau, g)
    w = params.work_quantum
    lam = np.asarray(lam)
    out = lose * np.exp(-1j * lam * w) + stay + gain * np.exp(1j * lam * w)
    return complex(out) if np.ndim(out) == 0 else out


def char_vibronic_general(params: VibronicParams, rho: np.ndarray, tau: float, g: float, lam):
    """Characteristic function for an arbitrary initial density matrix.

    ``rho`` has shape ``(2, N, 2, N)`` indexed ``[atom, n, atom', n']`` with
    atom 0 the ground state ``|1>`` and atom 1 the excited state ``|2>``.
    Coherences inside each ``{|2, n>, |1, n + k>}`` block contribute through
    ``a_n b_n^*`` terms carrying the spinor phase ``theta``.
    """
    rho = np.asarray(rho, dtype=complex)
    N = rho.shape[1]
    k = params.k
    n = np.arange(max(N - k, 0))
    a, b = coefficients(params, n, tau, g)
    c = b * np.exp(1j * params.theta)
    lam = np.asarray(lam)[..., None]
    e = np.exp(1j * lam * params.work_quantum)
    r22 = rho[1, n, 1, n]
    r11 = rho[0, n + k, 0, n + k]
    r21 = rho[1, n, 0, n + k]        # <2,n| rho |1,n+k>
    r12 = rho[0, n + k, 1, n]        # <1,n+k| rho |2,n>
    a2, c2 = np.abs(a) ** 2, np.abs(c) ** 2
    blocks = ((a2 + c2 / e) * r22 + (a2 + c2 * e) * r11
              + np.conj(a) * c * (1 - 1 / e) * r12 + a * np.conj(c) * (e - 1) * r21)
    low = np.arange(min(k, N))
    out = blocks.sum(axis=-1) + rho[0, low, 0, low].sum()
    return complex(out) if np.ndim(out) == 0 else out


def product_density(mix: AtomMix, th: ThermalState) -> np.ndarray:
    """Dense ``(2, N, 2, N)`` array of the thermal product state."""
    N = th.n_max + 1
    rho = np.zeros((2, N, 2, N), dtype=complex)
    idx = np.arange(N)
    rho[0, idx, 0, idx] = mix.ground * th.probs
    rho[1, idx, 1, idx] = mix.excited * th.probs
    return rho


def average_work_vibronic(params: VibronicParams, mix: AtomMix, th: ThermalState, tau, g: float = 1.0):
    """Mean work; negative when the atom starts excited and is driven down."""
    lose, _, gain = _sum_weights(params, mix, th, tau, g)
    return params.work_quantum * (gain - lose)


def work_distribution_vibronic(params: VibronicParams, mix: AtomMix, th: ThermalState,
                               tau: float, g: float = 1.0) -> WorkDistribution:
    lose, stay, gain = _sum_weights(params, mix, th, float(tau), g)
    w = params.work_quantum
    return WorkDistribution.from_atoms([-w, 0.0, w], [lose, stay, gain])


# ---------------------------------------------------------------------------
# Full-model oracle
# ---------------------------------------------------------------------------

def _cos_position(eta: float, n_max: int, pad: int = 40) -> np.ndarray:
    """``cos(eta (a + a^dagger))`` on Fock states ``0..n_max`` via a padded eigenbasis."""
    dim = n_max + 1 + pad
    off = np.sqrt(np.arange(1, dim))
    x = np.diag(off, 1) + np.diag(off, -1)
    vals, vecs = np.linalg.eigh(x)
    c = (vecs * np.cos(eta * vals)) @ vecs.T
    return c[: n_max + 1, : n_max + 1]


def full_model_oracle(params: VibronicParams, n_max: int, mix: AtomMix, th: ThermalState,
                      tau, g: float = 1.0, leak_tol: float = 1e-6):
    """Populations ``(pop2, pop1)`` from the untruncated-sideband Hamiltonian.

    Works in the frame rotating with the laser on the atom only, where

        H = nu a^dagger a + (omega21 - omega_L) |2><2|
            + g |kappa| (|2><1| cos[eta (a + a^dagger)] + h.c.)

    is time independent on ``2 (n_max + 1)`` states, so the evolution is an
    exact exponential. All sidebands are kept; nothing is rotating-wave
    reduced. Raises :class:`NumericalContractError` if more than ``leak_tol``
    of the population reaches the two highest Fock levels.
    """
    if n_max > 40:
        raise ValueError("full_model_oracle is meant for n_max <= 40")
    if th.n_max > n_max:
        raise ValueError("thermal table is longer than the oracle truncation")
    D = n_max + 1
    nu = params.trap
    c = _cos_position(params.eta, n_max)
    h = np.zeros((2 * D, 2 * D))
    h[:D, :D] = np.diag(nu * np.arange(D))                    # |1, n>
    h[D:, D:] = np.diag(nu * np.arange(D) + params.omega21 - params.omega_laser)   # |2, n>
    h[D:, :D] = g * params.kappa * c
    h[:D, D:] = g * params.kappa * c.T
    vals, vecs = np.linalg.eigh(h)

    p0 = np.zeros(2 * D)
    p0[: th.n_max + 1] = mix.ground * th.probs
    p0[D: D + th.n_max + 1] = mix.excited * th.probs

    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    phases = np.exp(-1j * tau[:, None] * vals[None, :])           # (T, 2D)
    u = np.einsum("ia,ta,ja->tij", vecs, phases, vecs)            # real eigvecs
    probs = np.abs(u) ** 2 @ p0                                   # (T, 2D)
    top = probs[:, [D - 2, D - 1, 2 * D - 2, 2 * D - 1]].sum(axis=1)
    if np.any(top > leak_tol):
        raise NumericalContractError(f"Fock truncation leakage {top.max():.2e} exceeds {leak_tol:g}")
    return probs[:, D:].sum(axis=1), probs[:, :D].sum(axis=1)
