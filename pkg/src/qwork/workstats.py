"""
Two-point-measurement work statistics
=====================================

Work is the difference between the outcomes of a projective energy
measurement at ``t = 0`` (bare Hamiltonian) and one at time ``t``. For a
finite system the work distribution is a finite set of weighted atoms and
its characteristic function ``ch(nu) = sum_j w_j exp(i nu W_j)``.

Two routes are provided:

* closed forms for the on-resonance RWA model, where the second measurement
  is made in the eigenbasis of :func:`h_effective` (eigenvalues
  ``(omega0 -+ alpha) / 2`` with ``alpha = sqrt(omega0^2 + 4 G^2 Omega^2)``);
* the general route :func:`tpm_distribution` / :func:`char_tpm` for any pair
  of Hamiltonians and any propagator.

Free energies follow from ``Delta F = -log(ch(i beta)) / beta``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import dagger, eig_hermitian_2x2
from .switching import SwitchingFunction
from .twolevel import (
    AtomParams,
    InitialDensity,
    _require_resonance,
    evolve_density,
    h_lab_rwa,
    u_rwa,
)

MERGE_TOL = 1e-9


class DegenerateSpectrumWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class WorkMoments:
    mean: float
    second: float

    @property
    def variance(self) -> float:
        return max(self.second - self.mean ** 2, 0.0)

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)


@dataclass(frozen=True)
class WorkDistribution:
    """Atoms of a discrete work distribution, sorted by work value."""

    work: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_atoms(cls, work, weights, merge_tol: float = MERGE_TOL) -> "WorkDistribution":
        """Sort, merge atoms closer than ``merge_tol`` and drop exact-zero weights."""
        work = np.asarray(work, dtype=float).ravel()
        weights = np.asarray(weights, dtype=float).ravel()
        if np.any(weights < -1e-12):
            raise ValueError("work distribution has negative weights")
        order = np.argsort(work, kind="stable")
        work, weights = work[order], weights[order]
        merged_w, merged_p = [], []
        for w, p in zip(work, weights):
            if merged_w and abs(w - merged_w[-1]) < merge_tol:
                merged_p[-1] += p
            else:
                merged_w.append(w)
                merged_p.append(p)
        merged_w, merged_p = np.array(merged_w), np.array(merged_p)
        keep = merged_p != 0.0
        return cls(merged_w[keep], merged_p[keep])

    def __len__(self):
        return len(self.work)

    @property
    def total(self) -> float:
        return float(self.weights.sum())

    def mean(self) -> float:
        return float(np.dot(self.weights, self.work))

    def moments(self) -> WorkMoments:
        return WorkMoments(self.mean(), float(np.dot(self.weights, self.work ** 2)))

    def characteristic(self, nu):
        """``sum_j w_j exp(i nu W_j)``; ``nu`` may be complex or an array."""
        nu = np.asarray(nu)
        out = np.exp(1j * nu[..., None] * self.work) @ self.weights
        return complex(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Closed-form RWA statistics
# ---------------------------------------------------------------------------

def effective_frequency(params: AtomParams, sw: SwitchingFunction, t):
    """``alpha = sqrt(omega0^2 + 4 G(t)^2 Omega^2)``."""
    gw = params.rabi * np.asarray(sw.G(t))
    return np.sqrt(params.omega0 ** 2 + 4.0 * gw ** 2)


def h_effective(params: AtomParams, sw: SwitchingFunction, t) -> np.ndarray:
    """Second-measurement Hamiltonian of the closed-form RWA statistics.

    It is the lab-frame RWA Hamiltonian with the instantaneous coupling
    ``g(t) Omega`` replaced by the pulse area ``G(t) Omega``.
    """
    t = np.asarray(t, dtype=float)
    c = -params.rabi * np.asarray(sw.G(t)) * np.exp(1j * (params.theta + params.omega_laser * t))
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    out[..., 0, 1] = c
    out[..., 1, 0] = np.conj(c)
    out[..., 1, 1] = params.omega0
    return out


def char_rwa(params: AtomParams, sw: SwitchingFunction, t, A: float, nu):
    """Closed-form characteristic function of work (complex ``nu`` allowed)."""
    _require_resonance(params, "char_rwa")
    w0 = params.omega0
    gw = params.rabi * np.asarray(sw.G(t))
    alpha = np.sqrt(w0 ** 2 + 4.0 * gw ** 2)
    nu = np.asarray(nu)
    sa, ca = np.sin(alpha * nu / 2), np.cos(alpha * nu / 2)
    sb, cb = np.sin(w0 * nu / 2), np.cos(w0 * nu / 2)
    x = w0 * np.cos(2 * gw) / alpha
    out = (1j * (1 - 2 * A) * x * sa * cb + x * sa * sb + ca * cb
           - 1j * (1 - 2 * A) * ca * sb)
    return complex(out) if np.ndim(out) == 0 else out


def average_work_rwa(params: AtomParams, sw: SwitchingFunction, t, A: float):
    """``<W> = (2A - 1) omega0 sin^2(G Omega)``; positive means absorbed by the atom."""
    _require_resonance(params, "average_work_rwa")
    out = (2 * A - 1) * params.omega0 * np.sin(params.rabi * np.asarray(sw.G(t))) ** 2
    return float(out) if np.ndim(out) == 0 else out


def work_moments_rwa(params: AtomParams, sw: SwitchingFunction, t, A: float) -> WorkMoments:
    _require_resonance(params, "work_moments_rwa")
    w0 = params.omega0
    gw = params.rabi * float(sw.G(t))
    alpha2 = w0 ** 2 + 4.0 * gw ** 2
    second = 0.25 * (alpha2 + w0 ** 2 - 2 * w0 ** 2 * math.cos(2 * gw))
    return WorkMoments(float(average_work_rwa(params, sw, t, A)), second)


def work_distribution_rwa(params: AtomParams, sw: SwitchingFunction, t, A: float) -> WorkDistribution:
    """Four atoms at ``-(a - w0)/2, (a + w0)/2, -(a + w0)/2, (a - w0)/2``."""
    _require_resonance(params, "work_distribution_rwa")
    w0 = params.omega0
    gw = params.rabi * float(sw.G(t))
    alpha = math.sqrt(w0 ** 2 + 4.0 * gw ** 2)
    x = w0 * math.cos(2 * gw) / alpha
    work = [-(alpha - w0) / 2, (alpha + w0) / 2, -(alpha + w0) / 2, (alpha - w0) / 2]
    weights = [A * (1 + x) / 2, A * (1 - x) / 2, (1 - A) * (1 - x) / 2, (1 - A) * (1 + x) / 2]
    return WorkDistribution.from_atoms(work, weights)


def internal_energy_change(params: AtomParams, sw: SwitchingFunction, t, rho0: InitialDensity):
    """``Tr[H(t) rho(t)] - Tr[H(0) rho(0)]`` along the RWA evolution."""
    t = np.asarray(t, dtype=float)
    rho_t = evolve_density(rho0, u_rwa(params, sw, t))
    e_t = np.trace(h_lab_rwa(params, sw, t) @ rho_t, axis1=-2, axis2=-1).real
    e_0 = np.trace(h_lab_rwa(params, sw, 0.0) @ rho0.matrix).real
    out = e_t - e_0
    return float(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------------------
# General two-point measurement
# ---------------------------------------------------------------------------

def _initial_populations(rho0, basis: np.ndarray) -> np.ndarray:
    rho = rho0.matrix if isinstance(rho0, InitialDensity) else np.asarray(rho0, dtype=complex)
    return np.einsum("ij,ik,kj->j", np.conj(basis), rho, basis).real


def tpm_distribution(h0: np.ndarray, ht: np.ndarray, u: np.ndarray, rho0) -> WorkDistribution:
    """Work atoms ``E_k(t) - E_j`` with weights ``p_j |<E_k(t)|U|E_j>|^2``.

    Only the populations of ``rho0`` in the eigenbasis of ``h0`` enter (the
    first measurement removes coherences).
    """
    e0 = eig_hermitian_2x2(h0)
    et = eig_hermitian_2x2(ht)
    if et.degenerate or e0.degenerate:
        warnings.warn("degenerate spectrum: TPM projectors are not unique", DegenerateSpectrumWarning)
    p = _initial_populations(rho0, e0.vectors)
    trans = np.abs(dagger(et.vectors) @ np.asarray(u) @ e0.vectors) ** 2    # [k, j]
    work = et.values[:, None] - e0.values[None, :]
    weights = trans * p[None, :]
    return WorkDistribution.from_atoms(work, weights)


def char_tpm(h0: np.ndarray, ht: np.ndarray, u: np.ndarray, rho0, nu):
    """Characteristic function of two-point-measurement work."""
    return tpm_distribution(h0, ht, u, rho0).characteristic(nu)


def average_work_tpm(h0: np.ndarray, ht: np.ndarray, u: np.ndarray, rho0) -> float:
    return tpm_distribution(h0, ht, u, rho0).mean()


# ---------------------------------------------------------------------------
# Free energy and Jarzynski
# ---------------------------------------------------------------------------

def helmholtz_delta_f(char: Callable[[complex], complex], beta: float) -> float:
    """``Delta F = -log(ch(i beta)) / beta`` for a characteristic-function callable."""
    if not beta > 0:
        raise ValueError("beta must be positive")
    ch = complex(char(1j * beta))
    if abs(ch.imag) > 1e-9 * max(1.0, abs(ch.real)) or not ch.real > 0:
        raise ValueError(f"ch(i beta) = {ch} is not a positive real number; inputs are inconsistent")
    return -math.log(ch.real) / beta


def delta_f_rwa(params: AtomParams, sw: SwitchingFunction, t, A: float, beta: float) -> float:
    """Closed-form RWA free-energy difference (hyperbolic form of ``ch(i beta)``)."""
    _require_resonance(params, "delta_f_rwa")
    w0 = params.omega0
    gw = params.rabi * float(sw.G(t))
    alpha = math.sqrt(w0 ** 2 + 4.0 * gw ** 2)
    ha, hb = alpha * beta / 2, w0 * beta / 2
    arg = (w0 * math.cos(2 * gw) * math.sinh(ha) * ((2 * A - 1) * math.cosh(hb) - math.sinh(hb)) / alpha
           + math.cosh(ha) * ((1 - 2 * A) * math.sinh(hb) + math.cosh(hb)))
    return -math.log(arg) / beta


def irreversible_work(avg_w: float, delta_f: float) -> float:
    return avg_w - delta_f
