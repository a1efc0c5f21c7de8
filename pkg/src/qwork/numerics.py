"""
Numerical kernels for two-level dynamics.

Everything here works on plain numpy arrays. A "2x2 matrix" is an array of
shape ``(2, 2)``; most kernels also accept stacks of shape ``(..., 2, 2)`` so
that whole time grids can be handled in one call.

Units: hbar = 1, energies are angular frequencies (rad/ps, i.e. "teraHz").
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, NamedTuple, Sequence

import numpy as np

HERMITIAN_TOL = 1e-10
DEGENERACY_GAP = 1e-12
UNITARITY_ABORT = 1e-8

HamiltonianProvider = Callable[[np.ndarray], np.ndarray]


class NumericalContractError(ArithmeticError):
    """A numerical guarantee (unitarity, finiteness, truncation) was violated."""


# ---------------------------------------------------------------------------
# Laguerre polynomials
# ---------------------------------------------------------------------------

def laguerre_assoc_table(n_max: int, k: int, x: float) -> np.ndarray:
    """Values ``L_0^(k)(x) ... L_{n_max}^(k)(x)`` from the three-term recurrence.

    ``m L_m = (2m - 1 + k - x) L_{m-1} - (m - 1 + k) L_{m-2}``
    """
    n_max = int(n_max)
    k = int(k)
    if n_max < 0 or k < 0:
        raise ValueError(f"Laguerre degree and order must be non-negative, got n={n_max}, k={k}")
    if not np.isfinite(x):
        raise ValueError("Laguerre argument must be finite")
    out = np.empty(n_max + 1)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + k - x
    for m in range(2, n_max + 1):
        out[m] = ((2 * m - 1 + k - x) * out[m - 1] - (m - 1 + k) * out[m - 2]) / m
    return out


def laguerre_assoc(n: int, k: int, x: float) -> float:
    """Associated Laguerre polynomial ``L_n^(k)(x)``."""
    if n < 0 or k < 0:
        raise ValueError(f"Laguerre degree and order must be non-negative, got n={n}, k={k}")
    if n > 10_000:
        raise ValueError("Laguerre degree above 10^4 is not supported")
    return float(laguerre_assoc_table(n, k, x)[n])


# ---------------------------------------------------------------------------
# 2x2 linear algebra
# ---------------------------------------------------------------------------

def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(m, -1, -2))


def hermitian_asymmetry(h: np.ndarray) -> float:
    h = np.asarray(h)
    return float(np.max(np.abs(h - dagger(h)))) if h.size else 0.0


def as_hermitian(h: np.ndarray) -> np.ndarray:
    """Validate and symmetrize: lower triangle mirrored, diagonal made real."""
    h = np.asarray(h, dtype=complex)
    if h.shape[-2:] != (2, 2):
        raise ValueError(f"expected (..., 2, 2) array, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise NumericalContractError("non-finite Hamiltonian entries")
    if hermitian_asymmetry(h) > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (asymmetry {hermitian_asymmetry(h):.3e})")
    out = h.copy()
    out[..., 0, 0] = h[..., 0, 0].real
    out[..., 1, 1] = h[..., 1, 1].real
    out[..., 0, 1] = np.conj(h[..., 1, 0])
    return out


def unitarity_error(u: np.ndarray) -> float:
    """Largest entrywise deviation of ``U^dagger U`` from the identity."""
    u = np.asarray(u)
    return float(np.max(np.abs(dagger(u) @ u - np.eye(u.shape[-1]))))


class EigenPair2(NamedTuple):
    """Ascending eigenvalues and column eigenvectors of a Hermitian 2x2 matrix."""

    values: np.ndarray      # shape (2,), real
    vectors: np.ndarray     # shape (2, 2), column j is the eigenvector of values[j]
    degenerate: bool


def _fix_gauge(v: np.ndarray) -> np.ndarray:
    # make the largest-magnitude component of each column real and positive
    idx = np.argmax(np.abs(v), axis=0)
    pivot = v[idx, np.arange(v.shape[1])]
    return v * (np.abs(pivot) / pivot)


def eig_hermitian_2x2(h: np.ndarray) -> EigenPair2:
    """Closed-form eigendecomposition of a Hermitian 2x2 matrix.

    A degenerate spectrum (gap below 1e-12) returns the canonical basis with
    ``degenerate=True``.
    """
    h = as_hermitian(h)
    if h.shape != (2, 2):
        raise ValueError("eig_hermitian_2x2 takes a single 2x2 matrix")
    a, d = h[0, 0].real, h[1, 1].real
    b = h[0, 1]
    mean = 0.5 * (a + d)
    hz = 0.5 * (a - d)
    r = float(np.hypot(hz, abs(b)))
    if 2.0 * r < DEGENERACY_GAP:
        return EigenPair2(np.array([mean, mean]), np.eye(2, dtype=complex), True)

    # Pauli form: h = mean + hx sx + hy sy + hz sz with b = hx - i hy
    cos_pol = np.clip(hz / r, -1.0, 1.0)
    c = np.sqrt(0.5 * (1.0 + cos_pol))
    s = np.sqrt(0.5 * (1.0 - cos_pol))
    phase = np.exp(-1j * np.angle(b))          # conj(b) / abs(b) without subnormal overflow
    upper = np.array([c, phase * s])
    lower = np.array([-np.conj(phase) * s, c])
    # for b == 0 the formulas above still give an orthonormal pair
    vecs = _fix_gauge(np.column_stack([lower, upper]).astype(complex))
    return EigenPair2(np.array([mean - r, mean + r]), vecs, False)


def expm_hermitian(h: np.ndarray, dt) -> np.ndarray:
    """``exp(-i dt H)`` for a stack of Hermitian 2x2 matrices, in closed form."""
    h = np.asarray(h, dtype=complex)
    dt = np.asarray(dt, dtype=float)
    a = h[..., 0, 0].real
    d = h[..., 1, 1].real
    b = h[..., 0, 1]
    mean = 0.5 * (a + d)
    hz = 0.5 * (a - d)
    r = np.sqrt(hz * hz + (b * np.conj(b)).real)
    x = r * dt
    cos_x = np.cos(x)
    sinc = dt * np.sinc(x / np.pi)          # sin(r dt) / r, finite at r = 0
    phase = np.exp(-1j * mean * dt)
    out = np.empty(np.broadcast(a, dt).shape + (2, 2), dtype=complex)
    out[..., 0, 0] = phase * (cos_x - 1j * sinc * hz)
    out[..., 1, 1] = phase * (cos_x + 1j * sinc * hz)
    out[..., 0, 1] = phase * (-1j * sinc * b)
    out[..., 1, 0] = phase * (-1j * sinc * np.conj(b))
    return out


def chain_product(mats: np.ndarray) -> np.ndarray:
    """Time-ordered product ``M[N-1] @ ... @ M[1] @ M[0]`` by pairwise reduction."""
    mats = np.asarray(mats)
    if mats.shape[0] == 0:
        return np.eye(mats.shape[-1], dtype=complex)
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            mats = np.concatenate([mats, np.eye(mats.shape[-1], dtype=mats.dtype)[None]])
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


# ---------------------------------------------------------------------------
# Time-ordered propagation
# ---------------------------------------------------------------------------

def _segments(t0: float, t1: float, breakpoints: Sequence[float]) -> np.ndarray:
    inner = [b for b in np.asarray(breakpoints, dtype=float).ravel() if t0 < b < t1]
    return np.unique(np.concatenate([[t0], inner, [t1]]))


def _allocate(lengths: np.ndarray, steps: int) -> np.ndarray:
    total = lengths.sum()
    if total == 0:
        return np.zeros(len(lengths), dtype=int)
    return np.maximum(1, np.rint(steps * lengths / total)).astype(int)


def _propagate_interval(h_of_t: HamiltonianProvider, a: float, b: float, n: int) -> np.ndarray:
    if n == 0 or b == a:
        return np.eye(2, dtype=complex)
    dt = (b - a) / n
    mids = a + dt * (np.arange(n) + 0.5)
    h = np.asarray(h_of_t(mids), dtype=complex)
    if not np.all(np.isfinite(h)):
        raise NumericalContractError("non-finite Hamiltonian entries during propagation")
    return chain_product(expm_hermitian(h, dt))


def propagate(h_of_t: HamiltonianProvider, t0: float, t1: float, steps: int,
              breakpoints: Sequence[float] = ()) -> np.ndarray:
    """Time-ordered propagator from ``t0`` to ``t1``.

    Each step uses the exact exponential of the Hamiltonian sampled at the
    step midpoint (second order). ``h_of_t`` maps an array of times to an
    array of shape ``(len(t), 2, 2)``. Step boundaries are aligned with any
    ``breakpoints`` inside the interval; ``steps`` is shared out between the
    pieces in proportion to their length.
    """
    if t1 < t0:
        raise ValueError("propagate requires t1 >= t0")
    if steps < 1:
        raise ValueError("propagate requires steps >= 1")
    edges = _segments(t0, t1, breakpoints)
    counts = _allocate(np.diff(edges), steps)
    u = np.eye(2, dtype=complex)
    for a, b, n in zip(edges[:-1], edges[1:], counts):
        u = _propagate_interval(h_of_t, a, b, n) @ u
    err = unitarity_error(u)
    if err > UNITARITY_ABORT:
        raise NumericalContractError(f"propagator non-unitary by {err:.3e}")
    return u


def propagate_grid(h_of_t: HamiltonianProvider, times: Sequence[float], steps: int,
                   breakpoints: Sequence[float] = (), workers: int = 1) -> np.ndarray:
    """Propagators ``U(t_i, t_0)`` for every point of an ascending time grid.

    ``steps`` is the total step budget over ``[t_0, t_last]``. Segments
    between grid points are independent and may be computed by ``workers``
    threads; the cumulative product is then formed in grid order.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("time grid must be a non-empty 1-D sequence")
    if np.any(np.diff(times) < 0):
        raise ValueError("time grid must be ascending")
    span = times[-1] - times[0]
    edges = _segments(times[0], times[-1], np.concatenate([times, np.asarray(breakpoints, float).ravel()]))
    counts = _allocate(np.diff(edges), max(int(steps), 1)) if span > 0 else np.zeros(0, int)
    jobs = list(zip(edges[:-1], edges[1:], counts))

    def run(job):
        return _propagate_interval(h_of_t, *job)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(run, jobs))
    else:
        pieces = [run(j) for j in jobs]

    # cumulative products at the edges, then pick out the grid points
    cum = np.empty((len(edges), 2, 2), dtype=complex)
    cum[0] = np.eye(2)
    for i, p in enumerate(pieces):
        cum[i + 1] = p @ cum[i]
    idx = np.searchsorted(edges, times)
    out = cum[idx]
    err = unitarity_error(out)
    if err > UNITARITY_ABORT:
        raise NumericalContractError(f"propagator non-unitary by {err:.3e}")
    return out


def auto_steps(span: float, rate: float, target: float = 0.01) -> int:
    """Step count keeping ``dt * rate`` below ``target``."""
    return max(1, int(np.ceil(abs(span) * abs(rate) / target)))
