from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from qwork.numerics import (
    NumericalContractError,
    auto_steps,
    chain_product,
    eig_hermitian_2x2,
    expm_hermitian,
    laguerre_assoc,
    laguerre_assoc_table,
    propagate,
    propagate_grid,
    unitarity_error,
)

finite = dict(allow_nan=False, allow_infinity=False)


def series_laguerre(n, k, x):
    """Exact rational evaluation of the explicit Laguerre sum."""
    fx = Fraction(x)
    return float(sum(Fraction(comb(n + k, n - j)) * (-fx) ** j / factorial(j) for j in range(n + 1)))


def hermitian(a, d, re, im):
    return np.array([[a, re - 1j * im], [re + 1j * im, d]])


hermitians = st.builds(hermitian, *(st.floats(-5, 5, **finite) for _ in range(4)))


# --- Laguerre ---------------------------------------------------------------

@pytest.mark.parametrize("n, k, x, expected", [
    (0, 2, 0.04, 1.0),
    (1, 2, 0.04, 2.96),
    (2, 0, 1.0, -0.5),
    (5, 3, 1.7, -2.341621416666666666),     # high-precision oracle
])
def test_laguerre_values(n, k, x, expected):
    assert laguerre_assoc(n, k, x) == pytest.approx(expected, rel=1e-13, abs=1e-15)


def test_laguerre_high_degree():
    # high-precision oracle for L_50^(10)(3.3)
    assert laguerre_assoc(50, 10, 3.3) == pytest.approx(1087448.358536071153, rel=1e-11)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 50), st.integers(0, 10), st.floats(0, 4, **finite))
def test_laguerre_matches_series(n, k, x):
    exact = series_laguerre(n, k, x)
    # relative to the largest table value: the recurrence error is set by it, not by the root
    scale = max(abs(exact), np.max(np.abs(laguerre_assoc_table(n, k, x))) * 1e-3, 1e-300)
    assert abs(laguerre_assoc(n, k, x) - exact) <= 1e-10 * scale


def test_laguerre_table_agrees_with_scalar():
    table = laguerre_assoc_table(20, 2, 0.04)
    assert [laguerre_assoc(n, 2, 0.04) for n in range(21)] == list(table)


@pytest.mark.parametrize("n, k", [(-1, 0), (0, -2)])
def test_laguerre_rejects_negative(n, k):
    with pytest.raises(ValueError):
        laguerre_assoc(n, k, 0.5)


def test_laguerre_rejects_bad_inputs():
    with pytest.raises(ValueError):
        laguerre_assoc(10_001, 0, 0.5)
    with pytest.raises(ValueError):
        laguerre_assoc(3, 0, float("nan"))


# --- eigendecomposition -----------------------------------------------------

def test_eig_diagonal():
    e = eig_hermitian_2x2(np.diag([0.0, 1.0]))
    assert np.allclose(e.values, [0, 1])
    assert np.allclose(e.vectors, np.eye(2))
    assert not e.degenerate


def test_eig_symmetric_coupling():
    e = eig_hermitian_2x2(np.array([[0, -0.3], [-0.3, 0]]))
    assert np.allclose(e.values, [-0.3, 0.3])


def test_eig_matches_characteristic_polynomial():
    # lab Hamiltonian at t = 0, Omega = 0.5, omega0 = 1: off-diagonal -2 Omega = -1
    h = np.array([[0, -1.0], [-1.0, 1.0]])
    roots = np.sort(np.roots([1, -np.trace(h).real, np.linalg.det(h).real]).real)
    e = eig_hermitian_2x2(h)
    assert np.allclose(e.values, roots, atol=1e-14)
    assert np.allclose(e.values, [(1 - 5 ** 0.5) / 2, (1 + 5 ** 0.5) / 2], atol=1e-14)


def test_eig_degenerate_returns_canonical_basis():
    e = eig_hermitian_2x2(0.7 * np.eye(2))
    assert e.degenerate
    assert np.array_equal(e.vectors, np.eye(2))


def test_eig_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_hermitian_2x2(np.array([[0, 1.0], [0.5, 0]]))


@settings(max_examples=200, deadline=None)
@given(hermitians)
def test_eig_reconstructs(h):
    e = eig_hermitian_2x2(h)
    v = e.vectors
    assert e.values[0] <= e.values[1]
    assert np.max(np.abs(v.conj().T @ v - np.eye(2))) < 1e-12
    assert np.max(np.abs(v @ np.diag(e.values) @ v.conj().T - h)) < 1e-11


# --- exponentials and propagation ---------------------------------------------

@settings(max_examples=100, deadline=None)
@given(hermitians, st.floats(-3, 3, **finite))
def test_expm_matches_scipy(h, dt):
    assert np.allclose(expm_hermitian(h, dt), scipy.linalg.expm(-1j * dt * h), atol=1e-12)


def test_chain_product_order():
    rng = np.random.default_rng(1)
    mats = rng.normal(size=(7, 2, 2)) + 1j * rng.normal(size=(7, 2, 2))
    expected = np.eye(2)
    for m in mats:
        expected = m @ expected
    assert np.allclose(chain_product(mats), expected)
    assert np.array_equal(chain_product(mats[:0]), np.eye(2))


def test_propagate_null_generator():
    u = propagate(lambda t: np.zeros(np.shape(t) + (2, 2)), 0.0, 1.0, 10)
    assert np.allclose(u, np.eye(2), atol=1e-15)


def test_propagate_constant_diagonal():
    w0 = 1.0
    u = propagate(lambda t: np.broadcast_to(np.diag([0.0, w0]), np.shape(t) + (2, 2)), 0.0, 1.0, 3)
    assert np.allclose(u, np.diag([1, np.exp(-1j * w0)]), atol=1e-14)


def _driven(t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    c = 0.7 * np.cos(3.0 * t) + 0.2j
    out[..., 0, 1] = c
    out[..., 1, 0] = np.conj(c)
    out[..., 1, 1] = 1.3
    return out


def test_propagate_unitary_and_second_order():
    ref = propagate(_driven, 0.0, 2.0, 40_000)
    errs = [np.max(np.abs(propagate(_driven, 0.0, 2.0, n) - ref)) for n in (50, 100, 200)]
    assert unitarity_error(ref) < 1e-10
    assert errs[0] / errs[1] >= 3 and errs[1] / errs[2] >= 3


def test_propagate_composition():
    u02 = propagate(_driven, 0.0, 2.0, 4000)
    u01 = propagate(_driven, 0.0, 1.0, 2000)
    u12 = propagate(_driven, 1.0, 2.0, 2000)
    assert np.allclose(u02, u12 @ u01, atol=1e-13)


def test_propagate_breakpoints_make_piecewise_constant_exact():
    def pulse(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (2, 2), dtype=complex)
        out[..., 0, 1] = out[..., 1, 0] = np.where(t < 0.37, 0.9, 0.0)
        return out
    u = propagate(pulse, 0.0, 1.0, 7, breakpoints=[0.37])
    expected = scipy.linalg.expm(-1j * 0.37 * np.array([[0, 0.9], [0.9, 0]]))
    assert np.allclose(u, expected, atol=1e-14)


def test_propagate_rejects_bad_arguments():
    with pytest.raises(ValueError):
        propagate(_driven, 1.0, 0.0, 10)
    with pytest.raises(ValueError):
        propagate(_driven, 0.0, 1.0, 0)
    with pytest.raises(NumericalContractError):
        propagate(lambda t: np.full(np.shape(t) + (2, 2), np.nan), 0.0, 1.0, 4)


@pytest.mark.parametrize("workers", [1, 3])
def test_propagate_grid_matches_individual_runs(workers):
    times = np.linspace(0, 2, 9)
    grid = propagate_grid(_driven, times, 4000, workers=workers)
    for t, u in zip(times[1:], grid[1:]):
        assert np.allclose(u, propagate(_driven, 0.0, t, int(round(4000 * t / 2))), atol=1e-12)
    assert np.array_equal(grid[0], np.eye(2))


def test_propagate_grid_thread_count_does_not_change_result():
    times = np.linspace(0, 2, 17)
    assert np.array_equal(propagate_grid(_driven, times, 3000, workers=1),
                          propagate_grid(_driven, times, 3000, workers=4))


def test_auto_steps():
    assert auto_steps(8.0, 3.0) == 2400
    assert auto_steps(0.0, 3.0) == 1
