import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwork import twolevel as tl
from qwork import workstats as ws
from qwork.switching import SwitchingFunction
from qwork.units import beta_from_kelvin

SW = SwitchingFunction()
P = tl.AtomParams()
PULSE = SwitchingFunction.constant(10.0)          # G(t) = t for t <= 10


def params_for_area(w0=1.0, theta=0.0):
    # with the constant pulse G(1) = 1, so rabi is the pulse area G Omega at t = 1
    return lambda gw: tl.AtomParams(w0, w0, gw, theta)


def brute_force_char(h0, ht, u, p0, nu):
    """Double sum over outcome pairs, straight from the definition."""
    e0, v0 = np.linalg.eigh(h0)
    et, vt = np.linalg.eigh(ht)
    total = 0j
    for j in range(2):
        for k in range(2):
            amp = vt[:, k].conj() @ u @ v0[:, j]
            total += p0[j] * abs(amp) ** 2 * np.exp(1j * nu * (et[k] - e0[j]))
    return total


random_u = st.tuples(*(st.floats(-math.pi, math.pi) for _ in range(3))).map(
    lambda a: np.array([[np.cos(a[0]) * np.exp(1j * a[1]), np.sin(a[0]) * np.exp(1j * a[2])],
                        [-np.sin(a[0]) * np.exp(-1j * a[2]), np.cos(a[0]) * np.exp(-1j * a[1])]]))


# --- distribution container -------------------------------------------------

def test_from_atoms_merges_sorts_and_prunes():
    d = ws.WorkDistribution.from_atoms([0.5, -1.0, 0.5 + 1e-12, 3.0], [0.2, 0.3, 0.5, 0.0])
    assert list(d.work) == [-1.0, 0.5]
    assert list(d.weights) == [0.3, pytest.approx(0.7)]


def test_from_atoms_rejects_negative_weights():
    with pytest.raises(ValueError):
        ws.WorkDistribution.from_atoms([0.0], [-0.1])


def test_moments_container():
    m = ws.WorkMoments(0.5, 0.5)
    assert m.variance == pytest.approx(0.25) and m.std == pytest.approx(0.5)


# --- closed-form RWA statistics --------------------------------------------------

def test_char_rwa_normalization_and_no_protocol():
    nu = np.linspace(-10, 10, 41)
    assert ws.char_rwa(P, SW, 3.1, 0.3, 0.0) == 1.0
    assert np.allclose(ws.char_rwa(P, SW, 0.0, 0.3, nu), 1.0, atol=1e-15)


def test_char_rwa_full_inversion_atoms():
    # A = 1, G Omega = pi/2, omega0 = 1: alpha = sqrt(1 + pi^2), two atoms
    p = params_for_area()(math.pi / 2)
    alpha = math.sqrt(1 + math.pi ** 2)
    x = -1 / alpha
    nu = np.linspace(-6, 6, 25)
    oracle = (0.5 * (1 + x) * np.exp(-0.5j * nu * (alpha - 1))
              + 0.5 * (1 - x) * np.exp(0.5j * nu * (alpha + 1)))
    assert np.allclose(ws.char_rwa(p, PULSE, 1.0, 1.0, nu), oracle, atol=1e-14)


def test_char_rwa_rejects_detuning():
    with pytest.raises(ValueError):
        ws.char_rwa(tl.AtomParams(omega_laser=0.9), SW, 1.0, 1.0, 0.5)


@settings(max_examples=60)
@given(st.floats(0.1, 4), st.floats(0, 2), st.floats(0, 1), st.floats(0, 8))
def test_char_rwa_properties(w0, rabi, A, t):
    p = tl.AtomParams(w0, w0, rabi)
    nu = np.linspace(-10, 10, 101)
    ch = ws.char_rwa(p, SW, t, A, nu)
    assert np.all(np.abs(ch) <= 1 + 1e-12)
    assert np.allclose(ws.char_rwa(p, SW, t, A, -nu), np.conj(ch), atol=1e-12)
    d = ws.work_distribution_rwa(p, SW, t, A)
    assert np.allclose(d.characteristic(nu), ch, atol=1e-10)


@pytest.mark.parametrize("A, gw, expected", [(1.0, math.pi / 2, 1.0), (0.0, math.pi / 4, -0.5)])
def test_average_work_examples(A, gw, expected):
    assert ws.average_work_rwa(params_for_area()(gw), PULSE, 1.0, A) == pytest.approx(expected, abs=1e-15)


def test_average_work_maximally_mixed():
    assert np.all(ws.average_work_rwa(P, SW, np.linspace(0, 8, 30), 0.5) == 0)


def test_work_moments_examples():
    m = ws.work_moments_rwa(P, SW, 0.0, 0.8)
    assert m.second == 0 and m.std == 0
    m = ws.work_moments_rwa(P, SW, 3.3, 0.5)
    assert m.variance == pytest.approx(m.second)


def test_work_distribution_rwa_structure():
    p = params_for_area()(0.7)
    alpha = math.sqrt(1 + 4 * 0.49)
    d = ws.work_distribution_rwa(p, PULSE, 1.0, 0.6)
    assert np.allclose(np.sort(d.work), np.sort([-(alpha - 1) / 2, (alpha + 1) / 2,
                                                 -(alpha + 1) / 2, (alpha - 1) / 2]))
    assert d.total == pytest.approx(1, abs=1e-15)
    single = ws.work_distribution_rwa(P, SW, 0.0, 0.6)
    assert list(single.work) == [0.0] and list(single.weights) == [pytest.approx(1.0)]


def test_fourier_duality_random_nu():
    rng = np.random.default_rng(11)
    for _ in range(5):
        w0 = rng.uniform(0.2, 3)
        p = tl.AtomParams(w0, w0, rng.uniform(0, 2))
        t, A = rng.uniform(0, 8), rng.uniform(0, 1)
        nu = rng.uniform(-20, 20, 100)
        d = ws.work_distribution_rwa(p, SW, t, A)
        assert np.max(np.abs(d.characteristic(nu) - ws.char_rwa(p, SW, t, A, nu))) < 1e-10


def test_rwa_statistics_are_tpm_with_effective_hamiltonian():
    # the closed forms are two-point measurements against h_effective
    rng = np.random.default_rng(12)
    for _ in range(10):
        w0 = rng.uniform(0.3, 3)
        p = tl.AtomParams(w0, w0, rng.uniform(0.05, 2), rng.uniform(-3, 3))
        t, A = rng.uniform(0.01, 8), rng.uniform(0, 1)
        nu = np.linspace(-5, 5, 11)
        tpm = ws.char_tpm(tl.h_bare(p), ws.h_effective(p, SW, t), tl.u_rwa(p, SW, t), tl.InitialDensity(A), nu)
        assert np.allclose(tpm, ws.char_rwa(p, SW, t, A, nu), atol=1e-12)


def test_effective_frequency_bound():
    alpha = ws.effective_frequency(P, SW, np.linspace(0, 8, 50))
    assert np.all(alpha >= P.omega0)


# --- internal energy ----------------------------------------------------------

def test_internal_energy_examples():
    t = np.linspace(0, 8, 50)
    assert ws.internal_energy_change(P, SW, 0.0, tl.InitialDensity(0.7)) == pytest.approx(0, abs=1e-15)
    assert np.allclose(ws.internal_energy_change(P, SW, t, tl.InitialDensity(0.5)), 0, atol=1e-15)
    assert np.allclose(ws.internal_energy_change(P, SW, t, tl.InitialDensity(1.0)),
                       ws.average_work_rwa(P, SW, t, 1.0), atol=1e-10)


def test_internal_energy_sees_initial_coherence():
    # coherences carry interaction energy at t = 0 (g(0) = 1), which the two-point work erases
    t = np.linspace(0.5, 8, 20)
    du = ws.internal_energy_change(P, SW, t, tl.InitialDensity(0.6, 0.3))
    assert np.max(np.abs(du - ws.average_work_rwa(P, SW, t, 0.6))) > 1e-2


# --- general two-point measurement ------------------------------------------------

def test_char_tpm_trivial():
    h0 = tl.h_bare(P)
    assert np.allclose(ws.char_tpm(h0, h0, np.eye(2), tl.InitialDensity(0.3), np.linspace(-5, 5, 9)), 1)
    assert ws.average_work_tpm(h0, h0, np.eye(2), tl.InitialDensity(0.3)) == 0


@settings(max_examples=60)
@given(random_u, st.floats(0, 1), st.floats(-10, 10), st.floats(0.1, 3))
def test_char_tpm_matches_brute_force(u, A, nu, w0):
    h0 = np.diag([0.0, w0])
    assert ws.char_tpm(h0, h0, u, tl.InitialDensity(A), nu) == pytest.approx(
        brute_force_char(h0, h0, u, [A, 1 - A], nu), abs=1e-12)


@settings(max_examples=40)
@given(random_u, st.floats(0, 1), st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3))
def test_char_tpm_general_ht(u, A, re, im, w0):
    h0 = np.diag([0.0, w0])
    ht = np.array([[0.3, re - 1j * im], [re + 1j * im, w0]])
    nu = 1.7
    assert ws.char_tpm(h0, ht, u, tl.InitialDensity(A), nu) == pytest.approx(
        brute_force_char(h0, ht, u, [A, 1 - A], nu), abs=1e-12)


@settings(max_examples=40)
@given(random_u, st.floats(0, 1), st.floats(-2, 2), st.floats(0.1, 3))
def test_average_work_tpm_is_derivative(u, A, re, w0):
    h0 = np.diag([0.0, w0])
    ht = np.array([[0.1, re], [re, 1.4 * w0]])
    rho = tl.InitialDensity(A)
    h = 1e-5
    fd = (ws.char_tpm(h0, ht, u, rho, h) - ws.char_tpm(h0, ht, u, rho, -h)) / (2j * h)
    exact = ws.average_work_tpm(h0, ht, u, rho)
    assert abs(fd.real - exact) <= 1e-6 * max(1.0, abs(exact))


def test_char_tpm_rwa_regime():
    p = tl.AtomParams(omega0=500.0, omega_laser=500.0, rabi=0.5)
    t = 8.0                      # g(8) = 0: the second measurement is of the bare atom
    u = tl.u_full(p, SW, t)
    nu = np.linspace(-10, 10, 81)
    tpm = ws.char_tpm(tl.h_bare(p), tl.h_lab_full(p, SW, t), u, tl.InitialDensity(1.0), nu)
    rwa = ws.char_tpm(tl.h_bare(p), tl.h_bare(p), tl.u_rwa(p, SW, t), tl.InitialDensity(1.0), nu)
    assert np.max(np.abs(tpm - rwa)) < 1e-3
    w_full = ws.average_work_tpm(tl.h_bare(p), tl.h_lab_full(p, SW, t), u, tl.InitialDensity(1.0))
    assert w_full == pytest.approx(500.0 * math.sin(2.0) ** 2, rel=1e-3)


def test_char_tpm_matches_char_rwa_in_rwa_regime():
    p = tl.AtomParams(omega0=500.0, omega_laser=500.0, rabi=0.5)
    t = 3.4
    nu = np.linspace(-10, 10, 81)
    tpm = ws.char_tpm(tl.h_bare(p), ws.h_effective(p, SW, t), tl.u_full(p, SW, t), tl.InitialDensity(0.8), nu)
    assert np.max(np.abs(tpm - ws.char_rwa(p, SW, t, 0.8, nu))) < 1e-3


def test_degenerate_spectrum_warns():
    with pytest.warns(ws.DegenerateSpectrumWarning):
        ws.tpm_distribution(np.diag([0.0, 1.0]), np.eye(2), np.eye(2), tl.InitialDensity(1.0))


# --- free energy ------------------------------------------------------------------

def test_delta_f_zero_without_protocol():
    beta = beta_from_kelvin(10)
    assert ws.delta_f_rwa(P, SW, 0.0, 0.7, beta) == pytest.approx(0, abs=1e-15)
    assert ws.irreversible_work(ws.average_work_rwa(P, SW, 0.0, 0.7), ws.delta_f_rwa(P, SW, 0.0, 0.7, beta)) \
        == pytest.approx(0, abs=1e-15)


@pytest.mark.parametrize("T", [5.0, 10.0, 30.0, 300.0])
def test_jarzynski_equality_cyclic(T):
    beta = beta_from_kelvin(T)
    rho0 = tl.InitialDensity.thermal(beta, P.omega0)
    u = tl.u_full(P, SW, SW.duration)
    ch = ws.char_tpm(tl.h_bare(P), tl.h_lab_full(P, SW, SW.duration), u, rho0, 1j * beta)
    assert abs(ch - 1) < 1e-9
    assert ws.helmholtz_delta_f(lambda nu: ws.char_tpm(tl.h_bare(P), tl.h_bare(P), u, rho0, nu),
                                beta) == pytest.approx(0, abs=1e-9)


def test_thermal_closed_form_free_energy():
    # for a thermal start the closed form reduces to a ratio of partition functions
    beta = beta_from_kelvin(10)
    A = tl.InitialDensity.thermal(beta, P.omega0).A
    for t in np.linspace(0, 8, 9):
        alpha = float(ws.effective_frequency(P, SW, t))
        expected = -math.log(math.cosh(beta * alpha / 2) / math.cosh(beta * P.omega0 / 2)) / beta
        assert ws.delta_f_rwa(P, SW, t, A, beta) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=100)
@given(st.floats(0.2, 3), st.floats(0, 2), st.floats(5, 300), st.floats(0, 8))
def test_irreversible_work_nonnegative_thermal(w0, rabi, T, t):
    p = tl.AtomParams(w0, w0, rabi)
    beta = beta_from_kelvin(T)
    A = tl.InitialDensity.thermal(beta, w0).A
    w_irr = ws.irreversible_work(ws.average_work_rwa(p, SW, t, A), ws.delta_f_rwa(p, SW, t, A, beta))
    assert w_irr >= -1e-10


def test_ground_state_curve_ordering():
    beta = beta_from_kelvin(10)
    t = np.linspace(0, 8, 81)
    w = ws.average_work_rwa(P, SW, t, 1.0)
    df = np.array([ws.delta_f_rwa(P, SW, x, 1.0, beta) for x in t])
    assert np.all(beta * w >= beta * df - 1e-12)


def test_helmholtz_rejects_bad_input():
    with pytest.raises(ValueError):
        ws.helmholtz_delta_f(lambda nu: 1.0, 0.0)
    with pytest.raises(ValueError):
        ws.helmholtz_delta_f(lambda nu: -0.5, 1.0)
