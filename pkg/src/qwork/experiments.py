"""Sweeps behind the command-line subcommands; each returns a :class:`SweepResult`."""
from __future__ import annotations

import numpy as np

from . import __version__
from . import twolevel as tl
from . import vibronic as vb
from . import workstats as ws
from .config import ConfigError, ExperimentConfig
from .io import SweepResult
from .numerics import auto_steps, propagate_grid, unitarity_error


def _metadata(cfg: ExperimentConfig, command: str, **diagnostics) -> dict:
    return {"command": command, "config": cfg.raw, "version": __version__,
            "diagnostics": diagnostics}


def _paths(cfg: ExperimentConfig):
    return {"rwa": [True], "full": [False], "both": [True, False]}[cfg.path]


def _rwa_propagators(cfg: ExperimentConfig) -> np.ndarray:
    p, sw = cfg.atom, cfg.switching
    if p.on_resonance:
        return tl.u_rwa(p, sw, cfg.times)
    # detuned: direct propagation of the RWA Hamiltonian
    steps = cfg.steps or auto_steps(cfg.times[-1], p.rabi * abs(sw.amplitude) + abs(p.detuning))
    grid = np.concatenate([[0.0], cfg.times])
    u = propagate_grid(tl.h_rotating(p, sw, rwa=True), grid, steps, sw.edges(0.0, grid[-1]))[1:]
    return tl.rotating_frame(p, cfg.times) @ u


def _full_propagators(cfg: ExperimentConfig, workers: int) -> tuple[np.ndarray, int]:
    p, sw = cfg.atom, cfg.switching
    steps = cfg.steps or auto_steps(cfg.times[-1], tl.full_rate(p, sw))
    return tl.u_full_grid(p, sw, cfg.times, steps, workers=workers), steps


def _propagators(cfg, rwa, workers):
    if rwa:
        return _rwa_propagators(cfg), 0
    return _full_propagators(cfg, workers)


def twolevel_populations(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    rows, diag = [], {}
    for rwa in _paths(cfg):
        u, steps = _propagators(cfg, rwa, workers)
        rho11, squared = tl.population_ground(tl.evolve_density(cfg.initial, u))
        rows.append(np.column_stack([cfg.times, rho11, squared, np.full_like(rho11, float(rwa))]))
        diag["rwa" if rwa else "full"] = {"steps": steps, "unitarity_error": unitarity_error(u)}
    return SweepResult(["t", "rho11", "paper_pop", "rwa_flag"], np.vstack(rows),
                       _metadata(cfg, "twolevel populations", **diag))


def twolevel_decoherency(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    p, sw = cfg.atom, cfg.switching
    closed, closed_flag = tl.clamp_log(tl.decoherency(p.rabi * np.asarray(sw.G(cfg.times))))
    rows, diag = [], {}
    for rwa in _paths(cfg):
        u, steps = _propagators(cfg, rwa, workers)
        gamma, flag = tl.clamp_log(tl.decoherency_from_density(tl.evolve_density(cfg.initial, u)))
        rows.append(np.column_stack([cfg.times, gamma, flag, closed, closed_flag,
                                     np.full_like(gamma, float(rwa))]))
        diag["rwa" if rwa else "full"] = {"steps": steps, "unitarity_error": unitarity_error(u)}
    return SweepResult(["t", "gamma", "gamma_clamped", "gamma_closed_form", "closed_form_clamped",
                        "rwa_flag"], np.vstack(rows), _metadata(cfg, "twolevel decoherency", **diag))


def _require_resonant(cfg: ExperimentConfig):
    if not cfg.atom.on_resonance:
        raise ConfigError("atom.omega_laser", "work statistics need omega_laser == omega0")


def _tpm_distributions(cfg: ExperimentConfig, u: np.ndarray):
    p, sw = cfg.atom, cfg.switching
    h0 = tl.h_bare(p)
    ht = tl.h_lab_full(p, sw, cfg.times)
    return [ws.tpm_distribution(h0, ht[i], u[i], cfg.initial.diagonal) for i in range(len(cfg.times))]


def twolevel_work(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    _require_resonant(cfg)
    p, sw, A = cfg.atom, cfg.switching, cfg.initial.A
    rows, diag = [], {}
    for rwa in _paths(cfg):
        if rwa:
            mom = [ws.work_moments_rwa(p, sw, t, A) for t in cfg.times]
        else:
            u, steps = _full_propagators(cfg, workers)
            mom = [d.moments() for d in _tpm_distributions(cfg, u)]
            diag["full"] = {"steps": steps, "unitarity_error": unitarity_error(u)}
        rows.append([(t, m.mean, m.second, m.std, float(rwa)) for t, m in zip(cfg.times, mom)])
    return SweepResult(["t", "avg_work", "second_moment", "delta_w", "rwa_flag"],
                       np.vstack([np.array(r) for r in rows]), _metadata(cfg, "twolevel work", **diag))


def twolevel_free_energy(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    _require_resonant(cfg)
    p, sw, A, beta = cfg.atom, cfg.switching, cfg.initial.A, cfg.beta
    rows, diag = [], {"beta": beta, "A": A}
    for rwa in _paths(cfg):
        if rwa:
            w = ws.average_work_rwa(p, sw, cfg.times, A)
            df = np.array([ws.delta_f_rwa(p, sw, t, A, beta) for t in cfg.times])
        else:
            u, steps = _full_propagators(cfg, workers)
            dists = _tpm_distributions(cfg, u)
            w = np.array([d.mean() for d in dists])
            df = np.array([ws.helmholtz_delta_f(d.characteristic, beta) for d in dists])
            diag["full"] = {"steps": steps, "unitarity_error": unitarity_error(u)}
        rows.append(np.column_stack([cfg.times, beta * w, beta * df, beta * (w - df),
                                     np.full_like(w, float(rwa))]))
    return SweepResult(["t", "beta_avg_work", "beta_delta_f", "beta_w_irr", "rwa_flag"],
                       np.vstack(rows), _metadata(cfg, "twolevel free-energy", **diag))


def _vibronic_setup(cfg: ExperimentConfig):
    th = vb.thermal_occupation(cfg.temperature, cfg.vibronic.trap, cfg.tail_tol)
    tau = cfg.times / cfg.vibronic.kappa
    diag = {"n_max": th.n_max, "tail_mass": th.tail_mass}
    return th, tau, diag


def vibronic_populations(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    th, tau, diag = _vibronic_setup(cfg)
    v, g = cfg.vibronic, cfg.g
    esp, _ = vb.populations(v, vb.ES, th, tau, g)
    _, gsp = vb.populations(v, vb.GS, th, tau, g)
    pop2, pop1 = vb.populations(v, cfg.mix, th, tau, g)
    diag["completeness_error"] = float(np.max(np.abs(pop1 + pop2 - 1.0)))
    return SweepResult(["kappa_tau", "ESP", "GSP", "pop2", "pop1"],
                       np.column_stack([cfg.times, esp, gsp, pop2, pop1]),
                       _metadata(cfg, "vibronic populations", **diag))


def vibronic_work(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Average work in units of ``omega21 - k nu``."""
    th, tau, diag = _vibronic_setup(cfg)
    v, g = cfg.vibronic, cfg.g
    scale = v.work_quantum
    if scale == 0:
        raise ConfigError("vibronic.omega21", "omega21 == k * trap leaves no work quantum to scale by")
    es = vb.average_work_vibronic(v, vb.ES, th, tau, g) / scale
    gs = vb.average_work_vibronic(v, vb.GS, th, tau, g) / scale
    mixed = vb.average_work_vibronic(v, cfg.mix, th, tau, g) / scale
    diag["work_quantum"] = scale
    return SweepResult(["kappa_tau", "avg_work_ES", "avg_work_GS", "avg_work"],
                       np.column_stack([cfg.times, es, gs, mixed]),
                       _metadata(cfg, "vibronic work", **diag))


def vibronic_distribution(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    th, tau, diag = _vibronic_setup(cfg)
    rows = []
    for kt, t in zip(cfg.times, tau):
        d = vb.work_distribution_vibronic(cfg.vibronic, cfg.mix, th, t, cfg.g)
        rows.extend((kt, w, p) for w, p in zip(d.work, d.weights))
    return SweepResult(["kappa_tau", "W", "weight"], np.array(rows, dtype=float).reshape(-1, 3),
                       _metadata(cfg, "vibronic distribution", **diag))


def vibronic_coefficients(cfg: ExperimentConfig, workers: int = 1) -> SweepResult:
    """Per-n block table at the last grid point."""
    th, tau, diag = _vibronic_setup(cfg)
    table = vb.coefficient_table(cfg.vibronic, th.n_max, tau[-1], cfg.g)
    diag["kappa_tau"] = float(cfg.times[-1])
    return SweepResult(["n", "omega_n", "gamma_n", "abs_a2", "abs_b2"], table.rows(),
                       _metadata(cfg, "vibronic coefficients", **diag))


COMMANDS = {
    ("twolevel", "populations"): twolevel_populations,
    ("twolevel", "decoherency"): twolevel_decoherency,
    ("twolevel", "work"): twolevel_work,
    ("twolevel", "free-energy"): twolevel_free_energy,
    ("vibronic", "populations"): vibronic_populations,
    ("vibronic", "work"): vibronic_work,
    ("vibronic", "distribution"): vibronic_distribution,
    ("vibronic", "coefficients"): vibronic_coefficients,
}
