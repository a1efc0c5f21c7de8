"""
Experiment configuration: TOML files, dotted-key overrides and named profiles.

A complete annotated example lives in ``configs/example.toml``.
"""
from __future__ import annotations

import copy
import sys
from dataclasses import dataclass


import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .switching import SwitchingFunction
from .twolevel import AtomParams, InitialDensity
from .units import beta_from_kelvin
from .vibronic import AtomMix, VibronicParams


class ConfigError(ValueError):
    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


DEFAULTS: dict = {
    "model": "",
    "temperature": 10.0,
    "atom": {"omega0": 1.0, "omega_laser": 1.0, "rabi": 0.5, "theta": 0.0},
    "switching": {"period": 2.0, "on_fraction": 0.5, "duration": 8.0, "amplitude": 1.0},
    "initial": {"A": 1.0, "xi_re": 0.0, "xi_im": 0.0, "thermal": False},
    "grid": {"t_start": 0.0, "t_end": 8.0, "points": 401},
    "twolevel": {"path": "both"},
    "vibronic": {
        "trap": 2.0,
        "omega21": 10.0,
        "kappa": 0.1,
        "eta": 0.2,
        "sideband": 2,
        "detuning_over_kappa": 0.005,
        "theta": 0.0,
        "g": 1.0,
        "excited": 0.0,
        "ground": 1.0,
        "tail_tol": 1e-10,
    },
    "numerics": {"steps": "auto"},
    "output": {"path": "", "format": "csv"},
}

ALIASES = {"T": "temperature"}

_VIBRONIC_GRID = {"grid": {"t_start": 0.0, "t_end": 3000.0, "points": 1501}}

#: figure presets, each with the command that reproduces the figure
PROFILES: dict[str, dict] = {
    "fig2": {"command": "twolevel populations", "config": {"model": "twolevel"}},
    "fig3": {"command": "twolevel decoherency", "config": {"model": "twolevel"}},
    "fig4": {"command": "twolevel free-energy", "config": {"model": "twolevel", "temperature": 10.0}},
    "fig5": {"command": "vibronic populations",
             "config": {"model": "vibronic", "temperature": 30.0, **_VIBRONIC_GRID}},
    "fig6": {"command": "vibronic work",
             "config": {"model": "vibronic", "temperature": 30.0, **_VIBRONIC_GRID}},
}


def _merge(base: dict, update: dict, prefix: str = "") -> dict:
    for key, value in update.items():
        path = f"{prefix}{key}"
        if key not in base:
            raise ConfigError(path, "unknown configuration key")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigError(path, "expected a table")
            _merge(base[key], value, path + ".")
        else:
            base[key] = value
    return base


def _parse_value(text: str):
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def parse_override(item: str) -> tuple[str, object]:
    key, sep, value = item.partition("=")
    if not sep or not key.strip():
        raise ConfigError(item, "override must look like key=value")
    key = key.strip()
    return ALIASES.get(key, key), _parse_value(value.strip())


def _set_dotted(cfg: dict, key: str, value):
    node = cfg
    parts = key.split(".")
    for i, part in enumerate(parts[:-1]):
        if not isinstance(node.get(part), dict):
            raise ConfigError(".".join(parts[: i + 1]), "unknown configuration section")
        node = node[part]
    if parts[-1] not in node or isinstance(node[parts[-1]], dict):
        raise ConfigError(key, "unknown configuration key")
    node[parts[-1]] = value


def resolve(path=None, overrides=(), profile: str | None = None) -> dict:
    """Defaults, then profile, then file, then overrides."""
    cfg = copy.deepcopy(DEFAULTS)
    if profile:
        if profile not in PROFILES:
            raise ConfigError("profile", f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
        _merge(cfg, copy.deepcopy(PROFILES[profile]["config"]))
    if path:
        try:
            with open(path, "rb") as fh:
                data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(str(path), f"invalid TOML: {exc}") from None
        _merge(cfg, data)
    for item in overrides:
        _set_dotted(cfg, *parse_override(item))
    return cfg


def _num(cfg: dict, key: str, kind=float):
    node = cfg
    for part in key.split("."):
        node = node[part]
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        raise ConfigError(key, f"expected a number, got {node!r}")
    if kind is int:
        if int(node) != node:
            raise ConfigError(key, "expected an integer")
        return int(node)
    value = float(node)
    if not np.isfinite(value):
        raise ConfigError(key, "must be finite")
    return value


@dataclass(frozen=True)
class ExperimentConfig:
    raw: dict
    model: str
    atom: AtomParams
    switching: SwitchingFunction
    initial: InitialDensity
    temperature: float
    times: np.ndarray
    path: str
    vibronic: VibronicParams
    mix: AtomMix
    g: float
    tail_tol: float
    steps: int | None
    out_path: str
    out_format: str

    @property
    def beta(self) -> float:
        return beta_from_kelvin(self.temperature)


def build(cfg: dict) -> ExperimentConfig:
    """Validate a resolved configuration dictionary."""
    model = cfg["model"]
    if model not in ("", "twolevel", "vibronic"):
        raise ConfigError("model", "must be 'twolevel' or 'vibronic'")

    def wrap(section, fn):
        try:
            return fn()
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(section, str(exc)) from None

    temperature = _num(cfg, "temperature")
    if not temperature > 0:
        raise ConfigError("temperature", "must be positive (kelvin)")

    atom = wrap("atom", lambda: AtomParams(**{k: _num(cfg, f"atom.{k}") for k in cfg["atom"]}))
    sw = wrap("switching", lambda: SwitchingFunction(**{k: _num(cfg, f"switching.{k}") for k in cfg["switching"]}))

    thermal = cfg["initial"]["thermal"]
    if not isinstance(thermal, bool):
        raise ConfigError("initial.thermal", "expected true or false")
    if thermal:
        initial = InitialDensity.thermal(beta_from_kelvin(temperature), atom.omega0)
    else:
        xi = complex(_num(cfg, "initial.xi_re"), _num(cfg, "initial.xi_im"))
        initial = wrap("initial", lambda: InitialDensity(_num(cfg, "initial.A"), xi))

    t0, t1 = _num(cfg, "grid.t_start"), _num(cfg, "grid.t_end")
    points = _num(cfg, "grid.points", int)
    if points < 1:
        raise ConfigError("grid.points", "must be at least 1")
    if t0 < 0:
        raise ConfigError("grid.t_start", "must be non-negative")
    if t1 < t0:
        raise ConfigError("grid.t_end", "must not be below grid.t_start")
    times = np.linspace(t0, t1, points)

    path = cfg["twolevel"]["path"]
    if path not in ("rwa", "full", "both"):
        raise ConfigError("twolevel.path", "must be 'rwa', 'full' or 'both'")

    v = cfg["vibronic"]
    kappa = _num(cfg, "vibronic.kappa")
    vib = wrap("vibronic", lambda: VibronicParams(
        trap=_num(cfg, "vibronic.trap"),
        omega21=_num(cfg, "vibronic.omega21"),
        kappa=kappa,
        eta=_num(cfg, "vibronic.eta"),
        sideband=_num(cfg, "vibronic.sideband", int),
        detuning=_num(cfg, "vibronic.detuning_over_kappa") * kappa,
        theta=_num(cfg, "vibronic.theta"),
    ))
    if not kappa > 0:
        raise ConfigError("vibronic.kappa", "must be positive (time axis is kappa * tau)")
    mix = wrap("vibronic", lambda: AtomMix(_num(cfg, "vibronic.excited"), _num(cfg, "vibronic.ground")))
    tail_tol = _num(cfg, "vibronic.tail_tol")
    if not 0 < tail_tol < 1:
        raise ConfigError("vibronic.tail_tol", "must lie in (0, 1)")

    steps = cfg["numerics"]["steps"]
    if steps == "auto":
        steps = None
    elif isinstance(steps, bool) or not isinstance(steps, int) or steps < 1:
        raise ConfigError("numerics.steps", "must be a positive integer or 'auto'")

    fmt = cfg["output"]["format"]
    if fmt not in ("csv", "json"):
        raise ConfigError("output.format", "must be 'csv' or 'json'")
    out_path = cfg["output"]["path"]
    if not isinstance(out_path, str):
        raise ConfigError("output.path", "must be a string")

    return ExperimentConfig(
        raw=cfg, model=model, atom=atom, switching=sw, initial=initial,
        temperature=temperature, times=times, path=path, vibronic=vib, mix=mix,
        g=_num(cfg, "vibronic.g"), tail_tol=tail_tol, steps=steps,
        out_path=out_path, out_format=fmt,
    )


def load(path=None, overrides=(), profile: str | None = None) -> ExperimentConfig:
    return build(resolve(path, overrides, profile))


