"""Conversions between internal units (hbar = 1, frequencies in rad/ps) and SI."""
from scipy.constants import hbar as HBAR, k as K_B

#: one internal frequency unit ("teraHz") in rad/s
FREQUENCY_UNIT = 1e12
#: one internal energy unit in joules
ENERGY_UNIT = HBAR * FREQUENCY_UNIT


def beta_from_kelvin(temperature: float) -> float:
    """Inverse temperature in units of 1 / (hbar * 1 THz)."""
    if not temperature > 0:
        raise ValueError(f"temperature must be positive, got {temperature}")
    return ENERGY_UNIT / (K_B * temperature)


def to_joules(energy):
    return energy * ENERGY_UNIT


def from_joules(energy):
    return energy / ENERGY_UNIT
