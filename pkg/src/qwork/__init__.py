"""Quantum thermodynamics of a driven two-level atom, bare and trapped.

Internal units: hbar = 1, frequencies in rad/ps ("teraHz"), times in ps.
"""
__version__ = "0.1.0"

from .numerics import (
    EigenPair2,
    NumericalContractError,
    eig_hermitian_2x2,
    laguerre_assoc,
    propagate,
    propagate_grid,
)
from .switching import SwitchingFunction
from .twolevel import (
    AtomParams,
    InitialDensity,
    decoherency,
    decoherency_from_density,
    evolve_density,
    population_ground,
    u_full,
    u_offresonance,
    u_rwa,
)
from .workstats import (
    WorkDistribution,
    WorkMoments,
    average_work_rwa,
    average_work_tpm,
    char_rwa,
    char_tpm,
    delta_f_rwa,
    helmholtz_delta_f,
    internal_energy_change,
    irreversible_work,
    tpm_distribution,
    work_distribution_rwa,
    work_moments_rwa,
)
from .vibronic import (
    AtomMix,
    ThermalState,
    VibronicParams,
    average_work_vibronic,
    char_vibronic,
    coefficients,
    full_model_oracle,
    populations,
    rabi_frequency,
    sideband_coupling,
    thermal_occupation,
    work_distribution_vibronic,
)
