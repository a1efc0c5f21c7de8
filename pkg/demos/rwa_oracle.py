"""
Checking the reduced sideband model against the full Hamiltonian
================================================================

The block formulas keep only the resonant sideband. The oracle keeps every
sideband on a truncated Fock space and exponentiates the full Hamiltonian
exactly. Off-resonant sidebands leave a small fast ripple on top of the
sideband flop, which shrinks as the trap frequency grows relative to the
coupling.
"""
import numpy as np

from qwork import ThermalState, VibronicParams, coefficients, full_model_oracle, rabi_frequency
from qwork.vibronic import ES

for ratio in (1e2, 1e3, 1e4):
    kappa = 2.0 / ratio
    v = VibronicParams(kappa=kappa, detuning=0.005 * kappa)
    tau = np.linspace(0, np.pi / rabi_frequency(v, 0), 201)       # one flop of |2,0> -> |1,2>
    _, pop1 = full_model_oracle(v, 12, ES, ThermalState.fock(0), tau)
    _, b = coefficients(v, 0, tau)
    err = np.max(np.abs(pop1 - np.abs(b) ** 2))
    print(f"nu/kappa = {ratio:7.0f}   peak transfer {pop1.max():.4f}   max deviation {err:.2e}")
