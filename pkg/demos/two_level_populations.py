"""
Ground-state population under a pulse train
============================================

A resonant two-level atom is driven by a square-wave switching function.
While the laser is off the population freezes; while it is on, it rotates
with the accumulated pulse area G(t) Omega. The RWA closed form is compared
with direct propagation of the full Hamiltonian.
"""
import numpy as np

from qwork import AtomParams, InitialDensity, SwitchingFunction, evolve_density, population_ground
from qwork import u_full, u_rwa

sw = SwitchingFunction()                   # period 2 ps, on for 1 ps, 8 ps in total
times = np.linspace(0, 8, 17)

# RWA is accurate when the transition frequency dominates the Rabi frequency
for omega in (0.5, 5.0, 50.0):
    p = AtomParams(omega0=omega, omega_laser=omega, rabi=0.5)
    rwa = population_ground(evolve_density(InitialDensity(1.0), u_rwa(p, sw, times)))[0]
    full = np.array([population_ground(evolve_density(InitialDensity(1.0), u_full(p, sw, t)))[0]
                     for t in times])
    print(f"omega0 = {omega:5.1f}   max |rwa - full| = {np.max(np.abs(rwa - full)):.2e}")

p = AtomParams(omega0=50.0, omega_laser=50.0, rabi=0.5)
rho11, shown = population_ground(evolve_density(InitialDensity(1.0), u_rwa(p, sw, times)))
print("\n   t    G(t)   rho11   rho11^2")
for t, G, a, b in zip(times, sw.G(times), rho11, shown):
    print(f"{t:5.1f}  {G:5.2f}  {a:6.4f}  {b:6.4f}")
