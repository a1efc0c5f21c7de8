"""
Decoherency along the pulse train
=================================

log|rho12| measures how far the state is from a classical mixture. The
closed-form column follows log|sin(G Omega)| - log 2; the second column is
log|rho12| of the evolved density matrix, which diverges to -inf whenever the
pulse area returns the atom to a population eigenstate.
"""
import numpy as np

from qwork import AtomParams, InitialDensity, SwitchingFunction, decoherency, decoherency_from_density
from qwork import evolve_density, u_rwa

sw = SwitchingFunction()
p = AtomParams(omega0=1.0, omega_laser=1.0, rabi=0.5)
times = np.linspace(0, 8, 9) + 0.5

closed = decoherency(p.rabi * sw.G(times))
numeric = decoherency_from_density(evolve_density(InitialDensity(1.0), u_rwa(p, sw, times)))
print("   t   closed form   log|rho12|")
for t, a, b in zip(times, closed, numeric):
    print(f"{t:5.2f}   {a:10.5f}   {b:10.5f}")

# pulse area pi/2: the atom is fully inverted
t_zero = 6 + (np.pi - 3)
rho = evolve_density(InitialDensity(1.0), u_rwa(p, sw, t_zero))
print(f"\nat t = {t_zero:.4f}: closed form {decoherency(p.rabi * sw.G(t_zero)):.5f}, "
      f"|rho12| = {abs(rho[0, 1]):.1e}")
