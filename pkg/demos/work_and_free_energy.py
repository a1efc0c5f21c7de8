"""
Work statistics and free energy of the driven atom
==================================================

The work done by the laser is defined by two energy measurements. Its
characteristic function gives the mean work and, at imaginary argument
i beta, the free-energy difference through the Jarzynski equality. The mean
work never falls below the free-energy change.
"""
import numpy as np

from qwork import AtomParams, InitialDensity, SwitchingFunction
from qwork import average_work_rwa, char_rwa, delta_f_rwa, helmholtz_delta_f, irreversible_work
from qwork.units import beta_from_kelvin

sw = SwitchingFunction()
p = AtomParams(omega0=1.0, omega_laser=1.0, rabi=0.5)

for T in (5.0, 10.0, 30.0, 300.0):
    beta = beta_from_kelvin(T)
    A = InitialDensity.thermal(beta, p.omega0).A
    print(f"\nT = {T:5.0f} K   thermal ground population A = {A:.4f}")
    print("   t    <W>       dF    W_irr   dF from ch(i beta)")
    for t in (0.5, 2.5, 4.5, 6.5):
        w = average_work_rwa(p, sw, t, A)
        df = delta_f_rwa(p, sw, t, A, beta)
        df_char = helmholtz_delta_f(lambda nu: char_rwa(p, sw, t, A, nu), beta)
        print(f"{t:5.1f}  {w:7.4f}  {df:7.4f}  {irreversible_work(w, df):6.4f}  {df_char:7.4f}")

# the characteristic function is periodic in nu because work comes in quanta
nu = np.linspace(0, 4 * np.pi, 5)
print("\n|ch(nu)| at t = 0.5:", np.round(np.abs(char_rwa(p, sw, 0.5, 1.0, nu)), 6))
