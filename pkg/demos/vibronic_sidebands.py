"""
Trapped ion on a vibrational sideband
=====================================

An ion in a harmonic trap is driven on the second red sideband. Each Fock
level n couples |2, n> to |1, n + k> at its own Rabi frequency, so a thermal
motional state turns clean Rabi oscillations into a dephased average.
"""
import numpy as np

from qwork import VibronicParams, average_work_vibronic, populations
from qwork import rabi_frequency, sideband_coupling, thermal_occupation
from qwork.vibronic import ES, GS

v = VibronicParams()
print("first sideband couplings omega_n:", np.round(sideband_coupling(v, np.arange(6)), 6))
print("Rabi frequency of n = 0 over kappa:", rabi_frequency(v, 0) / v.kappa)

kt = np.linspace(0, 3000, 7)
for T in (30.0, 300.0):
    th = thermal_occupation(T, v.trap)
    es, _ = populations(v, ES, th, kt / v.kappa)
    _, gs = populations(v, GS, th, kt / v.kappa)
    w = average_work_vibronic(v, ES, th, kt / v.kappa) / v.work_quantum
    print(f"\nT = {T:.0f} K, Fock levels kept: {th.n_max + 1}")
    print(" kappa*tau  P2(ES)  P1(GS)  <W>/W0 (ES)")
    for row in zip(kt, es, gs, w):
        print("%9.0f  %6.4f  %6.4f  %8.4f" % row)
