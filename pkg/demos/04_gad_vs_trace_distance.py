# # A case the trace distance misses
#
# In the generalized amplitude damping family with p(t) = sin^2(omega t)
# and lambda(t) = 1 - exp(-t), the distance between two evolved states does
# not depend on p at all. F(t) does, and it revives when omega > 0.

import numpy as np

from pdmnm import GADParams, QubitState, gad_family
from pdmnm.measures import TimeGrid, f_curve, nm_measure, trace_distance_curve

grid = TimeGrid(0.0, 10.0, 1e-3)
plus, minus = QubitState.ket("+"), QubitState.ket("-")
ket0 = QubitState.ket("0")

curves = {}
for omega in (0.0, 1.0, 3.0):
    fam = gad_family(GADParams(omega))
    curves[omega] = (
        trace_distance_curve(fam, plus, minus, grid).values,
        f_curve(fam, ket0, grid).values,
    )

d0, f0 = curves[0.0]
for omega, (d, f) in curves.items():
    print(f"omega = {omega}: max |D - D_0| = {np.max(np.abs(d - d0)):.1e}, "
          f"max |F - F_0| = {np.max(np.abs(f - f0)):.3f}")

# ## Measures side by side

for omega in (0.0, 3.0):
    rep = nm_measure(gad_family(GADParams(omega)), grid, state_grid=(12, 2))
    print(f"omega = {omega}: M = {rep.M:.4f}, trace-distance measure = {rep.blp:.4f}")
