# # Revivals of temporal correlations in the damped Jaynes-Cummings model
#
# A qubit coupled to a Lorentzian reservoir decays with amplitude G(t). For
# strong coupling (gamma0 = 3, b = 0.6) G oscillates through zero and the
# causality monotone F(t) revives after every zero. In the weak-coupling
# regime (gamma0 = 0.6, b = 3) F only decreases.

import numpy as np

from pdmnm import ADParams, QubitState, ad_family, ad_roots
from pdmnm.measures import TimeGrid, decay_rate_curve, f_curve

grid = TimeGrid(0.0, 10.0, 1e-3)
ket0 = QubitState.ket("0")

for label, params in [("strong", ADParams(3.0, 0.6)), ("weak", ADParams(0.6, 3.0))]:
    f = f_curve(ad_family(params), ket0, grid).values
    rising = np.diff(f) > 0
    print(f"{label:6s} F(0) = {f[0]:.3f}  F(10) = {f[-1]:.4f}  "
          f"fraction of rising steps = {rising.mean():.3f}")

# ## Where F touches zero
#
# Each zero of G makes the PDM positive semidefinite for an instant.

nm = ADParams(3.0, 0.6)
roots = ad_roots(nm, 10.0)
print("zeros of G:", np.round(roots, 6))

# ## Revivals line up with a negative decay rate
#
# The time-local rate gamma(t) = -2 G'/G diverges at the zeros of G and is
# negative exactly while |G| grows again.

t = grid.times
gamma = decay_rate_curve(nm, grid).values
f = f_curve(ad_family(nm), ket0, grid).values
for k in range(len(roots)):
    i = np.searchsorted(t, roots[k] + 0.5)
    print(f"t = {t[i]:.3f}: dF/dt ~ {(f[i + 1] - f[i - 1]) / (2 * grid.step):+.3f}, "
          f"gamma = {gamma[i]:+.3f}")
