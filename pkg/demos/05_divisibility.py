# # Divisibility of the dynamical map
#
# The intermediate map E(t + tau, t) = E(t + tau, 0) E(t, 0)^{-1} is a valid
# channel only if its Choi matrix is positive. Its smallest eigenvalue is a
# witness: negative values certify non-Markovian dynamics.

import numpy as np

from pdmnm import ADParams, QubitState, ad_family, intermediate_map_witness
from pdmnm.measures import TimeGrid, f_curve, slope

tau = 0.05
for label, params in [("weak", ADParams(0.6, 3.0)), ("strong", ADParams(3.0, 0.6))]:
    fam = ad_family(params)
    ts = np.linspace(0.0, 9.0, 181)
    w = np.array([intermediate_map_witness(fam, t, tau) for t in ts])
    print(f"{label:6s} min witness = {np.nanmin(w):+.3e}, "
          f"negative at {np.count_nonzero(w < -1e-9)} of {len(ts)} times, "
          f"undefined at {np.count_nonzero(np.isnan(w))}")

# ## Witness and revivals
#
# In the strong-coupling regime, times where F rises are times where the
# intermediate map fails to be completely positive.

params = ADParams(3.0, 0.6)
fam = ad_family(params)
grid = TimeGrid(0.0, 9.0, 1e-2)
d = slope(f_curve(fam, QubitState.ket("0"), grid))
t = grid.times
sample = t[np.nan_to_num(d) > 1e-3][::40]
for ti in sample:
    print(f"t = {ti:.2f}  witness = {intermediate_map_witness(fam, ti, tau):+.3e}")
