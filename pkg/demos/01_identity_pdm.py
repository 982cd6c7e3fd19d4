# # Pseudo-density matrices for two measurements in time
#
# Prepare a qubit, measure a Pauli observable, let a channel act, measure
# again. The two-time statistics assemble into a 4x4 Hermitian, unit-trace
# operator that can have a negative eigenvalue. A negative eigenvalue means
# the correlations cannot come from a bipartite state at a single time.

import numpy as np

from pdmnm import (
    QubitState,
    amplitude_damping,
    causality_F,
    f_cm,
    identity_channel,
    pdm_from_correlators,
    pdm_two_point,
)

np.set_printoptions(precision=4, suppress=True)

# ## Identity channel, maximally mixed input
#
# The PDM is the swap operator divided by two, with one eigenvalue -1/2.

p = pdm_two_point(np.eye(2) / 2, identity_channel())
print(p.matrix.real)
print("eigenvalues:", p.eigenvalues)
print("f_cm =", f_cm(p), " F =", causality_F(p))

# ## Two routes to the same operator
#
# The Jordan-product form and the enumeration of measurement outcomes
# (correlators <s_i s_j>) agree to round-off.

rho = QubitState.from_angles(0.3, 1.1)
ch = amplitude_damping(0.4)
a = pdm_two_point(rho, ch).matrix
b = pdm_from_correlators(rho, ch).matrix
print("max |difference| =", np.max(np.abs(a - b)))

# ## Full damping kills the temporal signature
#
# When everything decays to |0>, the output no longer depends on the input
# and the PDM becomes a genuine density matrix.

p = pdm_two_point(QubitState.ket("0"), amplitude_damping(1.0))
print("eigenvalues at r = 1:", p.eigenvalues, " F =", causality_F(p))
