"""Walk through the building blocks: reversing states and gates, and reading
a bipartite pair as a matrix.

Run:  python demos/backward_in_time_basics.py
"""

import numpy as np

from timeflow.linalg import SX, SY, SZ, bell_state, basis_state
from timeflow.reversal import (
    amplitude_matrix,
    backward_state,
    canonical_pair,
    is_maximally_entangled,
    photon_number,
    spin_expectations,
    spin_half,
    time_reverse_gate,
    time_reverse_state,
    transfer_matrix,
)

np.set_printoptions(precision=4, suppress=True)

##############################
# 1. Two physical encodings
##############################

spin = spin_half()
photon = photon_number(2)
print("spin encoding:   reversal matrix =\n", spin.matrix, "\n  sign =", spin.sign)
print("photon encoding: reversal matrix =\n", photon.matrix, "\n  sign =", photon.sign)

##############################
# 2. Reversing a state flips every spin component
##############################

rng = np.random.default_rng(0)
psi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
psi /= np.linalg.norm(psi)
rev = time_reverse_state(psi, spin)
print("\n<S> before:", spin_expectations(psi))
print("<S> after: ", spin_expectations(rev))

##############################
# 3. Reversing a gate: sigma_x picks up a sign, a rotation reverses sense
##############################

print("\nreversed X gate (spin):\n", time_reverse_gate(SX, spin))
print("reversed Z gate (spin):\n", time_reverse_gate(SZ, spin))

##############################
# 4. A pair of carriers as a matrix
##############################

for name in ("PHI+", "PSI-"):
    phi = bell_state(name)
    print(f"\n{name}: amplitude matrix =\n", amplitude_matrix(phi))
    print("  transfer matrix (unitary iff maximally entangled):\n", transfer_matrix(phi))
    print("  maximally entangled?", is_maximally_entangled(phi))

product = np.kron(basis_state(2, 0), basis_state(2, 0))
print("\n|00>: maximally entangled?", is_maximally_entangled(product))

##############################
# 5. What a measurement sends backward
##############################

# Finding the pair in PHI+ sends the (conjugated) input through the pair's
# matrix; the squared norm of the result is the outcome's Born probability.
rho, bar = backward_state(psi, bell_state("PHI+"))
print("\nbackward vector:", bar, "  norm^2 =", np.linalg.norm(bar) ** 2)

# Each encoding owns one canonical pair: the state whose transfer matrix is
# the encoding's own reversal matrix.
print("\ncanonical pair (spin):  ", canonical_pair(spin))
print("canonical pair (photon):", canonical_pair(photon))
