"""Evaluate teleportation-like circuits two ways and watch them agree.

The tensor-product oracle simulates all three carriers and post-selects; the
single-chain evaluation follows one qubit forward and backward through the
circuit.  Both give the same conditional state with probability 1/d**2, for
any carrier dimension and any encoding.

Run:  python demos/teleport_two_semantics.py
"""

import numpy as np

from timeflow.circuits import TeleportCircuit, forward_oracle, timeflow_eval, timeflow_trace
from timeflow.linalg import phase_distance, random_state, random_unitary
from timeflow.reversal import photon_number, spin_half

np.set_printoptions(precision=4, suppress=True)
rng = np.random.default_rng(2718)


def random_maxent(d):
    can = np.zeros(d * d, dtype=complex)
    can[:: d + 1] = 1 / np.sqrt(d)
    return np.kron(random_unitary(d, rng), random_unitary(d, rng)) @ can


##############################
# 1. One random qutrit circuit, inspected step by step
##############################

d = 3
circuit = TeleportCircuit(
    d=d,
    u=random_unitary(d, rng),
    v=random_unitary(d, rng),
    w=random_unitary(d, rng),
    phi=random_maxent(d),
    omega=random_maxent(d),
)
psi = random_state(d, rng)

print("input state:", psi)
for label, vec in timeflow_trace(circuit, psi, photon_number(d)):
    print(f"  {label:16s} |v| = {np.linalg.norm(vec):.6f}")

flow = timeflow_eval(circuit, psi, photon_number(d))
oracle = forward_oracle(circuit, psi)
print("\nchain probability :", flow.probability, " (1/d^2 =", 1 / d**2, ")")
print("oracle probability:", oracle[0].probability)
print("phase distance between the two conditional states:",
      phase_distance(flow.raw, oracle[0].raw))
print("probabilities over all", d * d, "outcomes sum to",
      sum(r.probability for r in oracle.values()))

##############################
# 2. The output does not care how the carriers are built
##############################

d = 2
circuit = TeleportCircuit(
    d=d,
    u=random_unitary(d, rng),
    v=random_unitary(d, rng),
    w=random_unitary(d, rng),
    phi=random_maxent(d),
    omega=random_maxent(d),
)
psi = random_state(d, rng)
outputs = []
for k in range(8):
    enc = spin_half(np.exp(2j * np.pi * k / 8))
    outputs.append(timeflow_eval(circuit, psi, enc).raw)
outputs.append(timeflow_eval(circuit, psi, photon_number(2)).raw)
spread = max(np.max(np.abs(v - outputs[0])) for v in outputs)
print("\nlargest spread across 9 encodings:", spread)

##############################
# 3. Sweep many random circuits
##############################

worst = 0.0
for _ in range(300):
    d = int(rng.integers(2, 5))
    c = TeleportCircuit(
        d=d,
        u=random_unitary(d, rng),
        v=random_unitary(d, rng),
        w=random_unitary(d, rng),
        phi=random_maxent(d),
        omega=random_maxent(d),
    )
    psi = random_state(d, rng)
    flow = timeflow_eval(c, psi, photon_number(d))
    worst = max(worst, abs(phase_distance(flow.raw, forward_oracle(c, psi)[0].raw)))
print("worst phase distance over 300 random circuits:", worst)
