"""A four-carrier circuit where the last pair reflects a choice made later.

Carrier 3 is entangled with carrier 2 through a Bell pair, and a CNOT copies
carrier 3's computational value onto carrier 4 FIRST.  Only afterwards do we
decide whether to flip carrier 1.  Post-selecting the final Bell measurement
on the input Bell state leaves carriers 3,4 in |00> when no flip happened and
|11> when it did: conditioned on that outcome, the pair "knew" the choice
before it was made.  Causality is safe because the outcome itself cannot be
forced; it arrives with probability 1/4.

Run:  python demos/acausal_choice.py
"""

import numpy as np

from timeflow.circuits import acausal_circuit, run_gate_circuit

np.set_printoptions(precision=4, suppress=True)

for bell in ("PHI+", "PSI-"):
    print(f"initial pair {bell}:")
    for a in (0, 1):
        circuit, inp, select = acausal_circuit(a, bell)
        reports = run_gate_circuit(circuit, inp)
        rep = reports[(select,)]
        print(f"  flip={a}: carriers 3,4 end in {np.round(rep.state, 6)}"
              f"  (post-selection probability {rep.probability:.4f})")
    total = sum(
        r.probability for r in run_gate_circuit(acausal_circuit(0, bell)[0],
                                                acausal_circuit(0, bell)[1]).values()
    )
    print(f"  all four measurement branches together: probability {total:.6f}\n")
