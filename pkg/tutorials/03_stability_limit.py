"""
How much OPA gain can the system take?
======================================

Scan the stability margin against the OPA gain and bisect for the edge.
"""
import numpy as np

from magnon_steering import default_spec, drift_matrix, stability
from magnon_steering.experiments import max_stable_gain

base = default_spec()
for lam in np.linspace(0.0, 0.7, 8):
    margin = stability(drift_matrix(base.in_kappa_units(lambda_opa=lam))).margin
    print(f"Lambda = {lam:.2f} kappa_a   margin = {margin:+.4f}")

# the edge sits at (kappa_a + kappa_k)/2 with the coupled magnons
print("coupled system:", max_stable_gain(base))

# with the magnons decoupled only the cavity can go unstable, at kappa_a/2
bare = base.in_kappa_units(gamma_1=0, gamma_2=0)
print("bare cavity:   ", max_stable_gain(bare))
