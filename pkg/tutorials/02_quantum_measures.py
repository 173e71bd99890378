"""
Squeezing, entanglement and steering
====================================

Reduce the steady state to the two magnons and evaluate every measure.
"""
import numpy as np

from magnon_steering import default_spec, solve_spec
from magnon_steering.measures import (
    gaussian_steering,
    log_negativity,
    metrics_from_cm,
    reduce_cm,
    squeezing_db,
    two_mode_squeezed_vacuum,
)

# a textbook state first: two-mode squeezed vacuum with s = 0.5
sr = two_mode_squeezed_vacuum(0.5)
print("TMSV  E =", log_negativity(sr), " (expect 1.0)")
print("TMSV  G =", gaussian_steering(sr, "1->2"), " (expect", np.log(np.cosh(1.0)), ")")

# now the magnons at Gamma_2 = 1.5 Gamma_1
spec = default_spec(1.0, 0.49)
spec = spec.replace(gamma_2=1.5 * spec.gamma_1)
sigma = solve_spec(spec)

# quadrature indices: 0,1 cavity; 2,3 magnon 1; 4,5 magnon 2
print("S_X1 = %.3f dB, S_Y1 = %.3f dB" % (squeezing_db(sigma, 2), squeezing_db(sigma, 3)))

magnons = reduce_cm(sigma)
print("E12  =", log_negativity(magnons))
print("G12  =", gaussian_steering(magnons, "1->2"))
print("G21  =", gaussian_steering(magnons, "2->1"))

# the unclamped value keeps its sign, which is what threshold searches use
print("G12 raw =", gaussian_steering(magnons, "1->2", clamp=False))

# everything at once
rec = metrics_from_cm(sigma)
for name, value in zip(rec.columns(), rec.values()):
    print(f"  {name:<9} {value}")
