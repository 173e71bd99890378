"""
Steady state of the cavity and two magnons
==========================================

Build the baseline parameters, look at the drift and diffusion matrices,
and solve for the steady-state covariance matrix two ways.
"""
import numpy as np

from magnon_steering import default_spec, diffusion_matrix, drift_matrix, stability, steady_state_cm
from magnon_steering.dynamics import integrate_to_steady_state, is_physical, lyapunov_residual

np.set_printoptions(precision=4, suppress=True)

# squeezed drive with r = 1 and an OPA gain of 0.49 kappa_a
spec = default_spec(squeeze_r=1.0, lambda_opa=0.49)
print("kappa_a / 2pi =", spec.kappa_a / (2 * np.pi) / 1e6, "MHz")

# drift and diffusion are dimensionless, in units of kappa_a
a = drift_matrix(spec)
f = diffusion_matrix(spec)
print("drift matrix\n", a)
print("diffusion matrix\n", f)

# the steady state exists only if every eigenvalue of A has negative real part
st = stability(a)
print("stable:", st.is_stable, " margin:", round(st.margin, 4))

# direct solve of A S + S A^T + F = 0
sigma = steady_state_cm(a, f)
print("covariance matrix\n", sigma)
print("relative residual:", lyapunov_residual(a, f, sigma))
print("physical:", is_physical(sigma))

# the same state from integrating dS/dt = A S + S A^T + F from vacuum
sigma_ode = integrate_to_steady_state(a, f)
print("max difference to ODE oracle:", np.abs(sigma - sigma_ode).max())
