"""Drift/diffusion matrices, stability and the steady-state covariance matrix.

Quadrature ordering throughout is ``(x_a, y_a, X_1, Y_1, X_2, Y_2)`` with
``x = (a + a^dag)/sqrt(2)``, so the vacuum covariance matrix is ``I/2``.
Matrix entries are expressed in units of ``kappa_a``.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import lu_factor, lu_solve

from .model import BathMoments, SystemSpec, bath_moments

STABILITY_EPS = 1e-10
# condition number above which the vectorised Lyapunov system is treated as singular
SINGULAR_COND = 1e13


class UnstableSystem(RuntimeError):
    pass


class SingularSolve(RuntimeError):
    pass


class MaxStepsExceeded(RuntimeError):
    def __init__(self, message, norm=float("nan")):
        super().__init__(message)
        self.norm = norm


class Stability(NamedTuple):
    is_stable: bool
    margin: float


def symplectic_form(n_modes: int = 3) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def drift_matrix(spec: SystemSpec) -> np.ndarray:
    k = spec.kappa_a
    ka, k1, k2 = 1.0, spec.kappa_1 / k, spec.kappa_2 / k
    da, d1, d2 = spec.delta_a / k, spec.delta_1 / k, spec.delta_2 / k
    g1, g2 = spec.gamma_1 / k, spec.gamma_2 / k
    lam = spec.lambda_opa / k
    c, s = 2 * lam * np.cos(spec.phi_opa), 2 * lam * np.sin(spec.phi_opa)
    return np.array([
        [-ka + c, da + s, 0.0, g1, 0.0, g2],
        [-da + s, -ka - c, -g1, 0.0, -g2, 0.0],
        [0.0, g1, -k1, d1, 0.0, 0.0],
        [-g1, 0.0, -d1, -k1, 0.0, 0.0],
        [0.0, g2, 0.0, 0.0, -k2, d2],
        [-g2, 0.0, 0.0, 0.0, -d2, -k2],
    ])


def diffusion_matrix(spec: SystemSpec, bath: BathMoments | None = None) -> np.ndarray:
    """Noise covariance ``F`` of the quantum Langevin equations.

    The cavity block carries the squeezed-bath moments; ``beta`` is real
    and equals ``i(M* - M) = 2 Im M`` in units of ``kappa_a``.
    """
    if bath is None:
        bath = bath_moments(spec)
    big_n, big_m = bath.big_n, bath.big_m
    alpha_plus = 2 * big_m.real + 2 * big_n + 1
    alpha_minus = -2 * big_m.real + 2 * big_n + 1
    beta = 2 * big_m.imag
    f = np.zeros((6, 6))
    f[0, 0], f[1, 1] = alpha_plus, alpha_minus
    f[0, 1] = f[1, 0] = beta
    m1 = spec.kappa_1 / spec.kappa_a * (2 * bath.n_1 + 1)
    m2 = spec.kappa_2 / spec.kappa_a * (2 * bath.n_2 + 1)
    f[2, 2] = f[3, 3] = m1
    f[4, 4] = f[5, 5] = m2
    return f


def stability(a: np.ndarray) -> Stability:
    """Spectral abscissa of the drift matrix and the resulting verdict.

    ``LinAlgError`` from a non-converging eigen-solve is deliberately left
    to propagate.
    """
    margin = float(np.max(np.linalg.eigvals(a).real))
    return Stability(margin < -STABILITY_EPS, margin)


def lyapunov_residual(a: np.ndarray, f: np.ndarray, sigma: np.ndarray) -> float:
    r = a @ sigma + sigma @ a.T + f
    return float(np.linalg.norm(r) / np.linalg.norm(f))


def steady_state_cm(a: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Solve ``A S + S A^T = -F`` by vectorisation and dense LU.

    The Kronecker system has size ``n^2`` so the cost grows as ``n^6``;
    this is intended for the handful of modes used here only.  One step of
    iterative refinement is applied after the LU solve.
    """
    stab = stability(a)
    if not stab.is_stable:
        raise UnstableSystem(f"drift matrix is not stable (margin {stab.margin:.6g} kappa_a)")
    n = a.shape[0]
    eye = np.eye(n)
    # row-major vec: vec(A S) = (A kron I) vec(S), vec(S A^T) = (I kron A) vec(S)
    big = np.kron(a, eye) + np.kron(eye, a)
    cond = np.linalg.cond(big)
    if not np.isfinite(cond) or cond > SINGULAR_COND:
        raise SingularSolve(f"Lyapunov system is ill-conditioned (cond {cond:.3g})")
    rhs = -f.reshape(-1)
    lu = lu_factor(big)
    x = lu_solve(lu, rhs)
    x += lu_solve(lu, rhs - big @ x)
    sigma = x.reshape(n, n)
    return 0.5 * (sigma + sigma.T)


def integrate_to_steady_state(
    a: np.ndarray,
    f: np.ndarray,
    tol: float = 1e-10,
    max_steps: int = 200_000,
    chunk: float = 25.0,
    rtol: float = 1e-12,
) -> np.ndarray:
    """Time-integrate ``dS/dt = A S + S A^T + F`` from the vacuum until it settles.

    Integration proceeds in chunks of ``chunk`` (in ``1/kappa_a``) with an
    explicit adaptive Dormand-Prince stepper and stops once
    ``||dS/dt||_F < tol ||F||_F``.  Independent of :func:`steady_state_cm`.

    ``a`` and ``f`` may carry leading batch dimensions, e.g. shape
    ``(k, 6, 6)``; the batch is integrated as one system (which amortises
    the stepper overhead) and every member must meet the tolerance.
    """
    a = np.asarray(a, dtype=float)
    f = np.asarray(f, dtype=float)
    batch_shape = a.shape[:-2]
    n = a.shape[-1]
    a = a.reshape(-1, n, n)
    f = np.broadcast_to(f, batch_shape + (n, n)).reshape(-1, n, n)
    a_t = a.transpose(0, 2, 1)
    f_norm = np.linalg.norm(f, axis=(1, 2))

    def deriv(s):
        return a @ s + s @ a_t + f

    def rhs(_t, y):
        return deriv(y.reshape(a.shape)).reshape(-1)

    y = np.broadcast_to(0.5 * np.eye(n), a.shape).reshape(-1).copy()
    t = 0.0
    steps = 0
    while True:
        sol = solve_ivp(rhs, (t, t + chunk), y, method="DOP853", rtol=rtol, atol=rtol)
        if not sol.success:
            raise MaxStepsExceeded(sol.message, float(np.linalg.norm(y)))
        steps += len(sol.t) - 1
        y = sol.y[:, -1]
        t += chunk
        s = y.reshape(a.shape)
        rel = np.linalg.norm(deriv(s), axis=(1, 2)) / f_norm
        norm = float(np.max(np.linalg.norm(s, axis=(1, 2))))
        if np.all(rel < tol):
            break
        if steps >= max_steps or not np.isfinite(norm) or norm > 1e12:
            raise MaxStepsExceeded(
                f"no steady state after {steps} steps (t = {t:g}, ||S|| = {norm:.3g})", norm
            )
    s = 0.5 * (s + s.transpose(0, 2, 1))
    return s.reshape(batch_shape + (n, n))


def physicality_min_eig(sigma: np.ndarray) -> float:
    """Smallest eigenvalue of ``S + (i/2) Omega``; non-negative for a valid state."""
    n_modes = sigma.shape[0] // 2
    herm = sigma + 0.5j * symplectic_form(n_modes)
    return float(np.min(np.linalg.eigvalsh(herm)))


def is_physical(sigma: np.ndarray, tol: float = 1e-9) -> bool:
    return physicality_min_eig(sigma) >= -tol


def save_matrix_csv(matrix: np.ndarray, path) -> None:
    np.savetxt(path, np.asarray(matrix), fmt="%.17g", delimiter=",")


def load_matrix_csv(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", ndmin=2)


def solve_spec(spec: SystemSpec) -> np.ndarray:
    """Steady-state covariance matrix for ``spec`` (raises if unstable)."""
    return steady_state_cm(drift_matrix(spec), diffusion_matrix(spec))
