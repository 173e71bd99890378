"""Squeezing, entanglement and EPR-steering measures of a Gaussian covariance matrix.

Conventions follow :mod:`magnon_steering.dynamics`: mode 0 is the cavity,
modes 1 and 2 are the magnons, each occupying two consecutive rows
(``X``, ``Y``) of the covariance matrix, and the vacuum variance is 1/2.
"""
from __future__ import annotations

import math
from dataclasses import astuple, dataclass, fields

import numpy as np

ZPF_VARIANCE = 0.5
# det of the reduced CM below which the point is reported as marginal
DEGENERATE_DET = 1e-14
# relative slack allowed on the discriminant of the partial-transpose spectrum
DISCRIMINANT_TOL = 1e-10


class NonPositiveVariance(ValueError):
    pass


class ComplexEigenvalue(ValueError):
    pass


class DegenerateCM(ValueError):
    pass


@dataclass(frozen=True)
class MetricsRecord:
    s_x1: float
    s_y1: float
    s_x2: float
    s_y2: float
    e12: float
    g12: float
    g21: float
    gs: float
    pop_a: float
    pop_1: float
    pop_2: float
    stable: bool
    margin: float
    # unclamped values, for locating sign changes
    e12_raw: float = float("nan")
    g12_raw: float = float("nan")
    g21_raw: float = float("nan")

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def values(self) -> tuple:
        return astuple(self)

    @classmethod
    def marginal(cls, margin: float) -> "MetricsRecord":
        """Placeholder for a point that is unstable or too close to the boundary."""
        nan = float("nan")
        return cls(nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, nan, False, margin)


def det2(m: np.ndarray) -> float:
    return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])


def det4(m: np.ndarray) -> float:
    """Closed-form 4x4 determinant (Laplace expansion over the first two rows)."""
    def s(j, k):
        return m[0, j] * m[1, k] - m[0, k] * m[1, j]

    def c(j, k):
        return m[2, j] * m[3, k] - m[2, k] * m[3, j]

    return float(
        s(0, 1) * c(2, 3) - s(0, 2) * c(1, 3) + s(0, 3) * c(1, 2)
        + s(1, 2) * c(0, 3) - s(1, 3) * c(0, 2) + s(2, 3) * c(0, 1)
    )


def reduce_cm(sigma: np.ndarray, modes: tuple[int, int] = (1, 2)) -> np.ndarray:
    """4x4 covariance matrix of two modes, ordered as given."""
    sigma = np.asarray(sigma)
    n_modes = sigma.shape[0] // 2
    i, j = modes
    if i == j:
        raise IndexError("modes must be distinct")
    for m in modes:
        if not 0 <= m < n_modes:
            raise IndexError(f"mode index {m} out of range for {n_modes} modes")
    idx = [2 * i, 2 * i + 1, 2 * j, 2 * j + 1]
    return sigma[np.ix_(idx, idx)].copy()


def blocks(sr: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split a reduced CM into ``(sigma_1, sigma_2, sigma_c)``."""
    return sr[:2, :2], sr[2:, 2:], sr[:2, 2:]


def squeezing_db(sigma: np.ndarray, index: int) -> float:
    """Squeezing of quadrature ``index`` relative to the vacuum, in dB.

    Positive values mean the variance is below the zero-point level.
    """
    var = float(sigma[index, index])
    if not var > 0:
        raise NonPositiveVariance(f"variance of quadrature {index} is {var!r}")
    return -10.0 * math.log10(var / ZPF_VARIANCE) + 0.0


def symplectic_eigenvalue_pt(sr: np.ndarray) -> float:
    """Smallest symplectic eigenvalue of the partially transposed reduced CM."""
    s1, s2, sc = blocks(sr)
    delta = det2(s1) + det2(s2) - 2 * det2(sc)
    det_r = det4(sr)
    disc = delta * delta - 4 * det_r
    if disc < 0:
        if disc < -DISCRIMINANT_TOL * max(delta * delta, 1.0):
            raise ComplexEigenvalue(f"negative discriminant {disc!r}: not a physical state")
        disc = 0.0
    inner = delta - math.sqrt(disc)
    if inner <= 0:
        raise ComplexEigenvalue(f"non-positive symplectic eigenvalue squared ({inner!r})")
    return math.sqrt(inner / 2)


def log_negativity(sr: np.ndarray, clamp: bool = True) -> float:
    """Logarithmic negativity of a two-mode reduced CM.

    With ``clamp=False`` the signed value ``-ln(2 mu_minus)`` is returned.
    """
    raw = -math.log(2 * symplectic_eigenvalue_pt(sr)) + 0.0
    return max(0.0, raw) if clamp else raw


def gaussian_steering(sr: np.ndarray, direction: str = "1->2", clamp: bool = True) -> float:
    """Gaussian steerability of mode 2 by mode 1 (``"1->2"``) or the reverse.

    The direction ``1->2`` divides ``det sigma_1`` by ``4 det sigma_r``.
    """
    s1, s2, _ = blocks(sr)
    det_r = det4(sr)
    if det_r <= 0:
        raise DegenerateCM(f"reduced covariance determinant is {det_r!r}")
    if direction in ("1->2", "12"):
        num = det2(s1)
    elif direction in ("2->1", "21"):
        num = det2(s2)
    else:
        raise ValueError(f"unknown steering direction {direction!r}")
    raw = 0.5 * math.log(num / (4 * det_r))
    return max(0.0, raw) if clamp else raw


def steering_asymmetry(g12: float, g21: float) -> float:
    if g12 < 0 or g21 < 0:
        raise ValueError("steering values must be non-negative")
    return abs(g12 - g21)


def populations(sigma: np.ndarray) -> tuple[float, ...]:
    """Mean excitation number of every mode, ``(<X^2> + <Y^2> - 1)/2``."""
    d = np.diag(sigma)
    return tuple(float(d[2 * m] + d[2 * m + 1] - 1) / 2 for m in range(len(d) // 2))


def cross_moment(sigma: np.ndarray) -> complex:
    """``<m1 m2>`` of a zero-mean Gaussian state, built from the CM blocks."""
    return 0.5 * complex(sigma[2, 4] - sigma[3, 5], sigma[2, 5] + sigma[3, 4])


def moment_steering_criterion(sigma: np.ndarray) -> tuple[bool, bool, complex]:
    """Moment-based sufficient conditions for steering ``1->2`` and ``2->1``.

    Steering 1->2 is witnessed when ``|<m1 m2>|^2 > n2 (n1 + 1/2)``, and
    the reverse with the indices swapped.
    """
    _, n1, n2 = populations(sigma)
    m12 = cross_moment(sigma)
    mag = abs(m12)
    crit_12 = mag * mag > n2 * (n1 + 0.5)
    crit_21 = mag * mag > n1 * (n2 + 0.5)
    return bool(crit_12), bool(crit_21), m12


def metrics_from_cm(sigma: np.ndarray, margin: float = float("nan")) -> MetricsRecord:
    """Full :class:`MetricsRecord` for a steady-state covariance matrix.

    Points whose reduced determinant is below :data:`DEGENERATE_DET` come
    back as marginal.
    """
    sr = reduce_cm(sigma, (1, 2))
    if det4(sr) < DEGENERATE_DET:
        return MetricsRecord.marginal(margin)
    e_raw = log_negativity(sr, clamp=False)
    g12_raw = gaussian_steering(sr, "1->2", clamp=False)
    g21_raw = gaussian_steering(sr, "2->1", clamp=False)
    g12, g21 = max(0.0, g12_raw), max(0.0, g21_raw)
    pop_a, pop_1, pop_2 = (max(0.0, p) for p in populations(sigma))
    return MetricsRecord(
        s_x1=squeezing_db(sigma, 2),
        s_y1=squeezing_db(sigma, 3),
        s_x2=squeezing_db(sigma, 4),
        s_y2=squeezing_db(sigma, 5),
        e12=max(0.0, e_raw),
        g12=g12,
        g21=g21,
        gs=steering_asymmetry(g12, g21),
        pop_a=pop_a,
        pop_1=pop_1,
        pop_2=pop_2,
        stable=True,
        margin=margin,
        e12_raw=e_raw,
        g12_raw=g12_raw,
        g21_raw=g21_raw,
    )


def two_mode_squeezed_vacuum(s: float) -> np.ndarray:
    """Reduced CM of a two-mode squeezed vacuum with squeezing ``s``."""
    c, sh = math.cosh(2 * s) / 2, math.sinh(2 * s) / 2
    z = np.diag([1.0, -1.0])
    return np.block([[c * np.eye(2), sh * z], [sh * z, c * np.eye(2)]])
