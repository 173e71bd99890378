"""Physical parameters of the cavity + two-magnon system and its bath moments.

All rates and frequencies on :class:`SystemSpec` are angular (rad/s).  The
baseline parameter set and the helpers below let callers work in units of
the cavity decay rate ``kappa_a``, which is how the drift and diffusion
matrices are normalised downstream.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from scipy.constants import hbar, k as k_B

TWO_PI = 2.0 * math.pi

# gyromagnetic ratio, rad/s per tesla
GYROMAGNETIC_RATIO = TWO_PI * 28e9

# fields that may be given in units of kappa_a by `in_kappa_units`
RATE_FIELDS = ("gamma_1", "gamma_2", "lambda_opa", "kappa_1", "kappa_2")


class InvalidSpec(ValueError):
    """Raised when a :class:`SystemSpec` violates a physical constraint."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class SystemSpec:
    """Immutable parameter set.

    Mode frequencies, couplings, the OPA gain and the decay rates are
    angular (rad/s); phases are in radians and the temperature in kelvin.
    Detunings are not stored; they are derived from the mode frequencies
    and the squeezed-drive frequency every time they are read.
    """

    omega_a: float
    omega_1: float
    omega_2: float
    omega_s: float
    gamma_1: float
    gamma_2: float
    lambda_opa: float
    phi_opa: float
    kappa_a: float
    kappa_1: float
    kappa_2: float
    squeeze_r: float
    squeeze_theta: float
    temperature: float

    def __post_init__(self):
        problems = spec_violations(dataclasses.asdict(self))
        if problems:
            raise InvalidSpec(problems)

    @property
    def delta_a(self) -> float:
        return self.omega_a - self.omega_s

    @property
    def delta_1(self) -> float:
        return self.omega_1 - self.omega_s

    @property
    def delta_2(self) -> float:
        return self.omega_2 - self.omega_s

    def replace(self, **changes) -> "SystemSpec":
        """Copy with some fields changed (SI units)."""
        return dataclasses.replace(self, **changes)

    def in_kappa_units(self, **changes) -> "SystemSpec":
        """Copy with rates given as multiples of ``kappa_a``.

        Accepts the keys in :data:`RATE_FIELDS` plus ``delta_a``,
        ``delta_1`` and ``delta_2``; a detuning is applied by moving the
        corresponding mode frequency relative to ``omega_s``.  Any other
        field is passed through unscaled.
        """
        scaled = {}
        for key, value in changes.items():
            if key in RATE_FIELDS:
                scaled[key] = value * self.kappa_a
            elif key in ("delta_a", "delta_1", "delta_2"):
                scaled["omega_" + key[-1]] = self.omega_s + value * self.kappa_a
            else:
                scaled[key] = value
        return dataclasses.replace(self, **scaled)

    def mode_swapped(self) -> "SystemSpec":
        """Exchange the parameters of magnon 1 and magnon 2."""
        return dataclasses.replace(
            self,
            omega_1=self.omega_2, omega_2=self.omega_1,
            gamma_1=self.gamma_2, gamma_2=self.gamma_1,
            kappa_1=self.kappa_2, kappa_2=self.kappa_1,
        )


@dataclass(frozen=True)
class BathMoments:
    n_a: float
    n_1: float
    n_2: float
    big_n: float
    big_m: complex


def spec_violations(fields: dict) -> list[str]:
    """Return a message for every constraint broken by ``fields``.

    ``fields`` maps :class:`SystemSpec` field names to values.  Missing
    keys are not reported here; the dataclass constructor does that.
    """
    out = []
    for name in ("kappa_a", "kappa_1", "kappa_2"):
        if name in fields and not fields[name] > 0:
            out.append(f"{name} must be positive")
    for name in ("omega_a", "omega_1", "omega_2", "omega_s"):
        if name in fields and not fields[name] > 0:
            out.append(f"{name} must be positive")
    for name in ("gamma_1", "gamma_2", "lambda_opa", "squeeze_r", "temperature"):
        if name in fields and not fields[name] >= 0:
            out.append(f"{name} must be non-negative")
    for name, value in fields.items():
        if isinstance(value, (int, float)) and not math.isfinite(value):
            out.append(f"{name} must be finite")
    return out


def thermal_occupancy(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation of a mode at angular frequency ``omega``."""
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    if temperature < 0:
        raise ValueError(f"temperature must be non-negative, got {temperature!r}")
    energy, thermal = hbar * omega, k_B * temperature
    # exp(700) is near the float limit; occupation underflows to 0 beyond it
    if temperature == 0 or energy > 700 * thermal:
        return 0.0
    return 1.0 / math.expm1(energy / thermal)


def bath_moments(spec: SystemSpec) -> BathMoments:
    n_a = thermal_occupancy(spec.omega_a, spec.temperature)
    n_1 = thermal_occupancy(spec.omega_1, spec.temperature)
    n_2 = thermal_occupancy(spec.omega_2, spec.temperature)
    r = spec.squeeze_r
    ch, sh = math.cosh(r), math.sinh(r)
    big_n = n_a * ch**2 + (n_a + 1) * sh**2
    big_m = (1 + 2 * n_a) * complex(math.cos(spec.squeeze_theta), math.sin(spec.squeeze_theta)) * ch * sh
    return BathMoments(n_a=n_a, n_1=n_1, n_2=n_2, big_n=big_n, big_m=big_m)


def frequency_from_field(field: float) -> float:
    """Magnon angular frequency (rad/s) for a bias field in tesla."""
    if not field > 0:
        raise ValueError(f"bias field must be positive, got {field!r}")
    return GYROMAGNETIC_RATIO * field


def field_from_frequency(omega: float) -> float:
    if not omega > 0:
        raise ValueError(f"omega must be positive, got {omega!r}")
    return omega / GYROMAGNETIC_RATIO


def default_spec(squeeze_r: float = 0.0, lambda_opa: float = 0.0) -> SystemSpec:
    """Baseline parameters: all modes at 10 GHz and resonant with the drive,
    kappa_a/2pi = 5 MHz, kappa_1 = kappa_2 = kappa_a/5, Gamma_1 = Gamma_2 = 4 kappa_a,
    T = 20 mK, theta = phi = 0.

    ``lambda_opa`` is given in units of ``kappa_a``.
    """
    omega = TWO_PI * 10e9
    kappa_a = TWO_PI * 5e6
    return SystemSpec(
        omega_a=omega, omega_1=omega, omega_2=omega, omega_s=omega,
        gamma_1=4 * kappa_a, gamma_2=4 * kappa_a,
        lambda_opa=lambda_opa * kappa_a, phi_opa=0.0,
        kappa_a=kappa_a, kappa_1=kappa_a / 5, kappa_2=kappa_a / 5,
        squeeze_r=squeeze_r, squeeze_theta=0.0,
        temperature=20e-3,
    )
