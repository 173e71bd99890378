"""Acceptance suite: one test per criterion, reported PASS/FAIL in the
terminal summary.  Criterion 9 checks every covariance matrix produced by
the other criteria, so it runs last.
"""
import time

import numpy as np
import pytest

from magnon_steering import default_spec
from magnon_steering import experiments as ex
from magnon_steering.dynamics import (
    diffusion_matrix,
    drift_matrix,
    integrate_to_steady_state,
    lyapunov_residual,
    physicality_min_eig,
    steady_state_cm,
)
from magnon_steering.experiments import Axis
from magnon_steering.measures import (
    gaussian_steering,
    log_negativity,
    metrics_from_cm,
    two_mode_squeezed_vacuum,
)

from conftest import random_spec, random_stable_specs

PRODUCED = []


@pytest.fixture(scope="module", autouse=True)
def record_states():
    """Keep every steady-state CM the experiments layer computes."""
    def recording(a, f):
        sigma = steady_state_cm(a, f)
        PRODUCED.append(sigma)
        return sigma

    with pytest.MonkeyPatch.context() as mp:
        mp.setattr(ex, "steady_state_cm", recording)
        yield


def solve(spec):
    sigma = steady_state_cm(drift_matrix(spec), diffusion_matrix(spec))
    PRODUCED.append(sigma)
    return sigma


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


@pytest.mark.criterion(1, "vacuum fixed point")
def test_c01_vacuum_fixed_point():
    with Timer() as t:
        sigma = solve(default_spec(0.0, 0.0).replace(temperature=0.0))
        rec = metrics_from_cm(sigma)
    assert np.abs(sigma - 0.5 * np.eye(6)).max() < 1e-12
    for name in ("s_x1", "s_y1", "s_x2", "s_y2", "e12", "g12", "g21", "gs", "pop_a", "pop_1", "pop_2"):
        assert getattr(rec, name) == 0.0, name
    assert t.elapsed < 1.0


@pytest.mark.criterion(2, "Lyapunov solve agrees with ODE integration")
def test_c02_oracle_equivalence():
    with Timer() as t:
        specs = random_stable_specs(2024, 100)
        a = np.array([drift_matrix(s) for s in specs])
        f = np.array([diffusion_matrix(s) for s in specs])
        direct = np.array([solve(s) for s in specs])
        ode = integrate_to_steady_state(a, f)
    assert np.abs(direct - ode).max() < 1e-6
    for i in range(len(specs)):
        assert lyapunov_residual(a[i], f[i], direct[i]) <= 1e-10
    assert t.elapsed < 30.0


@pytest.mark.criterion(3, "max stable OPA gain on the baseline in [0.48, 0.50]")
def test_c03_stability_bound():
    with Timer() as t:
        lam_max = ex.max_stable_gain(default_spec())
    print(f"baseline max stable gain = {lam_max:.6f} kappa_a")
    assert t.elapsed < 5.0
    assert 0.48 <= lam_max <= 0.50


@pytest.mark.criterion(4, "no steering without the squeezed drive")
def test_c04_no_steering_without_squeezing():
    with Timer() as t:
        base = default_spec()
        lam_max = ex.max_stable_gain(base)
        lams = np.linspace(0.0, lam_max, 20, endpoint=False)
        recs = [ex.metrics(base.in_kappa_units(lambda_opa=lam)) for lam in lams]
    for rec in recs:
        assert rec.stable
        assert rec.g12_raw <= 0 and rec.g21_raw <= 0
    assert recs[-1].e12 > 0
    assert t.elapsed < 5.0


@pytest.mark.criterion(5, "equal couplings give equal steering and squeezing")
def test_c05_symmetric_degeneracy():
    rng = np.random.default_rng(5)
    for _ in range(21):
        rec = ex.metrics(default_spec(rng.uniform(0, 2), rng.uniform(0, 0.49)))
        assert abs(rec.g12 - rec.g21) < 1e-10
        assert abs(rec.g12_raw - rec.g21_raw) < 1e-10
        assert abs(rec.s_x1 - rec.s_x2) < 1e-10


@pytest.mark.criterion(6, "steering peak ratios and their reciprocity")
def test_c06_peak_ratios():
    with Timer() as t:
        _, peaks = ex.fig3_fig4_ratio_sweep()
    p12, p21 = peaks["G12"].location, peaks["G21"].location
    print(f"peak G12 at {p12:.4f}, peak G21 at {p21:.4f}, 1/p12 = {1 / p12:.4f}")
    assert t.elapsed < 30.0
    assert 0.80 <= p12 <= 0.95
    assert 1.15 <= p21 <= 1.40
    assert abs(p21 * p12 - 1.0) <= 0.05


@pytest.mark.criterion(7, "OPA roughly doubles peak steering")
def test_c07_opa_doubling():
    with Timer() as t:
        _, with_opa = ex.fig3_fig4_ratio_sweep(with_opa=True)
        _, without = ex.fig3_fig4_ratio_sweep(with_opa=False)
    best = [max(p["G12"].value, p["G21"].value) for p in (with_opa, without)]
    print(f"peak steering with OPA {best[0]:.5f}, without {best[1]:.5f}, ratio {best[0] / best[1]:.3f}")
    assert 1.4 <= best[0] / best[1] <= 2.6
    assert t.elapsed < 30.0


@pytest.mark.criterion(8, "critical temperatures for steering and entanglement")
def test_c08_thermal_robustness():
    with Timer() as t:
        t_steer = ex.fig6_temperature_threshold(metric="steering", r=2.0, lambda_opa=0.49)
        t_ent = ex.fig6_temperature_threshold(metric="entanglement", r=2.0, lambda_opa=0.49)
    print(f"T_c steering {t_steer * 1e3:.1f} mK, entanglement {t_ent * 1e3:.1f} mK")
    assert 0.270 <= t_steer <= 0.370
    assert 0.600 <= t_ent <= 0.800
    assert t.elapsed < 60.0


@pytest.mark.criterion(10, "mode swap exchanges the steering directions")
def test_c10_mode_swap():
    rng = np.random.default_rng(10)
    done = 0
    while done < 50:
        s = random_spec(rng).in_kappa_units(kappa_1=rng.uniform(0.1, 0.5), kappa_2=rng.uniform(0.1, 0.5))
        rec, _ = ex.evaluate_point(s)
        if not rec.stable:
            continue
        swapped, _ = ex.evaluate_point(s.mode_swapped())
        assert abs(swapped.g12_raw - rec.g21_raw) < 1e-10
        assert abs(swapped.g21_raw - rec.g12_raw) < 1e-10
        assert abs(swapped.e12 - rec.e12) < 1e-10
        done += 1


@pytest.mark.criterion(11, "analytic oracles")
def test_c11_analytic_oracles():
    for s in (0.1, 0.5, 1.0):
        sr = two_mode_squeezed_vacuum(s)
        assert log_negativity(sr) == pytest.approx(2 * s, abs=1e-9)
        for d in ("1->2", "2->1"):
            assert gaussian_steering(sr, d) == pytest.approx(np.log(np.cosh(2 * s)), abs=1e-9)
    bare = default_spec().in_kappa_units(gamma_1=0, gamma_2=0)
    assert abs(ex.max_stable_gain(bare) - 0.5) < 1e-4


@pytest.mark.criterion(9, "every state physical and steering implies entanglement")
def test_c09_physicality_suite():
    # the ratio and temperature scans of criteria 6-8 are the bulk of the states
    assert len(PRODUCED) > 300
    worst = min(physicality_min_eig(sigma) for sigma in PRODUCED)
    print(f"{len(PRODUCED)} states, smallest eigenvalue of sigma + i Omega/2 = {worst:.3g}")
    assert worst >= -1e-9
    for sigma in PRODUCED:
        rec = metrics_from_cm(sigma)
        if rec.g12 > 0 or rec.g21 > 0:
            assert rec.e12 > 0
