import math

import numpy as np
import pytest
from scipy.linalg import expm

from magnon_steering import default_spec, solve_spec
from magnon_steering.dynamics import is_physical, symplectic_form
from magnon_steering.measures import (
    ComplexEigenvalue,
    DegenerateCM,
    NonPositiveVariance,
    cross_moment,
    det2,
    det4,
    gaussian_steering,
    log_negativity,
    metrics_from_cm,
    moment_steering_criterion,
    populations,
    reduce_cm,
    squeezing_db,
    steering_asymmetry,
    two_mode_squeezed_vacuum,
)

SWAP4 = [2, 3, 0, 1]


def random_two_mode_state(rng, max_squeeze=1.5):
    """Random physical 4x4 CM: S diag(nu) S^T with S = expm(Omega H) symplectic."""
    omega = symplectic_form(2)
    h = rng.normal(size=(4, 4)) * max_squeeze / 2
    s = expm(omega @ (h + h.T) / 2)
    nu = 0.5 + rng.exponential(0.5, size=2)
    return s @ np.diag(np.repeat(nu, 2)) @ s.T


def rotation(t):
    return np.array([[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])


def test_det4_matches_lu():
    rng = np.random.default_rng(0)
    for _ in range(50):
        m = rng.normal(size=(4, 4))
        assert det4(m) == pytest.approx(np.linalg.det(m), rel=1e-10, abs=1e-12)
        assert det2(m[:2, :2]) == pytest.approx(np.linalg.det(m[:2, :2]), rel=1e-12, abs=1e-14)


def test_reduce_cm_selects_magnons():
    sigma = np.arange(36, dtype=float).reshape(6, 6)
    np.testing.assert_array_equal(reduce_cm(sigma, (1, 2)), sigma[2:, 2:])
    sr = reduce_cm(0.5 * np.eye(6))
    np.testing.assert_array_equal(sr, 0.5 * np.eye(4))


def test_reduce_cm_swap_exchanges_blocks():
    sigma = solve_spec(default_spec(1.0, 0.3).in_kappa_units(gamma_2=5.0))
    a, b = reduce_cm(sigma, (1, 2)), reduce_cm(sigma, (2, 1))
    np.testing.assert_array_equal(b[:2, :2], a[2:, 2:])
    np.testing.assert_array_equal(b[2:, 2:], a[:2, :2])
    np.testing.assert_array_equal(b[:2, 2:], a[:2, 2:].T)


@pytest.mark.parametrize("modes", [(1, 1), (0, 3), (-1, 2)])
def test_reduce_cm_bad_indices(modes):
    with pytest.raises(IndexError):
        reduce_cm(0.5 * np.eye(6), modes)


def test_squeezing_values():
    assert squeezing_db(0.5 * np.eye(6), 2) == 0.0
    assert squeezing_db(np.diag([0.25, 1.0]), 0) == pytest.approx(10 * math.log10(2), rel=1e-14)
    assert squeezing_db(np.diag([0.25, 1.0]), 1) == pytest.approx(-10 * math.log10(2), rel=1e-14)


def test_squeezing_monotone():
    vals = [squeezing_db(np.array([[v]]), 0) for v in np.linspace(0.05, 3, 40)]
    assert all(x > y for x, y in zip(vals, vals[1:]))


@pytest.mark.parametrize("v", [0.0, -0.1])
def test_squeezing_rejects_nonpositive(v):
    with pytest.raises(NonPositiveVariance):
        squeezing_db(np.array([[v]]), 0)


def test_symmetric_baseline_equal_squeezing():
    sigma = solve_spec(default_spec(1.3, 0.4))
    assert squeezing_db(sigma, 2) == pytest.approx(squeezing_db(sigma, 4), abs=1e-10)


def test_vacuum_measures_zero():
    sr = 0.5 * np.eye(4)
    assert log_negativity(sr) == 0.0
    assert log_negativity(sr, clamp=False) == pytest.approx(0.0, abs=1e-15)
    assert gaussian_steering(sr, "1->2") == 0.0
    assert gaussian_steering(sr, "2->1") == 0.0


@pytest.mark.parametrize("s", [0.1, 0.5, 1.0, 1.7])
def test_two_mode_squeezed_vacuum(s):
    sr = two_mode_squeezed_vacuum(s)
    assert log_negativity(sr) == pytest.approx(2 * s, abs=1e-9)
    for d in ("1->2", "2->1"):
        assert gaussian_steering(sr, d) == pytest.approx(math.log(math.cosh(2 * s)), abs=1e-9)


def test_opa_alone_entangles_without_steering():
    sr = reduce_cm(solve_spec(default_spec(0.0, 0.49)))
    assert log_negativity(sr) > 0
    assert gaussian_steering(sr, "1->2") == 0 and gaussian_steering(sr, "2->1") == 0
    assert gaussian_steering(sr, "1->2", clamp=False) < 0


def test_log_negativity_rejects_unphysical():
    sr = np.diag([0.1, 0.1, 0.5, 0.5])
    sr[0, 2] = sr[2, 0] = 2.0
    with pytest.raises(ComplexEigenvalue):
        log_negativity(sr)


def test_steering_rejects_degenerate():
    sr = np.diag([1.0, 0.0, 1.0, 1.0])
    with pytest.raises(DegenerateCM):
        gaussian_steering(sr)
    with pytest.raises(ValueError):
        gaussian_steering(0.5 * np.eye(4), "sideways")


def test_steering_asymmetry():
    assert steering_asymmetry(0.3, 0.3) == 0
    assert steering_asymmetry(0.5, 0.0) == 0.5
    assert steering_asymmetry(0.1, 0.4) == pytest.approx(0.3)
    with pytest.raises(ValueError):
        steering_asymmetry(-0.1, 0.2)


def test_symmetric_baseline_no_asymmetry():
    rec = metrics_from_cm(solve_spec(default_spec(1.0, 0.49)))
    assert rec.gs == pytest.approx(0.0, abs=1e-10)


def test_populations():
    assert populations(0.5 * np.eye(6)) == (0.0, 0.0, 0.0)
    sigma = np.diag([0.5, 0.5, 3.25, 3.25, 0.7, 0.9])
    assert populations(sigma) == pytest.approx((0.0, 2.75, 0.3))


def test_cross_moment_two_mode_squeezed():
    for s in (0.2, 0.8):
        sigma = np.eye(6) * 0.5
        sigma[2:, 2:] = two_mode_squeezed_vacuum(s)
        assert abs(cross_moment(sigma)) == pytest.approx(math.sinh(2 * s) / 2, rel=1e-14)
        assert populations(sigma)[1] == pytest.approx(math.sinh(s) ** 2, rel=1e-12)
        c12, c21, _ = moment_steering_criterion(sigma)
        assert c12 and c21


def test_moment_criterion_vacuum():
    c12, c21, m = moment_steering_criterion(0.5 * np.eye(6))
    assert m == 0 and not c12 and not c21


def test_moment_criterion_cross_check_recorded():
    """Compare the moment criterion with the Gaussian steering measure.

    The two are not claimed equivalent, so disagreements are reported and
    only the one-sided relation observed numerically is asserted.
    """
    base = default_spec(1.0, 0.49)
    disagreements = []
    for ratio in np.linspace(0.5, 2.0, 31):
        sigma = solve_spec(base.replace(gamma_2=ratio * base.gamma_1))
        c12, c21, _ = moment_steering_criterion(sigma)
        rec = metrics_from_cm(sigma)
        for name, crit, g in (("1->2", c12, rec.g12), ("2->1", c21, rec.g21)):
            if crit != (g > 0):
                disagreements.append((round(ratio, 3), name, crit, g))
            if crit:
                assert g > 0
    print(f"moment criterion disagrees with G>0 at {len(disagreements)} of 62 checks")
    for d in disagreements:
        print("  ratio={} dir={} moment={} G={:.4g}".format(*d))


def test_random_states_hierarchy_and_symmetries():
    rng = np.random.default_rng(7)
    for _ in range(300):
        sr = random_two_mode_state(rng)
        assert is_physical(sr, 1e-9)
        e = log_negativity(sr)
        g12, g21 = gaussian_steering(sr, "1->2"), gaussian_steering(sr, "2->1")
        if g12 > 0 or g21 > 0:
            assert e > 0
        swapped = sr[np.ix_(SWAP4, SWAP4)]
        assert gaussian_steering(swapped, "1->2") == pytest.approx(g21, abs=1e-12)
        assert gaussian_steering(swapped, "2->1") == pytest.approx(g12, abs=1e-12)
        assert log_negativity(swapped) == pytest.approx(e, abs=1e-12)
        rot = np.zeros((4, 4))
        rot[:2, :2], rot[2:, 2:] = rotation(rng.uniform(0, 6.3)), rotation(rng.uniform(0, 6.3))
        turned = rot @ sr @ rot.T
        assert log_negativity(turned) == pytest.approx(e, abs=1e-9)
        t12, t21 = gaussian_steering(turned, "1->2"), gaussian_steering(turned, "2->1")
        assert t12 == pytest.approx(g12, abs=1e-9)
        assert t21 == pytest.approx(g21, abs=1e-9)
        assert steering_asymmetry(t12, t21) == pytest.approx(abs(g12 - g21), abs=1e-9)


def test_metrics_record_fields():
    rec = metrics_from_cm(solve_spec(default_spec(1.0, 0.3).in_kappa_units(gamma_2=5.0)), -0.2)
    assert rec.stable and rec.margin == -0.2
    assert rec.gs == abs(rec.g12 - rec.g21)
    assert rec.e12 >= 0 and rec.g12 >= 0 and rec.g21 >= 0
    assert rec.g12 == max(0.0, rec.g12_raw)
    assert len(rec.values()) == len(rec.columns())
