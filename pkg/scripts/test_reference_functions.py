#!/usr/bin/env python3
"""Test delle funzioni di riferimento e del registro"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np
import pytest

from analytic.reference_functions import (
    AronssonFunction,
    ConeFunction,
    LinearFunction,
    aronsson_fields,
    get_reference,
    list_references,
    offset_grid,
)
from config.errors import SingularNode
from estimates.functional import determinant_identity_residual
from estimates.inequalities import liouville_quantity
from grid.fields import GridSpec


def _off_axis_points(count: int = 200):
    rng = np.random.default_rng(7)
    x = rng.uniform(0.05, 2.0, count) * rng.choice([-1.0, 1.0], count)
    y = rng.uniform(0.05, 2.0, count) * rng.choice([-1.0, 1.0], count)
    return x, y


def test_aronsson_is_infinity_harmonic_off_axes():
    w = AronssonFunction()
    x, y = _off_axis_points()
    g1, g2 = w.gradient(x, y)
    a11, a12, a22 = w.hessian(x, y)
    inf_lap = g1 * g1 * a11 + 2.0 * g1 * g2 * a12 + g2 * g2 * a22
    assert np.max(np.abs(inf_lap)) <= 1e-12


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_speed_power_gradient_orthogonal_to_gradient(alpha):
    w = AronssonFunction()
    x, y = _off_axis_points()
    d1, d2 = w.speed_power_gradient(x, y, alpha)
    g1, g2 = w.gradient(x, y)
    assert np.max(np.abs(d1 * g1 + d2 * g2)) <= 1e-12


def test_speed_closed_form_matches_gradient():
    w = AronssonFunction()
    x, y = _off_axis_points()
    g1, g2 = w.gradient(x, y)
    assert np.allclose(w.speed(x, y), np.hypot(g1, g2), rtol=1e-13)
    n = w.speed_squared_gradient_norm(x, y)
    s1, s2 = w.speed_squared_gradient(x, y)
    assert np.allclose(n, np.hypot(s1, s2), rtol=1e-13)


def test_singular_hessian_sampling():
    grid = GridSpec.from_spacing((-0.5, -0.5), (1.0, 1.0), 0.25)
    with pytest.raises(SingularNode):
        AronssonFunction().sample_hessian(grid)
    # spostata di h/2 la griglia non ha nodi sugli assi
    value, grad, hess, speed = aronsson_fields(offset_grid(grid))
    assert hess is not None and np.all(np.isfinite(hess.a11))
    assert np.allclose(speed.values, grad.norm())


def test_determinant_identity_random_pairs():
    rng = np.random.default_rng(0)
    A = rng.normal(size=(100, 2, 2))
    H = 0.5 * (A + np.transpose(A, (0, 2, 1)))
    g = rng.normal(size=(100, 2))
    assert determinant_identity_residual(H, g) <= 1e-12


def test_registry():
    names = [name for name, _ in list_references()]
    assert "aronsson" in names and "linear" in names
    linear = get_reference("linear", a=2.0, b=-1.0, c=0.5)
    assert isinstance(linear, LinearFunction)
    assert float(linear.value(np.array(1.0), np.array(1.0))) == pytest.approx(1.5)
    with pytest.raises(KeyError):
        get_reference("nonexistent")


def test_tangent_plane_of_cone():
    cone = ConeFunction()
    plane = LinearFunction.tangent_plane(cone, (3.0, 4.0))
    assert plane.a == pytest.approx(0.6) and plane.b == pytest.approx(0.8)
    assert float(plane.value(np.array(3.0), np.array(4.0))) == pytest.approx(5.0)


def test_liouville_quantity():
    """(1/R)(R^{-2} int_{B_R} |x1|^4)^{1/4} = (pi/8)^{1/4} per ogni R"""
    linear = LinearFunction(1.0, 0.0, 0.0)
    for R in (1.0, 8.0):
        assert liouville_quantity(linear, 4.0, R) == pytest.approx((np.pi / 8.0) ** 0.25, abs=1e-3)
    constant = LinearFunction(0.0, 0.0, 1.0)
    q1, q8 = liouville_quantity(constant, 4.0, 1.0), liouville_quantity(constant, 4.0, 8.0)
    assert q1 / q8 == pytest.approx(8.0, rel=1e-9)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
