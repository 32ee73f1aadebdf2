#!/usr/bin/env python3
"""Test dell'equazione duale e della misura singolare sugli assi"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np
import pytest

from analytic.reference_functions import AronssonDualFunction, HalfSquaredDistance
from capacity.dual_equation import curvature_residual, dual_equation_residual, line_value, singular_measure_check
from config.errors import DegenerateGradient
from estimates.test_functions import TestFunction
from grid.fields import GridSpec, Region

SQUARE = GridSpec.from_spacing((0.5, 0.5), (1.0, 1.0), 1.0 / 64)
INTERIOR = Region.full_interior(2.0 / 64)


def test_analytic_residual_vanishes():
    residual = dual_equation_residual(AronssonDualFunction(), INTERIOR, grid=SQUARE)
    assert np.max(np.abs(residual.values)) <= 1e-10


def test_discrete_residual_decreases_with_h():
    errors = []
    for h in (1.0 / 16, 1.0 / 32, 1.0 / 64):
        grid = GridSpec.from_spacing((0.5, 0.5), (1.0, 1.0), h)
        region = Region.full_interior(2.0 * h)
        residual = dual_equation_residual(AronssonDualFunction().sample(grid), region)
        errors.append(float(np.max(np.abs(residual.values))))
    assert errors[2] < errors[1] < errors[0]


def test_half_squared_distance_is_not_a_solution():
    """|x|^2/2 ha curvatura -1/|x| mentre |Dv|/(2v) = 1/|x|"""
    residual = dual_equation_residual(HalfSquaredDistance(), INTERIOR, grid=SQUARE)
    X, Y = SQUARE.mesh()
    mask = INTERIOR.mask(SQUARE)
    assert np.allclose(residual.values[mask], -2.0 / np.hypot(X, Y)[mask])


def test_degenerate_gradient():
    grid = GridSpec.from_spacing((-0.5, -0.5), (1.0, 1.0), 1.0 / 16)
    with pytest.raises(DegenerateGradient):
        dual_equation_residual(HalfSquaredDistance(), Region.disk((0.0, 0.0), 0.25), grid=grid)


def test_curvature_residual_formula():
    # v = x: curvatura nulla, |Dv|/(2v) = 1/(2x)
    value = curvature_residual(np.array(2.0), np.array(1.0), np.array(0.0), 0.0, 0.0, 0.0)
    assert float(value) == pytest.approx(-0.25)


@pytest.mark.parametrize("center", [(1.0, 0.0), (1.0, 1.0), (0.0, 0.0)])
def test_singular_measure_matches_line_integrals(center):
    phi = TestFunction(center=center, radius=0.5)
    f_value, line = singular_measure_check(phi)
    print(f"phi in {center}: f={f_value:.6f}, linea={line:.6f}")
    if line == 0:
        assert abs(f_value) <= 1e-3
    else:
        assert f_value == pytest.approx(line, rel=0.02)


def test_line_value_closed_form():
    phi = TestFunction(center=(1.0, 0.0), radius=0.5)
    assert line_value(phi) == pytest.approx(-2.0 * phi.line_integral_exact("x"), rel=1e-8)
    assert line_value(TestFunction(center=(1.0, 1.0), radius=0.5)) == 0.0


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
