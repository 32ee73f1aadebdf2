#!/usr/bin/env python3
"""Test di griglia, regioni, stencil e quadratura"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np
import pytest

from analytic.reference_functions import AronssonFunction, QuadraticSaddle
from config.errors import GridError, InvalidExponent, RegionError
from grid.fields import GridSpec, Region, ScalarField
from grid.quadrature import Quadrature
from grid.stencils import FiniteDifferences, infinity_laplacian


def test_grid_from_spacing():
    grid = GridSpec.from_spacing((0.5, 0.5), (1.0, 1.0), 1.0 / 32)
    assert grid.nodes == (33, 33)
    assert grid.shape == (33, 33)
    assert grid.h == pytest.approx(1.0 / 32)
    assert grid.bounds == (0.5, 1.5, 0.5, 1.5)
    assert grid.boundary_mask().sum() == 4 * 32


def test_grid_rejects_bad_input():
    with pytest.raises(GridError):
        GridSpec((0.0, 0.0), (1.0, 1.0), (2, 5))
    with pytest.raises(GridError):
        GridSpec((0.0, 0.0), (1.0, 2.0), (11, 11))
    with pytest.raises(GridError):
        GridSpec.from_spacing((0.0, 0.0), (1.0, 1.0), 0.0)


def test_coarsen_halves_the_grid():
    fine = GridSpec.from_spacing((0.0, 0.0), (1.0, 1.0), 1.0 / 32)
    assert fine.coarsened() == GridSpec.from_spacing((0.0, 0.0), (1.0, 1.0), 1.0 / 16)
    assert GridSpec((0.0, 0.0), (1.0, 1.0), (4, 4)).coarsened() is None


def test_margin_mask():
    grid = GridSpec.from_spacing((0.0, 0.0), (1.0, 1.0), 0.1)
    mask = grid.margin_mask(2)
    assert mask.sum() == 7 * 7
    assert not mask[1, 5] and mask[2, 5]


def test_region_masks_and_distances():
    grid = GridSpec.from_spacing((0.0, 0.0), (1.0, 1.0), 1.0 / 64)
    disk = Region.disk((0.5, 0.5), 0.25)
    area = Quadrature.measure(grid, disk)
    assert area == pytest.approx(np.pi * 0.25 ** 2, rel=0.03)

    square = Region.square((0.5, 0.5), 0.2)
    assert square.signed_distance(np.array(0.5), np.array(0.5), grid) == pytest.approx(0.2)
    assert Region.full_interior(0.1).mask(grid).sum() < grid.size

    with pytest.raises(RegionError):
        Region.disk((0.1, 0.5), 0.25).mask(grid)
    with pytest.raises(RegionError):
        Region.annulus((0.5, 0.5), 0.3, 0.2)


def test_stencils_exact_on_quadratics():
    grid = GridSpec.from_spacing((-1.0, -1.0), (2.0, 2.0), 1.0 / 16)
    u = QuadraticSaddle().sample(grid)
    hess = FiniteDifferences.hessian(u)
    assert np.allclose(hess.a11, 2.0) and np.allclose(hess.a22, -2.0)
    assert np.allclose(hess.a12, 0.0, atol=1e-9)
    grad = FiniteDifferences.gradient(u)
    X, Y = grid.mesh()
    assert np.allclose(grad.v1, 2.0 * X) and np.allclose(grad.v2, -2.0 * Y)
    assert np.allclose(FiniteDifferences.laplacian(u).values, 0.0, atol=1e-9)


def test_aronsson_infinity_laplacian_second_order():
    """Delta_inf discreto dei campioni esatti di w decade con ordine ~2"""
    ref = AronssonFunction()
    errors = []
    for h in (1.0 / 32, 1.0 / 64, 1.0 / 128):
        grid = GridSpec.from_spacing((0.5, 0.5), (1.0, 1.0), h)
        lap = infinity_laplacian(ref.sample(grid))
        errors.append(float(np.max(np.abs(lap.values[grid.margin_mask(2)]))))
    orders = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
    print(f"Errori Delta_inf: {errors}, ordini {orders}")
    assert np.all(orders >= 1.9)


def test_quadrature_and_norms():
    grid = GridSpec.from_spacing((0.0, 0.0), (1.0, 1.0), 1.0 / 32)
    ones = ScalarField.constant(grid, 1.0)
    region = Region.square((0.5, 0.5), 0.25)
    assert Quadrature.integrate(ones, region) == pytest.approx(Quadrature.measure(grid, region))
    assert Quadrature.lp_norm(ones * 2.0, 2.0, region) == pytest.approx(2.0 * Quadrature.measure(grid, region) ** 0.5)
    with pytest.raises(InvalidExponent):
        Quadrature.lp_norm(ones, 0.5, region)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
