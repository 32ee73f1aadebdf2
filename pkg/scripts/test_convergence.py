#!/usr/bin/env python3
"""Test dello studio di convergenza eps -> 0"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from analytic.reference_functions import AronssonFunction, LinearFunction
from config.errors import GridError
from estimates.convergence import convergence_study, observed_orders
from solvers.boundary import BoundaryData, SolverConfig

CFG = SolverConfig(residual_tolerance=1e-7, max_outer_iterations=500)


def test_linear_reference_errors_vanish():
    ref = LinearFunction(0.3, 0.4, 0.0)
    study = convergence_study(BoundaryData.from_reference(ref), [1e-1, 1e-2], [1.0 / 16], [2.0], reference=ref, cfg=CFG)
    assert study.passed
    assert len(study.table) == 2
    assert study.table["sup_error"].max() <= 1e-8
    assert study.table["lipschitz"].tolist() == pytest.approx([0.5, 0.5])


def test_aronsson_errors_decrease_with_eps():
    ref = AronssonFunction()
    study = convergence_study(BoundaryData.from_reference(ref), [1e-1, 1e-2], [1.0 / 16, 1.0 / 32], [2.0, 4.0],
                              reference=ref, alphas=[1.0], cfg=CFG)
    print(study.table)
    assert list(study.table.columns) == ["epsilon", "h", "sup_error", "grad_error_p2", "grad_error_p4",
                                         "speed_power_error_a1_p2", "speed_power_error_a1_p4", "lipschitz"]
    assert len(study.table) == 4
    assert study.passed
    finest = study.table[study.table["h"] == 1.0 / 32]
    assert finest["sup_error"].min() <= 5e-2


@pytest.mark.slow
def test_aronsson_fine_grid_small_eps():
    ref = AronssonFunction()
    cfg = SolverConfig(residual_tolerance=1e-8, max_outer_iterations=1000, linear_solver="direct")
    study = convergence_study(BoundaryData.from_reference(ref), [1e-1, 1e-2, 1e-3], [1.0 / 128], [2.0],
                              reference=ref, cfg=cfg)
    errors = study.table.sort_values("epsilon", ascending=False)["sup_error"].tolist()
    print(f"Errori sup: {errors}")
    assert all(b <= 1.05 * a for a, b in zip(errors, errors[1:]))
    assert errors[-1] <= 5e-2


def test_observed_orders():
    orders = observed_orders([0.25, 0.5, 0.125], [1e-2, 4e-2, 2.5e-3])
    assert orders == pytest.approx([2.0, 2.0])
    assert observed_orders([0.5, 0.25], [1e-3, 1e-14], floor=1e-12) == [math.inf]
    assert observed_orders([0.5], [1.0]) == []


def test_surrogate_reference_requires_nested_grids():
    g = BoundaryData.from_name("aronsson")
    study = convergence_study(g, [1e-1, 5e-2], [1.0 / 8, 1.0 / 16], [2.0], cfg=CFG)
    assert len(study.table) == 4
    with pytest.raises(GridError):
        convergence_study(g, [1e-1], [1.0 / 16, 1.0 / 24], [2.0], cfg=CFG)


def test_empty_sweep():
    study = convergence_study(BoundaryData.from_name("aronsson"), [], [1.0 / 16], [2.0])
    assert study.passed and study.table.empty


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
