#!/usr/bin/env python3
"""Test dei report delle stime integrali"""

import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import numpy as np
import pytest

from analytic.reference_functions import AronssonFunction, LinearFunction
from config.errors import DegenerateDistance, InvalidExponent
from estimates.inequalities import (
    APRIORI_CONSTANT,
    APRIORI_SLACK,
    flatness_report,
    flatness_sweep,
    inequality_report,
    least_squares_plane,
    liouville_quantity,
    max_principle_report,
    orthogonality_defect,
)
from estimates.report import EstimateReport, ratio_stability, reports_frame
from estimates.test_functions import SubdomainPair
from grid.fields import GridSpec, Region, ScalarField
from solvers.boundary import BoundaryData, RegularizationParams, SolverConfig
from solvers.regularized_solver import solve_dirichlet

SQUARE = ((0.5, 0.5), (1.0, 1.0))
CFG = SolverConfig(residual_tolerance=1e-7, max_outer_iterations=500)


def _pair(grid):
    return SubdomainPair.concentric_squares(grid, (1.0, 1.0), 0.2, 0.4)


def _linear_solution(h=1.0 / 32, eps=1e-2):
    grid = GridSpec.from_spacing(*SQUARE, h)
    g = BoundaryData.from_reference(LinearFunction(1.0, 0.5, 0.0))
    return solve_dirichlet(grid, g, RegularizationParams(epsilon=eps)), g


def test_linear_data_gives_zero_ratios():
    u, g = _linear_solution()
    params = RegularizationParams(epsilon=1e-2)
    pair = _pair(u.grid)
    for kind in ("caccioppoli", "apriori", "w12_limit"):
        report = inequality_report(kind, u, params, pair, alpha=1.0)
        print(f"{kind}: lhs={report.lhs:.3g} ratio={report.ratio:.3g}")
        assert report.ratio == 0.0 and report.passed
    assert max_principle_report(u, g, params, 1e-8).passed


def test_ratio_stability_across_eps_for_linear_data():
    reports = []
    for eps in (1e-1, 1e-2):
        u, _ = _linear_solution(eps=eps)
        params = RegularizationParams(epsilon=eps)
        reports.append(inequality_report("lp_gradient", u, params, _pair(u.grid), p=4.0))
    assert ratio_stability(reports)
    assert reports[0].extras["p"] == 4.0


def test_apriori_constant_on_aronsson_solution():
    grid = GridSpec.from_spacing(*SQUARE, 1.0 / 32)
    eps = 1e-2
    u = solve_dirichlet(grid, BoundaryData.from_name("aronsson"), RegularizationParams(epsilon=eps), CFG)
    report = inequality_report("apriori", u, RegularizationParams(epsilon=eps), _pair(grid))
    assert report.ratio <= APRIORI_CONSTANT * APRIORI_SLACK
    assert report.passed

    sob = inequality_report("sobolev_u", u, RegularizationParams(epsilon=eps, kappa=1e-4), _pair(grid), alpha=0.5)
    assert math.isfinite(sob.ratio) and sob.extras["extra_terms"] > 0

    defect = orthogonality_defect(u, eps, 1.0, Region.square((1.0, 1.0), 0.2))
    exact = orthogonality_defect(AronssonFunction().sample(grid), 0.0, 1.0, Region.square((1.0, 1.0), 0.2),
                                 reference=AronssonFunction())
    assert math.isfinite(defect) and exact <= 1e-10


def _aronsson_solution(h=1.0 / 32, eps=1e-2, cfg=CFG):
    grid = GridSpec.from_spacing(*SQUARE, h)
    return solve_dirichlet(grid, BoundaryData.from_name("aronsson"), RegularizationParams(epsilon=eps), cfg)


@pytest.mark.parametrize("kind", ["caccioppoli", "apriori", "w12_limit"])
@pytest.mark.parametrize("lam", [2.0, 0.5])
def test_ratios_invariant_under_scaling_and_shift(kind, lam):
    """u -> lambda u con eps -> lambda^2 eps, u -> u + c con lo stesso eps"""
    eps = 1e-2
    u = _aronsson_solution(eps=eps)
    pair = _pair(u.grid)
    base = inequality_report(kind, u, RegularizationParams(epsilon=eps), pair, alpha=1.0).ratio

    scaled = ScalarField(u.grid, lam * u.values)
    ratio = inequality_report(kind, scaled, RegularizationParams(epsilon=lam ** 2 * eps), pair, alpha=1.0).ratio
    assert ratio == pytest.approx(base, rel=1e-10)

    shifted = ScalarField(u.grid, u.values + 3.0)
    ratio = inequality_report(kind, shifted, RegularizationParams(epsilon=eps), pair, alpha=1.0).ratio
    assert ratio == pytest.approx(base, rel=1e-10)


def test_ratio_stability_on_aronsson_data():
    solutions = {(h, eps): _aronsson_solution(h, eps) for h in (1.0 / 32, 1.0 / 64) for eps in (1e-1, 1e-2)}
    cases = [("caccioppoli", {"alpha": a}) for a in (0.5, 1.0, 2.0)] + \
        [("w12_limit", {"alpha": a}) for a in (0.5, 1.0, 2.0)] + \
        [("sobolev_u", {"alpha": 1.0}), ("lp_gradient", {"p": 3.0}), ("lp_gradient", {"p": 4.0})]
    for kind, kwargs in cases:
        reports = [inequality_report(kind, u, RegularizationParams(epsilon=eps), _pair(u.grid), **kwargs)
                   for (h, eps), u in solutions.items()]
        print(f"{kind} {kwargs}: {[round(r.ratio, 4) for r in reports]}")
        assert ratio_stability(reports), f"{kind} {kwargs}"


def test_flatness_on_aronsson_data():
    """Su w liscia lambda ~ r e LHS ~ r^2: LHS/lambda decresce con il raggio"""
    grid = GridSpec.from_spacing(*SQUARE, 1.0 / 64)
    u = AronssonFunction().sample(grid)
    sweep = flatness_sweep(u, RegularizationParams(epsilon=1e-2), (1.0, 1.0), (0.2, 0.1, 0.05))
    assert all(r.passed for r in sweep)
    values = {r.extras["radius"]: r.extras["lhs_over_lambda"] for r in sweep}
    print(f"LHS/lambda: {values}")
    assert 0.0 < values[0.05] < values[0.2]


def test_orthogonality_defect_decreases_with_eps():
    region = Region.square((1.0, 1.0), 0.2)
    defects = [orthogonality_defect(_aronsson_solution(eps=eps), eps, 1.0, region) for eps in (1e-1, 1e-2, 1e-3)]
    print(f"Difetti: {defects}")
    assert defects[0] > defects[1] > defects[2]


@pytest.mark.slow
@pytest.mark.parametrize("h", [1.0 / 128, 1.0 / 256])
@pytest.mark.parametrize("eps", [1e-2, 1e-3])
def test_apriori_constant_on_fine_grids(h, eps):
    cfg = SolverConfig(residual_tolerance=1e-8, max_outer_iterations=1000, linear_solver="direct")
    u = _aronsson_solution(h, eps, cfg)
    report = inequality_report("apriori", u, RegularizationParams(epsilon=eps), _pair(u.grid))
    print(f"h={h:g} eps={eps:g}: ratio={report.ratio:.4g}")
    assert report.ratio <= APRIORI_CONSTANT * APRIORI_SLACK


def test_degenerate_distance():
    grid = GridSpec.from_spacing(*SQUARE, 1.0 / 16)
    u, _ = _linear_solution(h=1.0 / 16)
    pair = SubdomainPair.concentric_squares(grid, (1.0, 1.0), 0.2, 0.3)
    with pytest.raises(DegenerateDistance):
        inequality_report("caccioppoli", u, RegularizationParams(epsilon=1e-2), pair)
    fine, _ = _linear_solution(h=1.0 / 32)
    with pytest.raises(InvalidExponent):
        inequality_report("lp_gradient", fine, RegularizationParams(epsilon=1e-2), _pair(fine.grid), p=0.5)


def test_flatness_linear_data():
    u, _ = _linear_solution()
    params = RegularizationParams(epsilon=1e-2)
    plane = LinearFunction(1.0, 0.5, 0.0)
    report = flatness_report(u, params, (1.0, 1.0), 0.2, comparison=plane)
    assert report.lhs <= 1e-10
    assert report.extras["comparison"] == plane.name

    sweep = flatness_sweep(u, params, (1.0, 1.0), (0.2, 0.1, 0.05))
    assert len(sweep) == 3 and all(r.passed for r in sweep)

    fitted = least_squares_plane(u, Region.disk((1.0, 1.0), 0.2).mask(u.grid))
    assert fitted.a == pytest.approx(1.0) and fitted.b == pytest.approx(0.5)

    with pytest.raises(DegenerateDistance):
        flatness_report(u, params, (1.0, 1.0), 0.3)


def test_liouville_requires_p_above_two():
    with pytest.raises(InvalidExponent):
        liouville_quantity(LinearFunction(), 2.0, 1.0)


def test_report_helpers():
    report = EstimateReport.build("prova", 1e-30, 1.0, zero_tolerance=1e-20)
    assert report.ratio == 0.0 and report.passed
    assert EstimateReport.safe_ratio(1.0, 0.0) == math.inf
    assert not EstimateReport.build("prova", 1.0, 0.0).passed
    frame = reports_frame([report])
    assert list(frame.columns)[:5] == ["name", "lhs", "rhs_core", "ratio", "pass"]
    unstable = [EstimateReport.build("r", 1.0, 1.0), EstimateReport.build("r", 3.0, 1.0)]
    assert not ratio_stability(unstable)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
