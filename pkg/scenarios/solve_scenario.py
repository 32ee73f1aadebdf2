# solve_scenario.py
from typing import List
import logging

from estimates.inequalities import max_principle_report
from estimates.report import EstimateReport
from scenarios.base_scenario import BaseScenario, ScenarioResult
from solvers.boundary import RegularizationParams
from solvers.regularized_solver import RegularizedSolver, residual_norm

logger = logging.getLogger(__name__)


class SolveScenario(BaseScenario):
    """Una soluzione regolarizzata per ogni eps: campo, residuo e principio del massimo"""

    kind = "solve"

    def work_items(self) -> List[float]:
        return list(self.cfg.epsilons)

    def describe(self, item) -> str:
        return f"eps={item:g}"

    def run_item(self, eps: float) -> ScenarioResult:
        grid = self.build_grid()
        g = self.build_boundary(grid)
        params = RegularizationParams(epsilon=eps)
        solver_cfg = self.solver_config()
        solver = RegularizedSolver(grid, params, solver_cfg)
        u = solver.solve(g)

        residual = residual_norm(u, eps, solver_cfg.margin_cells)
        meta = {"h": grid.h, "epsilon": eps}
        reports = [
            EstimateReport.build("pde_residual", residual, solver_cfg.residual_tolerance,
                                 passed=residual <= solver_cfg.residual_tolerance,
                                 note=f"{solver.iterations} iterazioni di Picard", **meta),
            max_principle_report(u, g, params, solver_cfg.residual_tolerance),
        ]
        return ScenarioResult(reports=reports, fields={f"u_eps{eps:g}": u})
