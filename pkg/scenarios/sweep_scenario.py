# sweep_scenario.py
from typing import List
import logging

import numpy as np

from estimates.convergence import convergence_study
from estimates.report import EstimateReport
from scenarios.base_scenario import BaseScenario, ScenarioResult
from solvers.amle_solver import amle_cross_check
from solvers.boundary import RegularizationParams
from solvers.regularized_solver import solve_dirichlet

logger = logging.getLogger(__name__)

# scarto ammesso tra u^eps (eps minimo) e il candidato AMLE, relativo all'oscillazione di g
AMLE_GAP_FRACTION = 0.1


class SweepScenario(BaseScenario):
    """Studio di convergenza eps -> 0 e, a richiesta, confronto con lo schema AMLE"""

    kind = "sweep"

    def work_items(self) -> List[str]:
        return ["convergence", "amle"] if self.cfg.amle else ["convergence"]

    def run_item(self, item: str) -> ScenarioResult:
        if item == "amle":
            return self._amle_item()

        grid = self.build_grid()
        region = self.build_region(self.cfg.regions["V"], "V") if "V" in self.cfg.regions else None
        study = convergence_study(self.build_boundary(grid), self.cfg.epsilons, self.cfg.h_list,
                                  self.cfg.p_values, origin=grid.origin, extent=grid.extent,
                                  reference=self.reference(), alphas=self.cfg.alphas,
                                  cfg=self.solver_config(), region=region)
        table = study.table
        finest = table[table["h"] == table["h"].min()] if len(table) else table
        worst = float(finest["sup_error"].max()) if len(finest) else 0.0
        best = float(finest["sup_error"].min()) if len(finest) else 0.0
        report = EstimateReport.build("convergence", best, worst, passed=study.passed,
                                      note="errori monotoni in eps, Lipschitz entro 2x")
        report.extras["error_columns"] = study.error_columns
        return ScenarioResult(reports=[report], tables={"convergence": table})

    def _amle_item(self) -> ScenarioResult:
        h = min(self.cfg.h_list) if self.cfg.h_list else None
        grid = self.build_grid(h)
        g = self.build_boundary(grid)
        solver_cfg = self.solver_config()
        eps = min(self.cfg.epsilons)
        u = solve_dirichlet(grid, g, RegularizationParams(epsilon=eps), solver_cfg)
        candidate = amle_cross_check(grid, g, solver_cfg)

        ring = g.sample(grid)[grid.boundary_mask()]
        oscillation = float(np.max(ring) - np.min(ring))
        gap = float(np.max(np.abs(u.values - candidate.values)))
        allowed = AMLE_GAP_FRACTION * oscillation
        report = EstimateReport.build("amle_gap", gap, allowed, passed=gap <= allowed,
                                      note="sup |u^eps - AMLE| sulla griglia più fine", h=grid.h, epsilon=eps)
        return ScenarioResult(reports=[report], fields={f"amle_h{grid.h:g}": candidate})
