# capacity_scenario.py
from typing import List, Tuple
import logging

import pandas as pd

from capacity.p_capacity import DEFAULT_SPACING, duality_components
from capacity.quadrilateral import Quadrilateral
from estimates.report import EstimateReport
from scenarios.base_scenario import BaseScenario, ScenarioResult

logger = logging.getLogger(__name__)

REFINEMENT_SLACK = 1.10


class CapacityScenario(BaseScenario):
    """Dualità Cap_p^{1/p} Cap_q^{1/q} = 1 sul quadrilatero configurato"""

    kind = "capacity"

    def _quadrilateral(self) -> Quadrilateral:
        return Quadrilateral.from_dict(self.cfg.geometry)

    def work_items(self) -> List[Tuple[float, float]]:
        hs = self.cfg.h_list or [float(self.cfg.grid.get("h", DEFAULT_SPACING))]
        return [(p, h) for p in self.cfg.p_values for h in hs]

    def describe(self, item) -> str:
        return f"p={item[0]:g}, h={item[1]:g}"

    def run_item(self, item: Tuple[float, float]) -> ScenarioResult:
        p, h = item
        quad = self._quadrilateral()
        row = duality_components(quad, p, self.solver_config(), h, strict=False)
        row.update({"h": h, "geometry": quad.name})
        error = abs(row["product"] - 1.0)
        passed = error <= self.cfg.duality_tolerance and row["converged"]
        note = f"{quad.name}, q={row['q']:.6g}" + ("" if row["converged"] else ", Kacanov non convergente")
        report = EstimateReport(name="capacity_duality", lhs=row["product"], rhs_core=1.0, ratio=row["product"],
                                passed=passed, note=note, h=h)
        report.extras["p"] = p
        return ScenarioResult(reports=[report], tables={"capacity": pd.DataFrame([row])})

    def finalize(self):
        """L'errore di dualità non cresce dimezzando h (per ogni p con più passi)"""
        table = self.result.tables.get("capacity")
        if table is None or table["h"].nunique() < 2:
            return
        for p, group in table.groupby("p", sort=False):
            group = group.sort_values("h", ascending=False)
            errors = (group["product"] - 1.0).abs().tolist()
            shrinking = all(b <= REFINEMENT_SLACK * a + 1e-6 for a, b in zip(errors, errors[1:]))
            report = EstimateReport.build("capacity_refinement", errors[-1], errors[0], passed=shrinking,
                                          note=f"errore di dualità sotto dimezzamento di h, p={p:g}")
            report.extras["p"] = p
            self.result.reports.append(report)
