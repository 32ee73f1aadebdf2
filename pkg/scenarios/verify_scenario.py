# verify_scenario.py
"""
Verifica delle identità e delle stime su soluzioni calcolate, per ogni coppia
(eps, h): report singoli più la stabilità dei rapporti lungo lo sweep.
"""

from typing import Dict, List, Tuple
import logging
import math

from estimates.convergence import observed_orders
from estimates.functional import pointwise_identity_check
from estimates.inequalities import (
    flatness_sweep,
    inequality_report,
    max_principle_report,
    orthogonality_defect,
)
from estimates.report import EstimateReport, ratio_stability
from estimates.test_functions import SubdomainPair
from grid.fields import GridSpec
from scenarios.base_scenario import BaseScenario, ScenarioResult
from solvers.boundary import RegularizationParams
from solvers.regularized_solver import solve_dirichlet

logger = logging.getLogger(__name__)

ALG2X2_TOLERANCE = 1e-12
NONNEG_DET_SLACK = 0.5
ORTHOGONALITY_SLACK = 1.10
ORTHOGONALITY_FLOOR = 1e-8
KEY_II_MIN_ORDER = 0.9
# media L1 sotto questa soglia: residuo già nullo (dati lineari)
KEY_II_FLOOR = 1e-10


class VerifyScenario(BaseScenario):
    kind = "verify"

    def work_items(self) -> List[Tuple[float, float]]:
        hs = self.cfg.h_list or [self.build_grid().h]
        return [(eps, h) for h in hs for eps in self.cfg.epsilons]

    def describe(self, item) -> str:
        return f"eps={item[0]:g}, h={item[1]:g}"

    def _pair(self, grid: GridSpec) -> SubdomainPair:
        regions = self.cfg.regions
        if "V" in regions and "W" in regions:
            return SubdomainPair(self.build_region(regions["V"], "V"), self.build_region(regions["W"], "W"), grid)
        x0, x1, y0, y1 = grid.bounds
        side = min(x1 - x0, y1 - y0)
        return SubdomainPair.concentric_squares(grid, self._center(grid), 0.2 * side, 0.4 * side)

    def run_item(self, item: Tuple[float, float]) -> ScenarioResult:
        eps, h = item
        grid = self.build_grid(h)
        g = self.build_boundary(grid)
        solver_cfg = self.solver_config()
        params = RegularizationParams(epsilon=eps)
        u = solve_dirichlet(grid, g, params, solver_cfg)
        pair = self._pair(grid)
        meta = {"h": grid.h, "epsilon": eps}

        reports = [max_principle_report(u, g, params, solver_cfg.residual_tolerance)]

        alg = pointwise_identity_check(u, eps, "alg2x2")
        reports.append(EstimateReport.build("alg2x2", alg["max_relative_residual"], ALG2X2_TOLERANCE,
                                            passed=alg["max_relative_residual"] <= ALG2X2_TOLERANCE,
                                            note="identità algebrica 2x2", **meta))

        nonneg = pointwise_identity_check(u, eps, "nonneg_det")
        slack = NONNEG_DET_SLACK * grid.h * u.scale()
        reports.append(EstimateReport.build("nonneg_det", max(0.0, -nonneg["min_value"]), slack,
                                            passed=nonneg["min_value"] >= -slack,
                                            note="-det D^2u >= 0 a meno di 0.5 h scala", **meta))

        key = pointwise_identity_check(u, eps, "key_II")
        report = EstimateReport.build("key_II", key["l1_average"], max(1.0, u.scale()) ** 4,
                                      passed=math.isfinite(key["l1_average"]),
                                      note="media L1 del residuo dell'identità", **meta)
        report.extras["max_abs_residual"] = key["max_abs_residual"]
        reports.append(report)

        for kind in self.cfg.inequalities:
            if kind == "flatness":
                flat = self.cfg.flatness
                center = tuple(flat.get("center", self._center(grid)))
                reports.extend(flatness_sweep(u, params, center, tuple(flat.get("radii", (0.2, 0.1, 0.05)))))
            elif kind in ("caccioppoli", "w12_limit"):
                for alpha in self.cfg.alphas:
                    reports.append(inequality_report(kind, u, params, pair, alpha=alpha))
            elif kind == "sobolev_u":
                for alpha in self.cfg.alphas:
                    for kappa in self.cfg.kappas:
                        k_params = RegularizationParams(epsilon=eps, kappa=kappa)
                        reports.append(inequality_report(kind, u, k_params, pair, alpha=alpha))
            elif kind == "lp_gradient":
                for p in self.cfg.p_values:
                    reports.append(inequality_report(kind, u, params, pair, p=p))
            else:
                reports.append(inequality_report(kind, u, params, pair))

        for alpha in self.cfg.alphas:
            defect = orthogonality_defect(u, eps, alpha, pair.V)
            report = EstimateReport.build("orthogonality", defect, 1.0, passed=math.isfinite(defect),
                                          note="int_V |<D|Du|^alpha, Du>|", alpha=alpha, **meta)
            reports.append(report)

        return ScenarioResult(reports=reports, fields={f"u_eps{eps:g}_h{grid.h:g}": u})

    @staticmethod
    def _center(grid: GridSpec) -> Tuple[float, float]:
        x0, x1, y0, y1 = grid.bounds
        return (0.5 * (x0 + x1), 0.5 * (y0 + y1))

    def finalize(self):
        """Stabilità dei rapporti per tipo (e alpha/kappa/p) lungo lo sweep eps/h"""
        groups: Dict[str, List[EstimateReport]] = {}
        for rep in self.result.reports:
            if rep.name in ("caccioppoli", "w12_limit", "sobolev_u", "lp_gradient"):
                key = f"{rep.name}[alpha={rep.alpha:g},kappa={rep.kappa:g},p={rep.extras.get('p', math.nan):g}]"
                groups.setdefault(key, []).append(rep)

        stability = []
        for key, reps in groups.items():
            if len(reps) < 2:
                continue
            stable = ratio_stability(reps)
            ratios = [r.ratio for r in reps]
            finite = [x for x in ratios if math.isfinite(x)]
            spread = max(finite) / min(finite) if finite and min(finite) > 0 else 0.0
            stability.append(EstimateReport(name="ratio_stability", lhs=spread, rhs_core=2.0,
                                            ratio=spread / 2.0, passed=stable, note=key))

        # difetto di ortogonalità decrescente al diminuire di eps, a h fissato
        by_key: Dict[Tuple[float, float], List[EstimateReport]] = {}
        for rep in self.result.reports:
            if rep.name == "orthogonality":
                by_key.setdefault((rep.h, rep.alpha), []).append(rep)
        for (h, alpha), reps in by_key.items():
            reps = sorted(reps, key=lambda r: -r.epsilon)
            values = [r.lhs for r in reps]
            monotone = all(b <= ORTHOGONALITY_SLACK * a + ORTHOGONALITY_FLOOR for a, b in zip(values, values[1:]))
            stability.append(EstimateReport(name="orthogonality_trend", lhs=values[-1], rhs_core=values[0],
                                            ratio=EstimateReport.safe_ratio(values[-1], values[0]),
                                            passed=monotone, note=f"h={h:g}, alpha={alpha:g}", h=h, alpha=alpha))
        stability.extend(self._key_identity_orders())
        self.result.reports.extend(stability)

    def _key_identity_orders(self) -> List[EstimateReport]:
        """Ordine di decadimento della media L1 del residuo key_II sotto dimezzamento di h, per eps"""
        by_eps: Dict[float, List[EstimateReport]] = {}
        for rep in self.result.reports:
            if rep.name == "key_II":
                by_eps.setdefault(rep.epsilon, []).append(rep)

        reports = []
        for eps, reps in sorted(by_eps.items(), reverse=True):
            if len(reps) < 2:
                continue
            orders = observed_orders([r.h for r in reps], [r.lhs for r in reps], KEY_II_FLOOR)
            worst = min(orders)
            steps = ", ".join(f"{r.h:g}" for r in sorted(reps, key=lambda r: -r.h))
            report = EstimateReport(name="key_II_order", lhs=worst, rhs_core=KEY_II_MIN_ORDER,
                                    ratio=worst / KEY_II_MIN_ORDER, passed=worst >= KEY_II_MIN_ORDER,
                                    note=f"ordine minimo su h = {steps}", epsilon=eps)
            report.extras["orders"] = orders
            reports.append(report)
        return reports
