# sharpness_scenario.py
from typing import List, Tuple, Union
import logging
import math

import pandas as pd

from analytic.exponents import ExponentFit, combined_exponent, critical_exponent_estimate, log_speed_exponent_estimate
from estimates.report import EstimateReport
from scenarios.base_scenario import BaseScenario, ScenarioResult

logger = logging.getLogger(__name__)

EXPONENT_TOLERANCE = 0.1
LOG_ITEM = "log_speed"


def _fit_report(fit: ExponentFit) -> EstimateReport:
    """Esponente stimato contro quello esatto; due infiniti danno rapporto 1"""
    if math.isinf(fit.target_p) or math.isinf(fit.fitted_critical_p):
        ratio = 1.0 if math.isinf(fit.target_p) and math.isinf(fit.fitted_critical_p) else math.inf
    else:
        ratio = EstimateReport.safe_ratio(fit.fitted_critical_p, fit.target_p)
    report = EstimateReport(name="critical_exponent", lhs=fit.fitted_critical_p, rhs_core=fit.target_p,
                            ratio=ratio, passed=fit.passed(EXPONENT_TOLERANCE),
                            note=f"{fit.quantity}, modo {fit.mode}, stderr {fit.stderr:.3g}", alpha=fit.alpha)
    report.extras["mode"] = fit.mode
    return report


class SharpnessScenario(BaseScenario):
    """Soglie di integrabilità delle derivate della funzione di Aronsson"""

    kind = "sharpness"

    def work_items(self) -> List[Union[Tuple[float, str], str]]:
        items: List[Union[Tuple[float, str], str]] = [(a, m) for a in self.cfg.alphas for m in self.cfg.modes]
        if self.cfg.include_log:
            items.append(LOG_ITEM)
        return items

    def describe(self, item) -> str:
        return item if item == LOG_ITEM else f"alpha={item[0]:g}, {item[1]}"

    def run_item(self, item) -> ScenarioResult:
        if item == LOG_ITEM:
            fit = log_speed_exponent_estimate(self.cfg.levels)
        else:
            alpha, mode = item
            fit = critical_exponent_estimate(alpha, mode, self.cfg.levels)
        record = fit.to_record()
        if item != LOG_ITEM:
            # soglia per |Du|^alpha su tutto il dominio: la più restrittiva tra origine e assi
            record["combined_target_p"] = combined_exponent(fit.alpha)
        table = pd.DataFrame([record])
        return ScenarioResult(reports=[_fit_report(fit)], tables={"exponents": table})
