# report.py
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional
import math

import pandas as pd

REPORT_COLUMNS = ["name", "lhs", "rhs_core", "ratio", "pass", "h", "epsilon", "alpha", "kappa", "note"]


@dataclass
class EstimateReport:
    """Una disuguaglianza verificata: lato sinistro, lato destro senza costante, rapporto"""

    name: str
    lhs: float
    rhs_core: float
    ratio: float
    passed: bool
    note: str = ""
    h: float = math.nan
    epsilon: float = math.nan
    alpha: float = math.nan
    kappa: float = math.nan
    extras: Dict[str, Any] = field(default_factory=dict)

    @staticmethod
    def safe_ratio(lhs: float, rhs_core: float) -> float:
        if rhs_core == 0:
            return 0.0 if lhs == 0 else math.inf
        return abs(lhs) / abs(rhs_core)

    @classmethod
    def build(cls, name: str, lhs: float, rhs_core: float, passed: Optional[bool] = None,
              zero_tolerance: float = 0.0, **meta) -> "EstimateReport":
        """Calcola il rapporto; senza criterio esplicito passa se il rapporto è finito"""
        # lato sinistro nullo a meno di arrotondamenti
        ratio = 0.0 if abs(lhs) <= zero_tolerance else cls.safe_ratio(lhs, rhs_core)
        if passed is None:
            passed = math.isfinite(ratio)
        return cls(name=name, lhs=float(lhs), rhs_core=float(rhs_core), ratio=ratio, passed=bool(passed), **meta)

    def to_record(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "lhs": self.lhs,
            "rhs_core": self.rhs_core,
            "ratio": self.ratio,
            "pass": self.passed,
            "h": self.h,
            "epsilon": self.epsilon,
            "alpha": self.alpha,
            "kappa": self.kappa,
            "note": self.note,
        }


def reports_frame(reports: Iterable[EstimateReport]) -> pd.DataFrame:
    return pd.DataFrame([r.to_record() for r in reports], columns=REPORT_COLUMNS)


def ratio_stability(reports: List[EstimateReport], factor: float = 2.0) -> bool:
    """Rapporti finiti che variano al più di `factor` lungo la sequenza (tutti nulli va bene)"""
    ratios = [r.ratio for r in reports]
    if not ratios or not all(math.isfinite(x) for x in ratios):
        return False
    if all(x == 0 for x in ratios):
        return True
    if any(x == 0 for x in ratios):
        return False
    return max(ratios) <= factor * min(ratios)
