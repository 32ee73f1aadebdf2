# base_scenario.py
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional
import logging
import math

import pandas as pd

from analytic.reference_functions import ReferenceFunction, get_reference
from config.errors import ConfigError, InflabError
from config.scenario_config import ScenarioConfig
from config.settings import config
from estimates.report import EstimateReport
from grid.fields import GridSpec, Region, ScalarField
from solvers.boundary import BoundaryData, SolverConfig

logger = logging.getLogger(__name__)


@dataclass
class ScenarioResult:
    """Report, tabelle e campi prodotti da uno scenario"""

    reports: List[EstimateReport] = field(default_factory=list)
    tables: Dict[str, pd.DataFrame] = field(default_factory=dict)
    fields: Dict[str, ScalarField] = field(default_factory=dict)

    def merge(self, other: "ScenarioResult"):
        self.reports.extend(other.reports)
        for name, table in other.tables.items():
            if name in self.tables:
                self.tables[name] = pd.concat([self.tables[name], table], ignore_index=True)
            else:
                self.tables[name] = table
        self.fields.update(other.fields)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)


class BaseScenario(ABC):
    """Classe base per tutti gli scenari: unità di lavoro indipendenti, risultati accumulati in ordine"""

    kind = "base"
    # unità pure: i risultati non dipendono dal numero di thread
    parallel_safe = True

    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        self.result = ScenarioResult()
        self.processed_items: List[str] = []
        self.failed_items: List[str] = []

    @abstractmethod
    def work_items(self) -> List[Any]:
        """Elenco delle unità di lavoro (una per eps, alpha, p, ...)"""
        pass

    @abstractmethod
    def run_item(self, item: Any) -> ScenarioResult:
        """Esegue una singola unità - da implementare nelle sottoclassi"""
        pass

    def finalize(self):
        """Report aggregati dopo tutte le unità (default: nessuno)"""
        pass

    def describe(self, item: Any) -> str:
        return str(item)

    def _safe_run(self, item: Any) -> ScenarioResult:
        try:
            return self.run_item(item)
        except ConfigError:
            raise
        except InflabError as e:
            logger.error(f"{self.kind} [{self.describe(item)}]: {e}")
            failure = EstimateReport(name=f"{self.kind}_error", lhs=math.nan, rhs_core=math.nan, ratio=math.nan,
                                     passed=False, note=f"{type(e).__name__}: {e}")
            failure.extras["item"] = self.describe(item)
            return ScenarioResult(reports=[failure])

    def process_all(self) -> ScenarioResult:
        items = self.work_items()
        if not items:
            print("Nessuna unità di lavoro")
            return self.result

        threads = 1 if self.cfg.deterministic and not self.parallel_safe else max(1, config.THREADS)
        print(f"Scenario {self.kind}: {len(items)} unità, {threads} thread")

        # executor.map restituisce i risultati nell'ordine delle unità
        with ThreadPoolExecutor(max_workers=threads) as executor:
            outcomes = list(executor.map(self._safe_run, items))

        for item, outcome in zip(items, outcomes):
            label = self.describe(item)
            self.processed_items.append(label)
            if any(r.name.endswith("_error") for r in outcome.reports):
                self.failed_items.append(label)
            self.result.merge(outcome)

        self.finalize()
        self._generate_report()
        return self.result

    def _generate_report(self):
        passed = sum(r.passed for r in self.result.reports)
        print(f"\n{'=' * 50}")
        print(f"RIEPILOGO SCENARIO {self.kind.upper()}")
        print(f"{'=' * 50}")
        print(f"Unità eseguite: {len(self.processed_items)}")
        print(f"Unità fallite: {len(self.failed_items)}")
        print(f"Report superati: {passed}/{len(self.result.reports)}")
        failing = [r for r in self.result.reports if not r.passed]
        if failing:
            print("\nReport non superati:")
            for r in failing[:5]:
                print(f"  - {r.name} ({r.note})")

    # Costruzione degli oggetti dalla configurazione
    def build_grid(self, h: Optional[float] = None) -> GridSpec:
        grid = self.cfg.grid
        origin, extent = tuple(grid["origin"]), tuple(grid["extent"])
        if h is not None:
            return GridSpec.from_spacing(origin, extent, h)
        if "nodes" in grid:
            return GridSpec(origin, extent, tuple(grid["nodes"]))
        return GridSpec.from_spacing(origin, extent, float(grid["h"]))

    def reference(self) -> Optional[ReferenceFunction]:
        boundary = self.cfg.boundary
        if "csv" in boundary:
            return None
        return get_reference(boundary["name"], **boundary.get("params", {}))

    def build_boundary(self, grid: GridSpec) -> BoundaryData:
        boundary = self.cfg.boundary
        if "csv" in boundary:
            return BoundaryData.from_csv(boundary["csv"], grid, name=boundary.get("name"))
        return BoundaryData.from_reference(self.reference())

    def solver_config(self) -> SolverConfig:
        options = dict(self.cfg.solver)
        options.setdefault("deterministic_ordering", self.cfg.deterministic)
        try:
            return SolverConfig(**options)
        except TypeError as e:
            raise ConfigError(f"Opzione del solutore sconosciuta: {e}", field="solver") from e

    @staticmethod
    def build_region(spec: Dict[str, Any], name: str = "region") -> Region:
        kind = spec.get("kind")
        margin = float(spec.get("margin", 0.0))
        try:
            if kind == "disk":
                return Region.disk(tuple(spec["center"]), spec["radius"], margin)
            if kind == "annulus":
                return Region.annulus(tuple(spec["center"]), spec["inner_radius"], spec["radius"], margin)
            if kind == "square":
                if "half_side" in spec:
                    return Region.square(tuple(spec["center"]), spec["half_side"], margin)
                return Region.box(*spec["bounds"], margin=margin)
            if kind == "strip":
                return Region.strip(spec["axis"], spec["low"], spec["high"], tuple(spec["span"]), margin)
            if kind == "full-interior":
                return Region.full_interior(margin)
        except KeyError as e:
            raise ConfigError(f"Campo mancante nella regione: {e}", field=f"regions.{name}") from e
        raise ConfigError(f"Tipo di regione sconosciuto: {kind}", field=f"regions.{name}.kind")
