#!/usr/bin/env python3
"""
Pipeline di esecuzione di uno scenario: configurazione, calcolo, scrittura
degli artefatti e manifest finale. Exit status 0 solo se ogni report è superato.
"""

import sys
import time
from pathlib import Path
from typing import Dict, List, Optional, Type

# Aggiunge il percorso del progetto
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import numpy as np
import pandas as pd
import scipy
import shapely

from config.errors import ConfigError, InflabError
from config.scenario_config import ScenarioConfig
from config.settings import config, setup_logging
from scenarios.base_scenario import BaseScenario, ScenarioResult
from scenarios.capacity_scenario import CapacityScenario
from scenarios.dual_scenario import DualScenario
from scenarios.sharpness_scenario import SharpnessScenario
from scenarios.solve_scenario import SolveScenario
from scenarios.sweep_scenario import SweepScenario
from scenarios.verify_scenario import VerifyScenario
from utils.file_utils import FieldWriter, ParquetManager, ReportWriter, write_json

SCENARIO_CLASSES: Dict[str, Type[BaseScenario]] = {
    "solve": SolveScenario,
    "verify": VerifyScenario,
    "sweep": SweepScenario,
    "sharpness": SharpnessScenario,
    "capacity": CapacityScenario,
    "dual": DualScenario,
}


def _banner(title: str):
    print("\n" + "=" * 50)
    print(title)
    print("=" * 50)


class ScenarioPipeline:
    """Esegue uno scenario e scrive campi, report, tabelle e manifest"""

    def __init__(self, cfg: ScenarioConfig, output_dir: Optional[Path] = None, deterministic: Optional[bool] = None):
        if output_dir is not None:
            cfg.output_dir = str(output_dir)
        if deterministic is not None:
            cfg.deterministic = cfg.deterministic or deterministic
        self.cfg = cfg
        self.output_dir = cfg.output_path
        self.result: Optional[ScenarioResult] = None
        self.artifacts: List[Path] = []

    @classmethod
    def from_file(cls, path: Path, output_dir: Optional[Path] = None,
                  deterministic: Optional[bool] = None) -> "ScenarioPipeline":
        return cls(ScenarioConfig.from_file(path), output_dir, deterministic)

    def run_scenario(self) -> ScenarioResult:
        _banner(f"FASE 1: SCENARIO {self.cfg.kind.upper()} ({self.cfg.name})")
        scenario = SCENARIO_CLASSES[self.cfg.kind](self.cfg)
        self.result = scenario.process_all()
        return self.result

    def write_artifacts(self):
        _banner("FASE 2: SCRITTURA ARTEFATTI")
        self.output_dir.mkdir(parents=True, exist_ok=True)

        fields = FieldWriter(self.output_dir)
        fields.write_all(self.result.fields)

        reports = ReportWriter(self.output_dir)
        reports.write_reports(self.result.reports)
        for name in sorted(self.result.tables):
            reports.write_table(name, self.result.tables[name])

        parquet = ParquetManager.convert_csv_to_parquet(self.output_dir, ["reports"] + sorted(self.result.tables))
        self.artifacts = fields.written + reports.written + [
            self.output_dir / f"{name}.parquet" for name, ok in parquet.items() if ok]
        print(f"Artefatti scritti: {len(self.artifacts)} in {self.output_dir}")

    def write_manifest(self, wall_time: float) -> Path:
        """Scritto per ultimo: eco della configurazione, versioni, tempo, esito"""
        path = self.output_dir / "manifest.json"
        write_json(path, {
            "config": self.cfg.echo(),
            "versions": {
                "inflab": config.VERSION,
                "python": sys.version.split()[0],
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "pandas": pd.__version__,
                "shapely": shapely.__version__,
            },
            "wall_time_seconds": wall_time,
            "threads": config.THREADS,
            "artifacts": sorted(p.name for p in self.artifacts),
            "reports": len(self.result.reports),
            "pass": self.result.passed,
        })
        return path

    def run_pipeline(self) -> int:
        started = time.perf_counter()
        self.run_scenario()
        self.write_artifacts()
        self.write_manifest(time.perf_counter() - started)

        _banner("PIPELINE COMPLETATA" if self.result.passed else "PIPELINE COMPLETATA CON REPORT FALLITI")
        failing = sum(not r.passed for r in self.result.reports)
        print(f"Report: {len(self.result.reports)}, falliti: {failing}")
        return 0 if self.result.passed else 1


def run(config_path: Path, output_dir: Optional[Path] = None, deterministic: bool = False) -> int:
    """Esegue la pipeline; gli errori di configurazione e dei solutori danno exit status != 0"""
    try:
        pipeline = ScenarioPipeline.from_file(config_path, output_dir, deterministic)
        return pipeline.run_pipeline()
    except ConfigError as e:
        print(f"\n=== CONFIGURAZIONE NON VALIDA: {e} ===")
        return 2
    except InflabError as e:
        print(f"\n=== PIPELINE FALLITA: {type(e).__name__}: {e} ===")
        return 3


if __name__ == "__main__":
    import argparse

    setup_logging()
    parser = argparse.ArgumentParser(description="Esegue uno scenario da file JSON")
    parser.add_argument("--config", required=True, type=Path)
    parser.add_argument("--out", type=Path, default=None)
    parser.add_argument("--deterministic", action="store_true")
    args = parser.parse_args()
    sys.exit(run(args.config, args.out, args.deterministic))
