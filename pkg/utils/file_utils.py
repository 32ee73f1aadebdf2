# file_utils.py
import json
import math
import threading
from pathlib import Path
from typing import Any, Dict, Iterable, List

import numpy as np
import pandas as pd

from estimates.report import EstimateReport, reports_frame
from grid.fields import ScalarField

# 17 cifre significative: i valori si rileggono identici
FLOAT_FORMAT = "%.17g"


def to_jsonable(value: Any) -> Any:
    """Converte valori numpy/pandas in tipi JSON; i non finiti diventano null"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, Path):
        return str(value)
    return value


def write_json(path: Path, payload: Any):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(to_jsonable(payload), f, indent=2, sort_keys=True, allow_nan=False)
        f.write("\n")


class FieldWriter:
    """Scrive i campi nodali come CSV x,y,value"""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.written: List[Path] = []

    def write(self, name: str, field: ScalarField) -> Path:
        path = self.output_dir / f"field_{name}.csv"
        field.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        self.written.append(path)
        return path

    def write_all(self, fields: Dict[str, ScalarField]) -> List[Path]:
        # ordine alfabetico: stesso contenuto, stessi file
        return [self.write(name, fields[name]) for name in sorted(fields)]


class ReportWriter:
    """Report e tabelle in CSV e JSON; una scrittura alla volta per file"""

    def __init__(self, output_dir: Path):
        self.output_dir = Path(output_dir)
        self.written: List[Path] = []
        self._lock = threading.Lock()

    def _csv(self, frame: pd.DataFrame, path: Path):
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        self.written.append(path)

    def write_reports(self, reports: Iterable[EstimateReport]) -> pd.DataFrame:
        reports = list(reports)
        frame = reports_frame(reports)
        with self._lock:
            self._csv(frame, self.output_dir / "reports.csv")
            records = []
            for rep in reports:
                record = rep.to_record()
                if rep.extras:
                    record["extras"] = rep.extras
                records.append(record)
            path = self.output_dir / "reports.json"
            write_json(path, records)
            self.written.append(path)
        return frame

    def write_table(self, name: str, table: pd.DataFrame):
        with self._lock:
            self._csv(table, self.output_dir / f"{name}.csv")
            path = self.output_dir / f"{name}.json"
            write_json(path, table.to_dict(orient="records"))
            self.written.append(path)


class ParquetManager:
    """Copie Parquet delle tabelle di output"""

    @staticmethod
    def write_parquet(frame: pd.DataFrame, parquet_path: Path, compression: str = 'snappy') -> bool:
        try:
            frame.to_parquet(parquet_path, compression=compression, index=False)
            print(f"Scritto: {parquet_path.name}")
            return True
        except (ImportError, ValueError, OSError) as e:
            print(f"Errore scrittura {parquet_path.name}: {e}")
            return False

    @staticmethod
    def convert_csv_to_parquet(csv_directory: Path, names: Iterable[str]) -> Dict[str, bool]:
        """Converte i CSV indicati (per nome, senza estensione) nella stessa directory"""
        results = {}
        for name in names:
            csv_file = Path(csv_directory) / f"{name}.csv"
            if not csv_file.exists():
                results[name] = False
                continue
            frame = pd.read_csv(csv_file)
            results[name] = ParquetManager.write_parquet(frame, Path(csv_directory) / f"{name}.parquet")
        return results
