# scenario_config.py
"""
Configurazione di uno scenario: un unico documento JSON a chiavi piatte.
Gli errori di sintassi riportano la riga, quelli di validazione il campo.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional
import json
import math

from analytic.reference_functions import REFERENCE_REGISTRY, get_reference
from config.errors import ConfigError
from config.settings import config

SCENARIO_KINDS = ("solve", "verify", "sweep", "sharpness", "capacity", "dual")
NUMBER_LISTS = ("epsilons", "kappas", "alphas", "p_values", "h_list")
STRING_LISTS = ("modes", "inequalities")
MAPPINGS = ("grid", "boundary", "regions", "flatness", "geometry", "solver")
SWEEP_KINDS = ("sweep", "sharpness", "capacity")
REGION_KEYS = ("kind", "center", "radius", "inner_radius", "bounds", "margin", "axis", "low", "high", "span", "half_side")

KNOWN_KEYS = {
    "name", "kind", "grid", "boundary", "epsilons", "kappas", "alphas", "p_values", "h_list",
    "regions", "flatness", "geometry", "test_functions", "solver", "output_dir", "deterministic",
    "modes", "levels", "include_log", "inequalities", "amle", "duality_tolerance", "samples",
}


def _line_of(text: str, key: str) -> Optional[int]:
    """Prima riga del documento che contiene la chiave (per la diagnostica)"""
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return number
    return None


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


@dataclass
class ScenarioConfig:
    kind: str
    name: str = "scenario"
    grid: Dict[str, Any] = field(default_factory=lambda: {"origin": [0.5, 0.5], "extent": [1.0, 1.0], "h": 1.0 / 64})
    boundary: Dict[str, Any] = field(default_factory=lambda: {"name": "aronsson"})
    epsilons: List[float] = field(default_factory=lambda: [1e-2])
    kappas: List[float] = field(default_factory=lambda: [1e-2, 1e-4, 1e-6])
    alphas: List[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    p_values: List[float] = field(default_factory=lambda: [3.0, 4.0])
    h_list: List[float] = field(default_factory=list)
    regions: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    flatness: Dict[str, Any] = field(default_factory=dict)
    geometry: Dict[str, Any] = field(default_factory=lambda: {"rectangle": {"width": 2.0, "height": 1.0}})
    test_functions: List[Dict[str, Any]] = field(default_factory=list)
    solver: Dict[str, Any] = field(default_factory=dict)
    output_dir: Optional[str] = None
    deterministic: bool = True
    modes: List[str] = field(default_factory=lambda: ["origin"])
    levels: int = 8
    include_log: bool = False
    inequalities: List[str] = field(default_factory=lambda: ["caccioppoli", "apriori", "flatness", "sobolev_u",
                                                             "lp_gradient", "w12_limit"])
    amle: bool = False
    duality_tolerance: float = 0.03
    samples: int = 1024
    source_text: str = field(default="", repr=False, compare=False)

    @classmethod
    def from_json_text(cls, text: str) -> "ScenarioConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(f"JSON non valido: {e.msg} (colonna {e.colno})", line=e.lineno) from e
        if not isinstance(data, dict):
            raise ConfigError("Il documento deve essere un oggetto JSON", line=1)

        for key in data:
            if key not in KNOWN_KEYS:
                raise ConfigError(f"Chiave sconosciuta: {key}", field=key, line=_line_of(text, key))
        if "kind" not in data:
            raise ConfigError("Manca il tipo di scenario", field="kind")

        cfg = cls(**data, source_text=text)
        cfg.validate()
        return cfg

    @classmethod
    def from_file(cls, path: Path) -> "ScenarioConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"File di configurazione non trovato: {path}", field="config")
        return cls.from_json_text(path.read_text(encoding="utf-8"))

    def _fail(self, message: str, key: str):
        root = key.split(".")[0].split("[")[0]
        raise ConfigError(message, field=key, line=_line_of(self.source_text, root) if self.source_text else None)

    def _check_types(self):
        """Tipi JSON dei campi, prima di qualsiasi confronto sui valori"""
        for key in NUMBER_LISTS:
            values = getattr(self, key)
            if not isinstance(values, list):
                self._fail(f"{key} deve essere una lista di numeri", key)
            for i, value in enumerate(values):
                if not _is_number(value):
                    self._fail(f"Valore non numerico: {value!r}", f"{key}[{i}]")
        for key in STRING_LISTS:
            values = getattr(self, key)
            if not (isinstance(values, list) and all(isinstance(v, str) for v in values)):
                self._fail(f"{key} deve essere una lista di stringhe", key)
        for key in MAPPINGS:
            if not isinstance(getattr(self, key), dict):
                self._fail(f"{key} deve essere un oggetto", key)
        for key in ("levels", "samples"):
            value = getattr(self, key)
            if not (isinstance(value, int) and not isinstance(value, bool)):
                self._fail(f"{key} deve essere un intero, ricevuto {value!r}", key)
        if not _is_number(self.duality_tolerance):
            self._fail(f"duality_tolerance deve essere un numero: {self.duality_tolerance!r}", "duality_tolerance")
        for key in ("deterministic", "include_log", "amle"):
            if not isinstance(getattr(self, key), bool):
                self._fail(f"{key} deve essere true o false", key)
        if not isinstance(self.test_functions, list):
            self._fail("test_functions deve essere una lista", "test_functions")

    def _check_boundary(self):
        if "csv" in self.boundary:
            return
        name = self.boundary.get("name")
        if name not in REFERENCE_REGISTRY:
            self._fail(f"Dato al bordo sconosciuto: {name}", "boundary.name")
        params = self.boundary.get("params", {})
        if not isinstance(params, dict):
            self._fail("boundary.params deve essere un oggetto", "boundary.params")
        try:
            get_reference(name, **params)
        except (TypeError, ValueError) as e:
            self._fail(f"Parametri non validi per {name}: {e}", "boundary.params")

    def validate(self):
        if not isinstance(self.kind, str) or self.kind not in SCENARIO_KINDS:
            self._fail(f"Tipo di scenario sconosciuto: {self.kind}", "kind")
        self._check_types()

        if self.kind in SWEEP_KINDS:
            needed = {"sweep": ("epsilons", "h_list"), "sharpness": ("alphas",), "capacity": ("p_values",)}[self.kind]
            for key in needed:
                if not getattr(self, key):
                    self._fail(f"La lista {key} non può essere vuota", key)

        for i, eps in enumerate(self.epsilons):
            if not (isinstance(eps, (int, float)) and 0 < eps <= 1):
                self._fail(f"epsilon fuori da (0, 1]: {eps}", f"epsilons[{i}]")
        for i, kappa in enumerate(self.kappas):
            if not kappa >= 0:
                self._fail(f"kappa negativo: {kappa}", f"kappas[{i}]")
        for i, alpha in enumerate(self.alphas):
            if not alpha > 0:
                self._fail(f"alpha deve essere > 0: {alpha}", f"alphas[{i}]")
        for i, p in enumerate(self.p_values):
            if not (isinstance(p, (int, float)) and p > 1 and math.isfinite(p)):
                self._fail(f"p deve essere > 1 e finito: {p}", f"p_values[{i}]")
        for i, h in enumerate(self.h_list):
            if not h > 0:
                self._fail(f"passo non positivo: {h}", f"h_list[{i}]")
        for i, mode in enumerate(self.modes):
            if mode not in ("origin", "axis"):
                self._fail(f"Modo sconosciuto: {mode}", f"modes[{i}]")
        if self.levels < 5:
            self._fail("Servono almeno 5 livelli diadici", "levels")

        self._check_boundary()
        for key in ("origin", "extent"):
            value = self.grid.get(key)
            if not (isinstance(value, list) and len(value) == 2 and all(_is_number(v) for v in value)):
                self._fail(f"{key} deve essere una coppia di numeri", f"grid.{key}")
        if not ("h" in self.grid or "nodes" in self.grid):
            self._fail("Serve il passo h oppure il numero di nodi", "grid.h")
        if "h" in self.grid and not (_is_number(self.grid["h"]) and self.grid["h"] > 0):
            self._fail(f"Passo non valido: {self.grid['h']!r}", "grid.h")
        for name, region in self.regions.items():
            if not isinstance(region, dict):
                self._fail(f"La regione {name} deve essere un oggetto", f"regions.{name}")
            for key in region:
                if key not in REGION_KEYS:
                    self._fail(f"Campo sconosciuto nella regione {name}: {key}", f"regions.{name}.{key}")

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir) if self.output_dir else config.OUTPUT_PATH / self.name

    def echo(self) -> Dict[str, Any]:
        """Copia serializzabile per il manifest"""
        out = {k: v for k, v in self.__dict__.items() if k != "source_text"}
        return out
