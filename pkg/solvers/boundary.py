# boundary.py
"""
Dati al bordo, parametri di regolarizzazione e configurazione dei solutori.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Optional, Tuple
import logging
import math

import numpy as np
import pandas as pd

from analytic.reference_functions import ReferenceFunction, get_reference
from config.errors import ConfigError, GridError, InvalidEpsilon, InvalidParameter
from config.settings import config
from grid.fields import GridSpec

logger = logging.getLogger(__name__)


def gradient_floor(scale: float = 1.0, delta: Optional[float] = None) -> float:
    """
    Soglia delta sotto la quale i quozienti Delta u / |Du|^beta valgono 0:
    delta esplicito oppure DELTA_FACTOR * eps macchina * scala del campo.
    Serve anche dove epsilon non c'è (limite eps -> 0, funzioni esatte).
    """
    if delta is not None:
        if not delta >= 0:
            raise InvalidParameter(f"delta deve essere >= 0, ricevuto {delta}")
        return float(delta)
    return config.DELTA_FACTOR * float(np.finfo(float).eps) * max(1.0, float(scale))


@dataclass(frozen=True)
class RegularizationParams:
    """
    epsilon dell'equazione regolarizzata, kappa della stima di Sobolev e soglia
    delta dei quozienti. Il riscalamento u -> lambda u va accoppiato a
    epsilon -> lambda^2 epsilon: solo così u resta soluzione e i rapporti delle
    stime non cambiano.
    """

    epsilon: float
    kappa: float = 0.0
    delta: Optional[float] = None

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and 0.0 < self.epsilon <= 1.0):
            raise InvalidEpsilon(f"epsilon deve stare in (0, 1], ricevuto {self.epsilon}")
        if not (math.isfinite(self.kappa) and self.kappa >= 0):
            raise InvalidParameter(f"kappa deve essere >= 0, ricevuto {self.kappa}")
        if self.delta is not None and not self.delta >= 0:
            raise InvalidParameter(f"delta deve essere >= 0, ricevuto {self.delta}")

    def resolve_delta(self, scale: float = 1.0) -> float:
        return gradient_floor(scale, self.delta)


@dataclass(frozen=True)
class SolverConfig:
    max_outer_iterations: int = config.MAX_OUTER_ITERATIONS
    max_inner_sweeps: int = config.MAX_INNER_SWEEPS
    residual_tolerance: float = config.RESIDUAL_TOLERANCE
    relaxation: float = config.RELAXATION
    deterministic_ordering: bool = True
    linear_solver: str = config.LINEAR_SOLVER
    sor_omega: Optional[float] = None
    margin_cells: int = config.MARGIN_CELLS

    def __post_init__(self):
        if not self.residual_tolerance > 0:
            raise ConfigError("La tolleranza deve essere > 0", field="residual_tolerance")
        if not 0.0 < self.relaxation <= 1.0:
            raise ConfigError("Il rilassamento deve stare in (0, 1]", field="relaxation")
        if self.max_outer_iterations < 1 or self.max_inner_sweeps < 1:
            raise ConfigError("Numero di iterazioni non positivo", field="max_outer_iterations")
        if self.linear_solver not in ("direct", "sweeps"):
            raise ConfigError(f"Solutore lineare sconosciuto: {self.linear_solver}", field="linear_solver")
        if self.sor_omega is not None and not 0.0 < self.sor_omega < 2.0:
            raise ConfigError("omega di SOR deve stare in (0, 2)", field="sor_omega")

    def omega_for(self, grid: GridSpec) -> float:
        """omega esplicito oppure quello ottimo del laplaciano sul lato più lungo, al più SOR_OMEGA_MAX"""
        if self.sor_omega is not None:
            return float(self.sor_omega)
        nodes = max(grid.shape) - 1
        return min(config.SOR_OMEGA_MAX, 2.0 / (1.0 + math.sin(math.pi / max(nodes, 2))))


@dataclass
class BoundaryData:
    """
    Dato di Dirichlet g: funzione valutabile (registro o lambda) oppure valori
    per nodo letti da CSV `index,value` (indice piatto, righe = y).
    """

    name: str
    func: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None
    node_values: Dict[int, float] = field(default_factory=dict)
    source_grid: Optional[GridSpec] = None

    @classmethod
    def from_reference(cls, ref: ReferenceFunction) -> "BoundaryData":
        return cls(name=ref.name, func=ref.value)

    @classmethod
    def from_name(cls, name: str, **params) -> "BoundaryData":
        """Dato al bordo dal registro delle funzioni di riferimento"""
        return cls.from_reference(get_reference(name, **params))

    @classmethod
    def from_csv(cls, path: Path, grid: GridSpec, name: Optional[str] = None) -> "BoundaryData":
        path = Path(path)
        df = pd.read_csv(path)
        if list(df.columns[:2]) != ["index", "value"]:
            raise ConfigError(f"Intestazione attesa 'index,value' in {path.name}", field="boundary")
        values = {int(i): float(v) for i, v in zip(df["index"], df["value"])}
        ring = np.flatnonzero(grid.boundary_mask().ravel())
        missing = [int(i) for i in ring if int(i) not in values]
        if missing:
            raise ConfigError(f"{len(missing)} nodi di bordo senza valore in {path.name}", field="boundary")
        if not all(math.isfinite(v) for v in values.values()):
            raise GridError("Valori al bordo non finiti")
        logger.info(f"Dato al bordo caricato da {path.name}: {len(values)} nodi")
        return cls(name=name or path.stem, node_values=values, source_grid=grid)

    @property
    def evaluable(self) -> bool:
        return self.func is not None

    def sample(self, grid: GridSpec) -> np.ndarray:
        """Array di forma grid.shape con g sull'anello di bordo (zero all'interno)"""
        mask = grid.boundary_mask()
        out = np.zeros(grid.shape)
        if self.func is not None:
            X, Y = grid.mesh()
            out[mask] = np.broadcast_to(self.func(X, Y), grid.shape)[mask]
        else:
            if self.source_grid != grid:
                raise GridError(f"Il dato '{self.name}' è definito solo sulla griglia di origine")
            flat = out.ravel()
            for index in np.flatnonzero(mask.ravel()):
                flat[index] = self.node_values[int(index)]
            out = flat.reshape(grid.shape)
        if not np.all(np.isfinite(out[mask])):
            raise GridError(f"Dato al bordo '{self.name}' non finito")
        return out

    def shifted(self, constant: float) -> "BoundaryData":
        if self.func is not None:
            base = self.func
            return BoundaryData(f"{self.name}+{constant:g}", func=lambda x, y: base(x, y) + constant)
        return BoundaryData(f"{self.name}+{constant:g}",
                            node_values={k: v + constant for k, v in self.node_values.items()},
                            source_grid=self.source_grid)

    def negated(self) -> "BoundaryData":
        if self.func is not None:
            base = self.func
            return BoundaryData(f"-{self.name}", func=lambda x, y: -base(x, y))
        return BoundaryData(f"-{self.name}", node_values={k: -v for k, v in self.node_values.items()},
                            source_grid=self.source_grid)


def boundary_range(grid: GridSpec, boundary: np.ndarray) -> Tuple[float, float]:
    ring = boundary[grid.boundary_mask()]
    return float(np.min(ring)), float(np.max(ring))


def transfinite_interpolation(grid: GridSpec, boundary: np.ndarray) -> np.ndarray:
    """
    Interpolazione transfinita (Coons) dei valori sull'anello di bordo, tagliata
    in [min g, max g]: soddisfa il principio del massimo già all'iterazione 0.
    """
    ny, nx = grid.shape
    s = np.linspace(0.0, 1.0, nx)[None, :]
    t = np.linspace(0.0, 1.0, ny)[:, None]
    bottom = boundary[0, :][None, :]
    top = boundary[-1, :][None, :]
    left = boundary[:, 0][:, None]
    right = boundary[:, -1][:, None]

    corners = ((1 - s) * (1 - t) * boundary[0, 0] + s * (1 - t) * boundary[0, -1]
               + (1 - s) * t * boundary[-1, 0] + s * t * boundary[-1, -1])
    values = (1 - s) * left + s * right + (1 - t) * bottom + t * top - corners

    low, high = boundary_range(grid, boundary)
    values = np.clip(values, low, high)
    mask = grid.boundary_mask()
    values[mask] = boundary[mask]
    return values
