# fields.py
"""
Geometria della griglia uniforme e campi nodali (scalari, vettoriali, matrici simmetriche).
Tutti i campi sono immutabili: gli array vengono resi di sola lettura alla costruzione.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple
import math

import numpy as np
import pandas as pd

from config.errors import GridError, RegionError


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class GridSpec:
    """Griglia rettangolare uniforme a celle quadrate"""

    origin: Tuple[float, float]
    extent: Tuple[float, float]
    nodes: Tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, "extent", (float(self.extent[0]), float(self.extent[1])))
        object.__setattr__(self, "nodes", (int(self.nodes[0]), int(self.nodes[1])))

        nx, ny = self.nodes
        if nx < 3 or ny < 3:
            raise GridError(f"Servono almeno 3 nodi per direzione, ricevuti {self.nodes}")
        values = self.origin + self.extent
        if not all(math.isfinite(v) for v in values):
            raise GridError("Coordinate della griglia non finite")
        hx = self.extent[0] / (nx - 1)
        hy = self.extent[1] / (ny - 1)
        if hx <= 0 or hy <= 0:
            raise GridError(f"Passo non positivo: hx={hx}, hy={hy}")
        if abs(hx - hy) > 1e-12 * max(hx, hy):
            raise GridError(f"Celle non quadrate: hx={hx!r}, hy={hy!r}")

    @classmethod
    def from_spacing(cls, origin: Tuple[float, float], extent: Tuple[float, float], h: float) -> "GridSpec":
        """Costruisce la griglia dal passo h (l'estensione deve essere multipla di h)"""
        if h <= 0:
            raise GridError(f"Passo non positivo: {h}")
        nx = int(round(extent[0] / h)) + 1
        ny = int(round(extent[1] / h)) + 1
        return cls(origin=origin, extent=extent, nodes=(nx, ny))

    @property
    def h(self) -> float:
        return self.extent[0] / (self.nodes[0] - 1)

    @property
    def shape(self) -> Tuple[int, int]:
        """Forma degli array nodali: (ny, nx), righe = y"""
        return (self.nodes[1], self.nodes[0])

    @property
    def size(self) -> int:
        return self.nodes[0] * self.nodes[1]

    @property
    def bounds(self) -> Tuple[float, float, float, float]:
        x0, y0 = self.origin
        return (x0, x0 + self.extent[0], y0, y0 + self.extent[1])

    @property
    def x(self) -> np.ndarray:
        return self.origin[0] + self.h * np.arange(self.nodes[0])

    @property
    def y(self) -> np.ndarray:
        return self.origin[1] + self.h * np.arange(self.nodes[1])

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y, indexing="xy")

    def boundary_mask(self) -> np.ndarray:
        mask = np.zeros(self.shape, dtype=bool)
        mask[0, :] = mask[-1, :] = True
        mask[:, 0] = mask[:, -1] = True
        return mask

    def margin_mask(self, cells: int) -> np.ndarray:
        """Nodi a distanza >= cells*h dal bordo"""
        mask = np.zeros(self.shape, dtype=bool)
        ny, nx = self.shape
        if 2 * cells < min(nx, ny):
            mask[cells:ny - cells, cells:nx - cells] = True
        return mask

    def coarsened(self) -> Optional["GridSpec"]:
        nx, ny = self.nodes
        if (nx - 1) % 2 or (ny - 1) % 2 or (nx - 1) // 2 + 1 < 3 or (ny - 1) // 2 + 1 < 3:
            return None
        return GridSpec(self.origin, self.extent, ((nx - 1) // 2 + 1, (ny - 1) // 2 + 1))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Valori reali per nodo, array di forma grid.shape"""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self):
        values = _frozen(self.values)
        if values.shape != self.grid.shape:
            raise GridError(f"Forma {values.shape} incompatibile con la griglia {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise GridError("Campo scalare con valori non finiti")
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, grid: GridSpec, func: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> "ScalarField":
        X, Y = grid.mesh()
        return cls(grid, np.broadcast_to(func(X, Y), grid.shape))

    @classmethod
    def constant(cls, grid: GridSpec, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.grid, values)

    def scale(self) -> float:
        """Scala del campo (max |valore|, almeno 1)"""
        return max(1.0, float(np.max(np.abs(self.values))))

    def __add__(self, other):
        if isinstance(other, ScalarField):
            return self.with_values(self.values + other.values)
        return self.with_values(self.values + float(other))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ScalarField):
            return self.with_values(self.values - other.values)
        return self.with_values(self.values - float(other))

    def __mul__(self, factor: float):
        return self.with_values(self.values * float(factor))

    __rmul__ = __mul__

    def __neg__(self):
        return self.with_values(-self.values)

    def to_frame(self) -> pd.DataFrame:
        """Tabella x,y,value ordinata per y e poi per x"""
        X, Y = self.grid.mesh()
        return pd.DataFrame({"x": X.ravel(), "y": Y.ravel(), "value": self.values.ravel()})


@dataclass(frozen=True, eq=False)
class VectorField2:
    """Campo vettoriale Du = (u_1, u_2)"""

    grid: GridSpec
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        for name in ("v1", "v2"):
            comp = _frozen(getattr(self, name))
            if comp.shape != self.grid.shape or not np.all(np.isfinite(comp)):
                raise GridError(f"Componente {name} non valida")
            object.__setattr__(self, name, comp)

    def norm_squared(self) -> np.ndarray:
        return self.v1 ** 2 + self.v2 ** 2

    def norm(self) -> np.ndarray:
        return np.hypot(self.v1, self.v2)


@dataclass(frozen=True, eq=False)
class SymMatField:
    """Campo di matrici simmetriche 2x2: solo (a11, a12, a22)"""

    grid: GridSpec
    a11: np.ndarray
    a12: np.ndarray
    a22: np.ndarray

    def __post_init__(self):
        for name in ("a11", "a12", "a22"):
            comp = _frozen(getattr(self, name))
            if comp.shape != self.grid.shape or not np.all(np.isfinite(comp)):
                raise GridError(f"Componente {name} non valida")
            object.__setattr__(self, name, comp)

    def det(self) -> np.ndarray:
        return self.a11 * self.a22 - self.a12 ** 2

    def trace(self) -> np.ndarray:
        return self.a11 + self.a22


REGION_KINDS = ("disk", "square", "annulus", "strip", "full-interior")


@dataclass(frozen=True)
class Region:
    """
    Sottoinsieme della griglia (V, W, U). L'appartenenza di un nodo è decisa
    dal centro della sua cella, cioè dal nodo stesso.
    """

    kind: str
    center: Tuple[float, float] = (0.0, 0.0)
    radius: float = 0.0
    inner_radius: float = 0.0
    bounds: Optional[Tuple[float, float, float, float]] = None
    margin: float = 0.0
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if self.kind not in REGION_KINDS:
            raise RegionError(f"Tipo di regione sconosciuto: {self.kind}")
        if self.margin < 0:
            raise RegionError("Il margine deve essere >= 0")
        if self.kind in ("disk", "annulus") and self.radius <= 0:
            raise RegionError("Raggio non positivo")
        if self.kind == "annulus" and not (0 <= self.inner_radius < self.radius):
            raise RegionError("Raggi dell'anello non validi")
        if self.kind in ("square", "strip"):
            if self.bounds is None or self.bounds[0] >= self.bounds[1] or self.bounds[2] >= self.bounds[3]:
                raise RegionError(f"Estremi non validi: {self.bounds}")

    # Costruttori
    @classmethod
    def disk(cls, center: Tuple[float, float], radius: float, margin: float = 0.0) -> "Region":
        return cls("disk", center=tuple(center), radius=float(radius), margin=margin)

    @classmethod
    def annulus(cls, center: Tuple[float, float], inner_radius: float, radius: float, margin: float = 0.0) -> "Region":
        return cls("annulus", center=tuple(center), radius=float(radius), inner_radius=float(inner_radius), margin=margin)

    @classmethod
    def box(cls, xmin: float, xmax: float, ymin: float, ymax: float, margin: float = 0.0) -> "Region":
        return cls("square", bounds=(float(xmin), float(xmax), float(ymin), float(ymax)), margin=margin)

    @classmethod
    def square(cls, center: Tuple[float, float], half_side: float, margin: float = 0.0) -> "Region":
        cx, cy = center
        return cls.box(cx - half_side, cx + half_side, cy - half_side, cy + half_side, margin=margin)

    @classmethod
    def strip(cls, axis: str, low: float, high: float, span: Tuple[float, float], margin: float = 0.0) -> "Region":
        """Striscia low < x_axis < high, con l'altra coordinata in span"""
        if axis == "y":
            bounds = (span[0], span[1], low, high)
        elif axis == "x":
            bounds = (low, high, span[0], span[1])
        else:
            raise RegionError(f"Asse sconosciuto: {axis}")
        return cls("strip", bounds=tuple(float(b) for b in bounds), margin=margin)

    @classmethod
    def full_interior(cls, margin: float) -> "Region":
        return cls("full-interior", margin=float(margin))

    def _resolved_bounds(self, grid: Optional[GridSpec]) -> Tuple[float, float, float, float]:
        if self.kind == "full-interior":
            if grid is None:
                raise RegionError("La regione full-interior richiede la griglia")
            x0, x1, y0, y1 = grid.bounds
            m = self.margin
            return (x0 + m, x1 - m, y0 + m, y1 - m)
        if self.kind in ("square", "strip"):
            return self.bounds
        cx, cy = self.center
        r = self.radius
        return (cx - r, cx + r, cy - r, cy + r)

    def validate(self, grid: GridSpec):
        """La chiusura della regione, allargata del margine, sta nella griglia"""
        xmin, xmax, ymin, ymax = self._resolved_bounds(grid)
        gx0, gx1, gy0, gy1 = grid.bounds
        m = 0.0 if self.kind == "full-interior" else self.margin
        tol = 1e-12 * max(1.0, abs(gx0), abs(gx1), abs(gy0), abs(gy1))
        if (xmin - m < gx0 - tol or xmax + m > gx1 + tol or ymin - m < gy0 - tol or ymax + m > gy1 + tol):
            raise RegionError(f"Regione {self.kind} fuori dalla griglia (margine {m})")
        if xmin > xmax or ymin > ymax:
            raise RegionError("Regione vuota: margine troppo grande")

    def contains(self, X: np.ndarray, Y: np.ndarray, grid: Optional[GridSpec] = None, tol: float = 0.0) -> np.ndarray:
        if self.kind in ("disk", "annulus"):
            cx, cy = self.center
            r2 = (X - cx) ** 2 + (Y - cy) ** 2
            inside = r2 <= (self.radius + tol) ** 2
            if self.kind == "annulus":
                inside &= r2 >= (self.inner_radius - tol) ** 2
            return inside
        xmin, xmax, ymin, ymax = self._resolved_bounds(grid)
        return (X >= xmin - tol) & (X <= xmax + tol) & (Y >= ymin - tol) & (Y <= ymax + tol)

    def mask(self, grid: GridSpec) -> np.ndarray:
        """Nodi della griglia appartenenti alla regione"""
        self.validate(grid)
        X, Y = grid.mesh()
        return self.contains(X, Y, grid=grid, tol=1e-9 * grid.h)

    def signed_distance(self, X: np.ndarray, Y: np.ndarray, grid: Optional[GridSpec] = None) -> np.ndarray:
        """Distanza dal bordo della regione, positiva all'interno"""
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        if self.kind in ("disk", "annulus"):
            rho = np.hypot(X - self.center[0], Y - self.center[1])
            dist = self.radius - rho
            if self.kind == "annulus":
                dist = np.minimum(dist, rho - self.inner_radius)
            return dist
        xmin, xmax, ymin, ymax = self._resolved_bounds(grid)
        return np.minimum.reduce([X - xmin, xmax - X, Y - ymin, ymax - Y])

    def boundary_points(self, count: int = 512, grid: Optional[GridSpec] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Campionamento del bordo (per le distanze geometriche)"""
        if self.kind in ("disk", "annulus"):
            theta = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
            cx, cy = self.center
            xs = [cx + self.radius * np.cos(theta)]
            ys = [cy + self.radius * np.sin(theta)]
            if self.kind == "annulus" and self.inner_radius > 0:
                xs.append(cx + self.inner_radius * np.cos(theta))
                ys.append(cy + self.inner_radius * np.sin(theta))
            return np.concatenate(xs), np.concatenate(ys)
        xmin, xmax, ymin, ymax = self._resolved_bounds(grid)
        t = np.linspace(0.0, 1.0, count // 4 + 1)
        xs = np.concatenate([xmin + (xmax - xmin) * t, np.full_like(t, xmax), xmax - (xmax - xmin) * t, np.full_like(t, xmin)])
        ys = np.concatenate([np.full_like(t, ymin), ymin + (ymax - ymin) * t, np.full_like(t, ymax), ymax - (ymax - ymin) * t])
        return xs, ys
