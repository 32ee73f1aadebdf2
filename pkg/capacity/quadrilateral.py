# quadrilateral.py
"""
Quadrilateri generalizzati: poligono (rettangolo o a L) con il bordo diviso in
quattro archi gamma_1..gamma_4 in senso antiorario, e loro immersione nella griglia.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union
import json
import logging

import numpy as np
import shapely
from shapely.geometry import LineString, Polygon

from config.errors import ConfigError, RegionError
from grid.fields import GridSpec

logger = logging.getLogger(__name__)

ArcRef = Union[int, str]


@dataclass(frozen=True)
class Quadrilateral:
    vertices: Tuple[Tuple[float, float], ...]
    arcs: Tuple[Tuple[int, int], ...]
    arc_names: Dict[str, int] = field(default_factory=dict, compare=False)
    name: str = "quadrilateral"

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple((float(x), float(y)) for x, y in self.vertices))
        object.__setattr__(self, "arcs", tuple((int(a), int(b)) for a, b in self.arcs))
        n = len(self.vertices)
        if n < 3:
            raise RegionError("Il poligono richiede almeno 3 vertici")
        if len(self.arcs) != 4:
            raise RegionError(f"Servono esattamente 4 archi, ricevuti {len(self.arcs)}")
        polygon = self.polygon
        if not polygon.is_valid or polygon.area <= 0:
            raise RegionError("Poligono non valido")
        if not polygon.exterior.is_ccw:
            raise RegionError("I vertici devono essere in senso antiorario")
        # archi consecutivi che coprono tutto il bordo
        for k in range(4):
            start, end = self.arcs[k]
            next_start = self.arcs[(k + 1) % 4][0]
            if end <= start or end % n != next_start % n:
                raise RegionError(f"Gli archi non sono consecutivi in senso antiorario (arco {k + 1})")
        if sum(end - start for start, end in self.arcs) != n:
            raise RegionError("Gli archi non coprono esattamente il bordo")

    @property
    def polygon(self) -> Polygon:
        return Polygon(self.vertices)

    def arc_line(self, k: int) -> LineString:
        start, end = self.arcs[k]
        n = len(self.vertices)
        return LineString([self.vertices[i % n] for i in range(start, end + 1)])

    def arc_index(self, ref: ArcRef) -> int:
        if isinstance(ref, str):
            if ref not in self.arc_names:
                raise ConfigError(f"Arco sconosciuto: {ref}", field="arcs")
            return self.arc_names[ref]
        if not 0 <= int(ref) < 4:
            raise ConfigError(f"Indice d'arco fuori da 0..3: {ref}", field="arcs")
        return int(ref)

    # Costruttori
    @classmethod
    def rectangle(cls, width: float, height: float, origin: Tuple[float, float] = (0.0, 0.0)) -> "Quadrilateral":
        """gamma_1 = sinistra, gamma_2 = basso, gamma_3 = destra, gamma_4 = alto"""
        x0, y0 = origin
        vertices = ((x0, y0), (x0 + width, y0), (x0 + width, y0 + height), (x0, y0 + height))
        return cls(vertices, ((3, 4), (0, 1), (1, 2), (2, 3)),
                   arc_names={"left": 0, "bottom": 1, "right": 2, "top": 3},
                   name=f"rectangle({width:g}x{height:g})")

    @classmethod
    def l_shape(cls) -> "Quadrilateral":
        """Esagono a L con archi [0,1], [1,2], [2,4], [4,6]"""
        vertices = ((0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2))
        return cls(vertices, ((0, 1), (1, 2), (2, 4), (4, 6)), name="l_shape")

    @classmethod
    def from_dict(cls, data: dict) -> "Quadrilateral":
        if "l_shape" in data:
            return cls.l_shape()
        if "rectangle" in data:
            rect = data["rectangle"]
            return cls.rectangle(rect["width"], rect["height"], tuple(rect.get("origin", (0.0, 0.0))))
        try:
            return cls(tuple(map(tuple, data["vertices"])), tuple(map(tuple, data["arcs"])),
                       arc_names=dict(data.get("arc_names", {})), name=data.get("name", "quadrilateral"))
        except KeyError as e:
            raise ConfigError(f"Campo mancante nella geometria: {e}", field="geometry") from e

    @classmethod
    def from_json(cls, path: Path) -> "Quadrilateral":
        """Documento JSON: vertici del poligono e quattro intervalli di indici"""
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    def scaled(self, factor: float) -> "Quadrilateral":
        return Quadrilateral(tuple((factor * x, factor * y) for x, y in self.vertices), self.arcs,
                             arc_names=dict(self.arc_names), name=f"{self.name}*{factor:g}")

    def embed(self, h: float) -> "EmbeddedQuadrilateral":
        return EmbeddedQuadrilateral(self, h)


class EmbeddedQuadrilateral:
    """Celle attive, nodi attivi e nodi di ciascun arco sulla griglia di passo h"""

    def __init__(self, quad: Quadrilateral, h: float):
        self.quad = quad
        minx, miny, maxx, maxy = quad.polygon.bounds
        self.grid = GridSpec.from_spacing((minx, miny), (maxx - minx, maxy - miny), h)
        h = self.grid.h
        for x, y in quad.vertices:
            i, j = (x - minx) / h, (y - miny) / h
            if abs(i - round(i)) > 1e-9 or abs(j - round(j)) > 1e-9:
                raise RegionError(f"Il vertice ({x:g}, {y:g}) non cade su un nodo della griglia h={h:g}")

        X, Y = self.grid.mesh()
        cx = X[:-1, :-1] + 0.5 * h
        cy = Y[:-1, :-1] + 0.5 * h
        self.active_cells = shapely.contains_xy(quad.polygon, cx, cy)

        ny, nx = self.grid.shape
        active_nodes = np.zeros((ny, nx), dtype=bool)
        for dj in (0, 1):
            for di in (0, 1):
                active_nodes[dj:ny - 1 + dj, di:nx - 1 + di] |= self.active_cells
        self.active_nodes = active_nodes

        points = shapely.points(X.ravel(), Y.ravel())
        tol = 1e-9 * h
        self.arc_nodes: List[np.ndarray] = []
        for k in range(4):
            on_arc = (shapely.distance(quad.arc_line(k), points) <= tol).reshape(ny, nx) & active_nodes
            if np.count_nonzero(on_arc) < 2:
                raise RegionError(f"L'arco {k + 1} contiene meno di 2 nodi di bordo")
            self.arc_nodes.append(on_arc)
        logger.debug(f"{quad.name}: {int(self.active_cells.sum())} celle attive, h={h:g}")
