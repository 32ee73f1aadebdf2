# amle_solver.py
"""
Schema indipendente per eps = 0: estensione lipschitziana assolutamente minimizzante.
Ogni nodo interno prende il valore medio della coppia di vicini opposti (x+d, x-d)
con pendenza |u(x+d) - u(x-d)| / |d| massima tra le direzioni dello stencil.
"""

from typing import List, Optional, Tuple
import logging

import numpy as np

from grid.fields import GridSpec, ScalarField
from solvers.base_solver import BaseSolver
from solvers.boundary import BoundaryData, SolverConfig, transfinite_interpolation
from solvers.regularized_solver import COLOURS

logger = logging.getLogger(__name__)

# Direzioni primitive (una per coppia opposta)
STENCIL_OFFSETS = {
    1: [(1, 0), (0, 1), (1, 1), (1, -1)],
    2: [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2), (2, -1), (1, -2)],
}

MIN_CASCADE_NODES = 9


class AmleSolver(BaseSolver):
    """Gauss-Seidel a quattro colori sul punto medio della direzione più ripida"""

    label = "AMLE"

    def __init__(self, grid: GridSpec, cfg: SolverConfig, radius: int = 2):
        if radius not in STENCIL_OFFSETS:
            raise ValueError(f"Raggio di stencil non supportato: {radius}")
        super().__init__(grid, cfg)
        self.radius = radius
        self.offsets = STENCIL_OFFSETS[radius]
        ny, nx = grid.shape
        self._J, self._I = np.meshgrid(np.arange(ny), np.arange(nx), indexing="ij")
        interior = ~grid.boundary_mask()
        self._colour_nodes: List[Tuple[np.ndarray, np.ndarray]] = []
        for pj, pi in COLOURS:
            sel = interior & (self._J % 2 == pj) & (self._I % 2 == pi)
            self._colour_nodes.append((self._J[sel], self._I[sel]))

    @property
    def max_iterations(self) -> int:
        return self.cfg.max_inner_sweeps

    def _update_nodes(self, values: np.ndarray, jj: np.ndarray, ii: np.ndarray) -> np.ndarray:
        ny, nx = values.shape
        best_slope = np.full(jj.shape, -np.inf)
        best_mid = values[jj, ii].copy()
        for di, dj in self.offsets:
            jp, ip = jj + dj, ii + di
            jm, im = jj - dj, ii - di
            # le direzioni che escono dalla griglia sono ignorate
            valid = (jp >= 0) & (jp < ny) & (ip >= 0) & (ip < nx) & (jm >= 0) & (jm < ny) & (im >= 0) & (im < nx)
            plus = values[np.clip(jp, 0, ny - 1), np.clip(ip, 0, nx - 1)]
            minus = values[np.clip(jm, 0, ny - 1), np.clip(im, 0, nx - 1)]
            slope = np.where(valid, np.abs(plus - minus) / np.hypot(di, dj), -np.inf)
            better = slope > best_slope
            best_slope = np.where(better, slope, best_slope)
            best_mid = np.where(better, 0.5 * (plus + minus), best_mid)
        return best_mid

    def step(self, values: np.ndarray) -> Tuple[np.ndarray, float]:
        change = 0.0
        for jj, ii in self._colour_nodes:
            updated = self._update_nodes(values, jj, ii)
            change = max(change, float(np.max(np.abs(updated - values[jj, ii]), initial=0.0)))
            values[jj, ii] = updated
        return values, change

    def solve(self, boundary: BoundaryData, initial: Optional[np.ndarray] = None) -> ScalarField:
        ring = boundary.sample(self.grid)
        start = transfinite_interpolation(self.grid, ring) if initial is None else initial.copy()
        mask = self.grid.boundary_mask()
        start[mask] = ring[mask]
        values = self.iterate(start)
        return ScalarField(self.grid, values)


def prolongate(coarse: np.ndarray, fine_grid: GridSpec) -> np.ndarray:
    """Interpolazione bilineare da una griglia di passo 2h"""
    fine = np.zeros(fine_grid.shape)
    fine[::2, ::2] = coarse
    fine[1::2, ::2] = 0.5 * (coarse[:-1, :] + coarse[1:, :])
    fine[::2, 1::2] = 0.5 * (coarse[:, :-1] + coarse[:, 1:])
    fine[1::2, 1::2] = 0.25 * (coarse[:-1, :-1] + coarse[1:, :-1] + coarse[:-1, 1:] + coarse[1:, 1:])
    return fine


def amle_cross_check(grid: GridSpec, g: BoundaryData, cfg: SolverConfig = SolverConfig(),
                     radius: int = 2, cascadic: bool = True) -> ScalarField:
    """
    Candidato discreto infinito-armonico. Con cascadic=True l'iterato iniziale
    viene dalla stessa iterazione sulla griglia di passo 2h (se g è valutabile).
    """
    initial = None
    coarse = grid.coarsened()
    if cascadic and g.evaluable and coarse is not None and min(coarse.nodes) >= MIN_CASCADE_NODES:
        coarse_solution = amle_cross_check(coarse, g, cfg, radius=radius, cascadic=True)
        initial = prolongate(coarse_solution.values, grid)
        logger.debug(f"Inizializzazione a cascata da {coarse.nodes[0]}x{coarse.nodes[1]}")
    return AmleSolver(grid, cfg, radius=radius).solve(g, initial=initial)
