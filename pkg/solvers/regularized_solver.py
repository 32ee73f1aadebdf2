# regularized_solver.py
"""
Problema di Dirichlet per -Delta_inf u - eps Delta u = 0 su griglia uniforme.

Iterazione di Picard a coefficienti congelati: dato u^k si assembla l'operatore
lineare trace(A^k D^2 u) con A^k = Du^k (x) Du^k + eps I, discretizzato con gli
stessi stencil di pde_residual (9 punti), si risolve il problema lineare con
sweep SOR a quattro colori (oppure LU sparsa, linear_solver="direct") e si
sotto-rilassa l'aggiornamento. Al punto fisso il residuo discreto è nullo.
"""

from typing import List, Tuple
import logging

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from config.errors import InvalidEpsilon, NonConvergence
from grid.fields import GridSpec, ScalarField
from grid.stencils import FiniteDifferences
from solvers.base_solver import BaseSolver
from solvers.boundary import (
    BoundaryData,
    RegularizationParams,
    SolverConfig,
    boundary_range,
    transfinite_interpolation,
)

logger = logging.getLogger(__name__)

# Colori (j % 2, i % 2): lo stencil a 9 punti non accoppia nodi dello stesso colore
COLOURS: Tuple[Tuple[int, int], ...] = ((0, 0), (0, 1), (1, 0), (1, 1))
# residuo lineare oltre questo multiplo di quello iniziale: SOR divergente
DIVERGENCE_FACTOR = 1e6


def pde_residual_values(values: np.ndarray, h: float, epsilon: float) -> np.ndarray:
    d_dx, d_dy = FiniteDifferences.gradient_arrays(values, h)
    a11, a12, a22 = FiniteDifferences.hessian_arrays(values, h)
    inf_lap = d_dx * d_dx * a11 + 2.0 * d_dx * d_dy * a12 + d_dy * d_dy * a22
    return -inf_lap - epsilon * (a11 + a22)


def pde_residual(u: ScalarField, epsilon: float) -> ScalarField:
    """Residuo nodo per nodo di -Delta_inf u - eps Delta u"""
    if epsilon < 0:
        raise InvalidEpsilon(f"epsilon negativo: {epsilon}")
    return ScalarField(u.grid, pde_residual_values(u.values, u.grid.h, epsilon))


def residual_norm(u: ScalarField, epsilon: float, margin_cells: int = 2) -> float:
    """Norma sup del residuo sui nodi a distanza >= margin_cells*h dal bordo"""
    mask = u.grid.margin_mask(margin_cells)
    if not mask.any():
        return 0.0
    return float(np.max(np.abs(pde_residual(u, epsilon).values[mask])))


def frozen_stencil(values: np.ndarray, h: float, epsilon: float) -> List[Tuple[int, int, np.ndarray]]:
    """
    Coefficienti (moltiplicati per h^2) dello stencil a 9 punti sui nodi interni:
    lista di (dj, di, coeff) con coeff di forma (ny-2, nx-2).
    """
    d_dx, d_dy = FiniteDifferences.gradient_arrays(values, h)
    g1 = d_dx[1:-1, 1:-1]
    g2 = d_dy[1:-1, 1:-1]
    c11 = g1 * g1 + epsilon
    c22 = g2 * g2 + epsilon
    half_c12 = 0.5 * g1 * g2
    return [
        (0, 0, -2.0 * (c11 + c22)),
        (0, 1, c11), (0, -1, c11),
        (1, 0, c22), (-1, 0, c22),
        (1, 1, half_c12), (-1, -1, half_c12),
        (1, -1, -half_c12), (-1, 1, -half_c12),
    ]


class LinearDirichletSolver:
    """Risolve trace(A D^2 u) = 0 con u assegnata sull'anello di bordo"""

    def __init__(self, grid: GridSpec, cfg: SolverConfig):
        self.grid = grid
        self.cfg = cfg
        ny, nx = grid.shape
        J, I = np.meshgrid(np.arange(1, ny - 1), np.arange(1, nx - 1), indexing="ij")
        self.interior_index = (J * nx + I).ravel()
        self.boundary_index = np.flatnonzero(grid.boundary_mask().ravel())
        self._rng = np.random.default_rng()

    def solve(self, current: np.ndarray, stencil) -> np.ndarray:
        if self.cfg.linear_solver == "sweeps":
            return self._solve_sweeps(current, stencil)
        return self._solve_direct(current, stencil)

    def _solve_direct(self, current: np.ndarray, stencil) -> np.ndarray:
        """Fattorizzazione LU sparsa (scipy.sparse.linalg.splu)"""
        ny, nx = self.grid.shape
        n_int = self.interior_index.size
        rows, cols, data = [], [], []
        row_ids = np.arange(n_int)
        for dj, di, coeff in stencil:
            rows.append(row_ids)
            cols.append(self.interior_index + dj * nx + di)
            data.append(coeff.ravel())
        full = sparse.csr_matrix(
            (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
            shape=(n_int, ny * nx),
        )
        a_ii = full[:, self.interior_index].tocsc()
        a_ib = full[:, self.boundary_index]
        flat = current.ravel()
        rhs = -(a_ib @ flat[self.boundary_index])

        solution = current.copy()
        solution.ravel()[self.interior_index] = splu(a_ii).solve(rhs)
        return solution

    def _solve_sweeps(self, current: np.ndarray, stencil) -> np.ndarray:
        """
        SOR a quattro colori, vettorizzato per colore, partendo dall'iterato corrente.
        Si ferma quando il residuo lineare (unità della PDE) scende sotto
        0.1 * residual_tolerance; altrimenti NonConvergence.
        """
        values = current.copy()
        ny, nx = values.shape
        h2 = self.grid.h ** 2
        omega = self.cfg.omega_for(self.grid)
        tolerance = 0.1 * self.cfg.residual_tolerance
        diagonal = stencil[0][2]
        offdiagonal = stencil[1:]
        blocks = [_colour_block(pj, pi, ny, nx) for pj, pi in COLOURS]

        residual = self._linear_residual(values, stencil, h2)
        start = residual
        for sweep in range(1, self.cfg.max_inner_sweeps + 1):
            order = range(4) if self.cfg.deterministic_ordering else self._rng.permutation(4)
            for c in order:
                rows, cols, crow, ccol = blocks[c]
                total = np.zeros_like(diagonal[crow, ccol])
                for dj, di, coeff in offdiagonal:
                    total += coeff[crow, ccol] * values[_shift(rows, dj), _shift(cols, di)]
                gauss_seidel = -total / diagonal[crow, ccol]
                values[rows, cols] += omega * (gauss_seidel - values[rows, cols])

            residual = self._linear_residual(values, stencil, h2)
            if residual <= tolerance:
                logger.debug(f"SOR (omega={omega:.3f}) convergente in {sweep} sweep, residuo {residual:.2e}")
                return values
            if not np.isfinite(residual) or residual > DIVERGENCE_FACTOR * max(start, tolerance):
                raise NonConvergence(f"SOR divergente (omega={omega:.3f}) al passo {sweep}", residual, sweep)

        raise NonConvergence(f"SOR: {self.cfg.max_inner_sweeps} sweep senza convergenza (omega={omega:.3f})",
                             residual, self.cfg.max_inner_sweeps)

    @staticmethod
    def _linear_residual(values: np.ndarray, stencil, h2: float) -> float:
        """max |trace(A D^2 u)| sui nodi interni"""
        ny, nx = values.shape
        total = np.zeros((ny - 2, nx - 2))
        for dj, di, coeff in stencil:
            total += coeff * values[1 + dj:ny - 1 + dj, 1 + di:nx - 1 + di]
        return float(np.max(np.abs(total), initial=0.0)) / h2


def _colour_block(pj: int, pi: int, ny: int, nx: int):
    """Slice dei nodi interni di colore (pj, pi) nella griglia e negli array dei coefficienti"""
    first_j = 1 if pj == 1 else 2
    first_i = 1 if pi == 1 else 2
    rows = slice(first_j, ny - 1, 2)
    cols = slice(first_i, nx - 1, 2)
    return rows, cols, slice(first_j - 1, ny - 2, 2), slice(first_i - 1, nx - 2, 2)


def _shift(block: slice, offset: int) -> slice:
    return slice(block.start + offset, block.stop + offset, block.step)


class RegularizedSolver(BaseSolver):
    """Picard a coefficienti congelati per l'equazione regolarizzata"""

    label = "Picard"

    def __init__(self, grid: GridSpec, params: RegularizationParams, cfg: SolverConfig):
        super().__init__(grid, cfg)
        self.params = params
        self.linear = LinearDirichletSolver(grid, cfg)
        self._margin = grid.margin_mask(cfg.margin_cells)

    def residual(self, values: np.ndarray) -> float:
        if not self._margin.any():
            return 0.0
        res = pde_residual_values(values, self.grid.h, self.params.epsilon)
        return float(np.max(np.abs(res[self._margin])))

    def initial_residual(self, values: np.ndarray) -> float:
        return self.residual(values)

    def step(self, values: np.ndarray) -> Tuple[np.ndarray, float]:
        stencil = frozen_stencil(values, self.grid.h, self.params.epsilon)
        target = self.linear.solve(values, stencil)
        updated = values + self.cfg.relaxation * (target - values)
        return updated, self.residual(updated)

    def solve(self, boundary: BoundaryData) -> ScalarField:
        ring = boundary.sample(self.grid)
        initial = transfinite_interpolation(self.grid, ring)
        logger.info(f"Soluzione eps={self.params.epsilon:g} con dato '{boundary.name}', h={self.grid.h:.5g}")
        values = self.iterate(initial)
        mask = self.grid.boundary_mask()
        values[mask] = ring[mask]
        return ScalarField(self.grid, values)


def solve_dirichlet(grid: GridSpec, g: BoundaryData, params: RegularizationParams,
                    cfg: SolverConfig = SolverConfig()) -> ScalarField:
    """Soluzione discreta u^eps con u^eps = g sul bordo"""
    return RegularizedSolver(grid, params, cfg).solve(g)


def maximum_principle_overshoot(u: ScalarField, g: BoundaryData) -> float:
    """Quanto u esce da [min g, max g] (0 se il principio del massimo vale)"""
    low, high = boundary_range(u.grid, g.sample(u.grid))
    below = low - float(np.min(u.values))
    above = float(np.max(u.values)) - high
    return max(0.0, below, above)

