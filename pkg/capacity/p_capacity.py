# p_capacity.py
"""
p-capacità tra due archi opposti: minimo dell'energia discreta sum |Du|^p
su elementi P1 (media delle due triangolazioni di ogni cella), u = 1 su E,
u = 0 su F, condizione naturale sugli altri due archi.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple
import logging
import math

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from capacity.quadrilateral import ArcRef, EmbeddedQuadrilateral, Quadrilateral
from config.errors import NonConvergence, UnsupportedExponent
from config.settings import config
from grid.fields import ScalarField
from solvers.base_solver import BaseSolver
from solvers.boundary import SolverConfig

logger = logging.getLogger(__name__)

DEFAULT_SPACING = 1.0 / 64


@dataclass
class CapacityResult:
    p: float
    value: float
    minimizer: ScalarField
    converged: bool
    iterations: int = 0
    arcs: Tuple[int, int] = (0, 2)


class P1Energy:
    """Operatori gradiente per triangolo e pesi di quadratura"""

    # (nodo +, nodo -) per la componente x e per la componente y, offset (dj, di) nella cella
    TRIANGLES = (
        (((0, 1), (0, 0)), ((1, 1), (0, 1))),
        (((1, 1), (1, 0)), ((1, 0), (0, 0))),
        (((0, 1), (0, 0)), ((1, 0), (0, 0))),
        (((1, 1), (1, 0)), ((1, 1), (0, 1))),
    )

    def __init__(self, embedded: EmbeddedQuadrilateral):
        grid = embedded.grid
        ny, nx = grid.shape
        h = grid.h
        J, I = np.nonzero(embedded.active_cells)
        n_cells = J.size
        self.n_nodes = ny * nx

        rows_x, cols_x, data_x = [], [], []
        rows_y, cols_y, data_y = [], [], []
        for t, (x_pair, y_pair) in enumerate(self.TRIANGLES):
            rows = t * n_cells + np.arange(n_cells)
            for (dj, di), sign in zip(x_pair, (1.0, -1.0)):
                rows_x.append(rows)
                cols_x.append((J + dj) * nx + (I + di))
                data_x.append(np.full(n_cells, sign / h))
            for (dj, di), sign in zip(y_pair, (1.0, -1.0)):
                rows_y.append(rows)
                cols_y.append((J + dj) * nx + (I + di))
                data_y.append(np.full(n_cells, sign / h))

        shape = (4 * n_cells, self.n_nodes)
        self.Gx = sparse.csr_matrix((np.concatenate(data_x), (np.concatenate(rows_x), np.concatenate(cols_x))), shape=shape)
        self.Gy = sparse.csr_matrix((np.concatenate(data_y), (np.concatenate(rows_y), np.concatenate(cols_y))), shape=shape)
        # area h^2/2 per triangolo, media sulle due diagonali
        self.weights = np.full(4 * n_cells, 0.25 * h * h)

    def triangle_gradients(self, flat: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return self.Gx @ flat, self.Gy @ flat

    def energy(self, flat: np.ndarray, p: float) -> float:
        gx, gy = self.triangle_gradients(flat)
        return float(np.sum(self.weights * np.hypot(gx, gy) ** p))

    def stiffness(self, coefficient: np.ndarray) -> sparse.csr_matrix:
        W = sparse.diags(self.weights * coefficient)
        return (self.Gx.T @ W @ self.Gx + self.Gy.T @ W @ self.Gy).tocsr()


class PLaplaceSolver(BaseSolver):
    """Iterazione di Kacanov: coefficiente (|Du_T|^2 + mu)^{(p-2)/2} congelato per triangolo"""

    label = "Kacanov"

    def __init__(self, embedded: EmbeddedQuadrilateral, p: float, cfg: SolverConfig, mu: float = config.CAPACITY_MU):
        super().__init__(embedded.grid, cfg)
        self.embedded = embedded
        self.p = p
        self.mu = mu
        self.energy = P1Energy(embedded)
        self.free = np.zeros(self.energy.n_nodes, dtype=bool)
        self.fixed = np.zeros(self.energy.n_nodes, dtype=bool)

    def set_arcs(self, e_arc: int, f_arc: int) -> np.ndarray:
        """Valori iniziali sui nodi di Dirichlet (1 su E, 0 su F); i vertici vanno agli archi di Dirichlet"""
        e_nodes = self.embedded.arc_nodes[e_arc].ravel()
        f_nodes = self.embedded.arc_nodes[f_arc].ravel()
        self.fixed = e_nodes | f_nodes
        self.free = self.embedded.active_nodes.ravel() & ~self.fixed
        values = np.zeros(self.energy.n_nodes)
        values[e_nodes] = 1.0
        return values

    def _linear_solve(self, flat: np.ndarray, coefficient: np.ndarray) -> np.ndarray:
        K = self.energy.stiffness(coefficient)
        free = np.flatnonzero(self.free)
        fixed = np.flatnonzero(self.fixed)
        rhs = -(K[free][:, fixed] @ flat[fixed])
        target = flat.copy()
        target[free] = splu(K[free][:, free].tocsc()).solve(rhs)
        return target

    def harmonic_start(self, flat: np.ndarray) -> np.ndarray:
        """Soluzione per p = 2, usata come iterato iniziale"""
        return self._linear_solve(flat, np.ones_like(self.energy.weights))

    def step(self, values: np.ndarray) -> Tuple[np.ndarray, float]:
        flat = values.ravel()
        gx, gy = self.energy.triangle_gradients(flat)
        coefficient = (gx * gx + gy * gy + self.mu) ** ((self.p - 2.0) / 2.0)
        target = self._linear_solve(flat, coefficient)
        change = float(np.max(np.abs(target - flat)))
        updated = flat + self.cfg.relaxation * (target - flat)
        return updated.reshape(values.shape), change


def p_capacity(quad: Quadrilateral, arcs: Tuple[ArcRef, ArcRef], p: float, cfg: SolverConfig = SolverConfig(),
               h: float = DEFAULT_SPACING, mu: float = config.CAPACITY_MU, strict: bool = True) -> CapacityResult:
    """Cap_p(E, F; U) come energia del minimo discreto"""
    if not (p > 1 and math.isfinite(p)):
        raise UnsupportedExponent(f"Capacità supportata solo per 1 < p < inf, ricevuto {p}")
    e_arc, f_arc = quad.arc_index(arcs[0]), quad.arc_index(arcs[1])
    if (e_arc - f_arc) % 4 != 2:
        raise UnsupportedExponent(f"Gli archi {e_arc + 1} e {f_arc + 1} non sono opposti")

    embedded = quad.embed(h)
    solver = PLaplaceSolver(embedded, p, cfg, mu)
    start = solver.harmonic_start(solver.set_arcs(e_arc, f_arc))

    converged = True
    if p == 2.0:
        flat = start
    else:
        try:
            flat = solver.iterate(start.reshape(embedded.grid.shape)).ravel()
        except NonConvergence:
            if strict:
                raise
            converged = False
            flat = solver.last_values.ravel()

    value = solver.energy.energy(flat, p)
    minimizer = ScalarField(embedded.grid, np.where(embedded.active_nodes.ravel(), flat, 0.0).reshape(embedded.grid.shape))
    logger.info(f"Cap_{p:g}(arco {e_arc + 1}, arco {f_arc + 1}; {quad.name}) = {value:.6g} (h={embedded.grid.h:g})")
    return CapacityResult(p=p, value=value, minimizer=minimizer, converged=converged,
                          iterations=solver.iterations, arcs=(e_arc, f_arc))


def duality_components(quad: Quadrilateral, p: float, cfg: SolverConfig = SolverConfig(),
                       h: float = DEFAULT_SPACING, strict: bool = True) -> Dict[str, float]:
    q = p / (p - 1.0) if p > 1 else float("inf")
    cap_p = p_capacity(quad, (0, 2), p, cfg, h, strict=strict)
    cap_q = p_capacity(quad, (1, 3), q, cfg, h, strict=strict)
    product = cap_p.value ** (1.0 / p) * cap_q.value ** (1.0 / q)
    return {"p": p, "q": q, "cap_p": cap_p.value, "cap_q": cap_q.value, "product": product,
            "converged": cap_p.converged and cap_q.converged}


def duality_product(quad: Quadrilateral, p: float, cfg: SolverConfig = SolverConfig(),
                    h: float = DEFAULT_SPACING) -> float:
    """Cap_p(gamma_1, gamma_3)^{1/p} Cap_q(gamma_2, gamma_4)^{1/q}, q = p/(p-1)"""
    return duality_components(quad, p, cfg, h)["product"]
