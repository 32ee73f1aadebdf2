# convergence.py
"""
Studio di convergenza u^eps -> u: errori in norma sup e del gradiente in L^p(V)
per ogni coppia (eps, h), costante di Lipschitz misurata e, opzionalmente,
errori di |Du^eps|^alpha.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple
import logging
import math

import numpy as np
import pandas as pd

from analytic.reference_functions import ReferenceFunction
from config.errors import GridError
from grid.fields import GridSpec, Region, ScalarField
from grid.quadrature import Quadrature
from grid.stencils import FiniteDifferences
from solvers.boundary import BoundaryData, RegularizationParams, SolverConfig
from solvers.regularized_solver import solve_dirichlet

logger = logging.getLogger(__name__)

MONOTONE_SLACK = 1.10
LIPSCHITZ_FACTOR = 2.0


@dataclass
class ConvergenceResult:
    table: pd.DataFrame
    passed: bool
    error_columns: List[str]


def _grid_for(origin: Tuple[float, float], extent: Tuple[float, float], h: float) -> GridSpec:
    return GridSpec.from_spacing(origin, extent, h)


def _restrict(fine: np.ndarray, fine_grid: GridSpec, coarse_grid: GridSpec) -> np.ndarray:
    """Iniezione dei valori fini sui nodi della griglia grossa (griglie annidate)"""
    stride = int(round(coarse_grid.h / fine_grid.h))
    if stride < 1 or abs(stride * fine_grid.h - coarse_grid.h) > 1e-9 * coarse_grid.h:
        raise GridError("Le griglie dello studio di convergenza devono essere annidate")
    out = fine[::stride, ::stride]
    if out.shape != coarse_grid.shape:
        raise GridError(f"Griglie non annidate: {out.shape} contro {coarse_grid.shape}")
    return out


def _monotone(values: Sequence[float], floor: float) -> bool:
    return all(b <= MONOTONE_SLACK * a + floor for a, b in zip(values, values[1:]))


def convergence_study(g: BoundaryData, eps_list: Sequence[float], h_list: Sequence[float],
                      p_list: Sequence[float], origin: Tuple[float, float] = (0.5, 0.5),
                      extent: Tuple[float, float] = (1.0, 1.0), reference: Optional[ReferenceFunction] = None,
                      alphas: Sequence[float] = (), cfg: SolverConfig = SolverConfig(),
                      region: Optional[Region] = None) -> ConvergenceResult:
    """
    Con `reference` l'errore è misurato contro la soluzione esatta; altrimenti contro
    la soluzione a eps minimo sulla griglia più fine.
    """
    error_columns = ["sup_error"] + [f"grad_error_p{p:g}" for p in p_list] + \
        [f"speed_power_error_a{a:g}_p{p:g}" for a in alphas for p in p_list]
    columns = ["epsilon", "h"] + error_columns + ["lipschitz"]
    if not eps_list or not h_list:
        return ConvergenceResult(pd.DataFrame(columns=columns), True, error_columns)

    eps_sorted = sorted(eps_list, reverse=True)
    h_sorted = sorted(h_list, reverse=True)
    V = region or Region.full_interior(0.125 * min(extent))

    solutions: Dict[Tuple[float, float], ScalarField] = {}
    for h in h_sorted:
        grid = _grid_for(origin, extent, h)
        for eps in eps_sorted:
            solutions[(eps, h)] = solve_dirichlet(grid, g, RegularizationParams(epsilon=eps), cfg)

    surrogate = None
    if reference is None:
        surrogate = solutions[(eps_sorted[-1], h_sorted[-1])]
        logger.info("Studio di convergenza: riferimento surrogato (eps minimo, h minimo)")

    rows = []
    for h in h_sorted:
        for eps in eps_sorted:
            u = solutions[(eps, h)]
            grid = u.grid
            X, Y = grid.mesh()
            if reference is not None:
                exact = np.broadcast_to(reference.value(X, Y), grid.shape)
                e1, e2 = (np.broadcast_to(c, grid.shape) for c in reference.gradient(X, Y))
            else:
                exact = _restrict(surrogate.values, surrogate.grid, grid)
                e1, e2 = FiniteDifferences.gradient_arrays(surrogate.values, surrogate.grid.h)
                e1, e2 = _restrict(e1, surrogate.grid, grid), _restrict(e2, surrogate.grid, grid)

            mask = V.mask(grid)
            g1, g2 = FiniteDifferences.gradient_arrays(u.values, h)
            row = {"epsilon": eps, "h": h, "sup_error": float(np.max(np.abs(u.values - exact)))}
            grad_gap = np.hypot(g1 - e1, g2 - e2)
            for p in p_list:
                row[f"grad_error_p{p:g}"] = Quadrature.lp_norm_values(grid, grad_gap, p, mask)
            speed, exact_speed = np.hypot(g1, g2), np.hypot(e1, e2)
            for a in alphas:
                for p in p_list:
                    row[f"speed_power_error_a{a:g}_p{p:g}"] = Quadrature.lp_norm_values(
                        grid, speed ** a - exact_speed ** a, p, mask)
            row["lipschitz"] = float(np.max(speed[mask]))
            rows.append(row)

    table = pd.DataFrame(rows, columns=columns)

    # monotonia in eps alla griglia più fine (il surrogato stesso è escluso)
    finest = table[table["h"] == h_sorted[-1]].sort_values("epsilon", ascending=False)
    if surrogate is not None:
        finest = finest[finest["epsilon"] != eps_sorted[-1]]
    floor = 10.0 * cfg.residual_tolerance
    passed = all(_monotone(list(finest[col]), floor) for col in error_columns)

    lipschitz = table["lipschitz"].to_numpy()
    if lipschitz.size and lipschitz.min() > 0:
        passed = passed and bool(lipschitz.max() <= LIPSCHITZ_FACTOR * lipschitz.min())

    logger.info(f"Studio di convergenza: {len(table)} righe, esito {'OK' if passed else 'FALLITO'}")
    return ConvergenceResult(table, passed, error_columns)


def observed_orders(h_values: Sequence[float], errors: Sequence[float], floor: float = 0.0) -> List[float]:
    """
    Ordini log(e_k / e_k+1) / log(h_k / h_k+1) tra passi consecutivi, h decrescente.
    Un errore già sotto `floor` conta come ordine infinito.
    """
    pairs = sorted(zip(h_values, errors), key=lambda item: -item[0])
    orders = []
    for (h_coarse, e_coarse), (h_fine, e_fine) in zip(pairs, pairs[1:]):
        if e_coarse <= floor or e_fine <= floor:
            orders.append(math.inf)
        else:
            orders.append(math.log(e_coarse / e_fine) / math.log(h_coarse / h_fine))
    return orders
