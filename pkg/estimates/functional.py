# functional.py
"""
Il funzionale I_eps(phi) nelle quattro forme (determinante, puntuale, divergenza,
debole) e le verifiche puntuali delle identità sul determinante.
"""

from typing import Any, Dict, Optional, Tuple
import logging

import numpy as np

from config.errors import MissingEpsilon
from grid.fields import ScalarField
from grid.quadrature import Quadrature
from grid.stencils import FiniteDifferences
from estimates.test_functions import TestFunction
from solvers.boundary import gradient_floor

logger = logging.getLogger(__name__)

FORMS = ("det", "pointwise", "divergence", "weak")
CHECKS = ("alg2x2", "det_divergence", "key_II", "key_III", "nonneg_det")


def floored_quotient(numerator: np.ndarray, speed: np.ndarray, power: float, delta: float) -> Tuple[np.ndarray, int]:
    """numerator / |Du|^power, posto a 0 dove |Du| <= delta; restituisce anche i nodi esclusi"""
    floored = speed <= delta
    safe = np.where(floored, 1.0, speed)
    out = np.where(floored, 0.0, numerator / safe ** power)
    return out, int(np.count_nonzero(floored))


def speed_gradient_norm(u: ScalarField) -> Tuple[np.ndarray, np.ndarray]:
    """|Du| e |D|Du||, quest'ultimo derivando il campo campionato |Du|"""
    h = u.grid.h
    g1, g2 = FiniteDifferences.gradient_arrays(u.values, h)
    speed = np.hypot(g1, g2)
    s1, s2 = FiniteDifferences.gradient_arrays(speed, h)
    return speed, np.hypot(s1, s2)


def half_speed_squared_gradient(u: ScalarField) -> Tuple[np.ndarray, np.ndarray]:
    """D^2u Du come (1/2) D(|Du|^2) dal campo campionato"""
    h = u.grid.h
    g1, g2 = FiniteDifferences.gradient_arrays(u.values, h)
    d1, d2 = FiniteDifferences.gradient_arrays(g1 * g1 + g2 * g2, h)
    return 0.5 * d1, 0.5 * d2


def _delta_for(u: ScalarField, delta: Optional[float]) -> float:
    return gradient_floor(u.scale(), delta)


def functional_pairing(u: ScalarField, epsilon: float, phi: TestFunction, form: str,
                       delta: Optional[float] = None, margin_cells: int = 2) -> float:
    """
    I_eps(phi) nella forma richiesta. La forma debole usa solo derivate prime di u
    e l'hessiana esatta di phi; la forma puntuale applica la soglia delta al quoziente.
    """
    if form not in FORMS:
        raise ValueError(f"Forma sconosciuta: {form}")
    grid = u.grid
    phi.check_support(grid, margin_cells)
    X, Y = grid.mesh()
    h = grid.h
    phi_values = phi.value(X, Y)
    g1, g2 = FiniteDifferences.gradient_arrays(u.values, h)

    if form == "det":
        a11, a12, a22 = FiniteDifferences.hessian_arrays(u.values, h)
        density = -(a11 * a22 - a12 * a12) * phi_values
    elif form == "pointwise":
        a11, _, a22 = FiniteDifferences.hessian_arrays(u.values, h)
        speed, speed_grad = speed_gradient_norm(u)
        quotient, floored = floored_quotient((a11 + a22) ** 2, speed, 2.0, _delta_for(u, delta))
        if floored:
            logger.info(f"Forma puntuale: {floored} nodi sotto la soglia delta")
        density = (speed_grad ** 2 + epsilon * quotient) * phi_values
    elif form == "divergence":
        a11, a12, a22 = FiniteDifferences.hessian_arrays(u.values, h)
        p1, p2 = phi.gradient(X, Y)
        lap = a11 + a22
        hg1 = a11 * g1 + a12 * g2
        hg2 = a12 * g1 + a22 * g2
        density = 0.5 * (lap * (g1 * p1 + g2 * p2) - (hg1 * p1 + hg2 * p2))
    else:
        p11, p12, p22 = phi.hessian(X, Y)
        density = 0.5 * (-(g1 * g1 * p11 + 2.0 * g1 * g2 * p12 + g2 * g2 * p22) + (g1 * g1 + g2 * g2) * (p11 + p22))

    return Quadrature.integrate_values(grid, density)


def determinant_identity_residual(H: np.ndarray, g: np.ndarray) -> float:
    """
    Massimo residuo relativo di (-det H)|g|^2 = |Hg|^2 - tr(H)(g.Hg) su array
    di matrici simmetriche (..., 2, 2) e vettori (..., 2).
    """
    H = np.asarray(H, dtype=float)
    g = np.asarray(g, dtype=float)
    a11, a12, a22 = H[..., 0, 0], 0.5 * (H[..., 0, 1] + H[..., 1, 0]), H[..., 1, 1]
    residual, scale = _alg2x2(a11, a12, a22, g[..., 0], g[..., 1])
    return float(np.max(np.abs(residual) / scale))


def _alg2x2(a11, a12, a22, g1, g2):
    hg1 = a11 * g1 + a12 * g2
    hg2 = a12 * g1 + a22 * g2
    g_sq = g1 * g1 + g2 * g2
    lhs = -(a11 * a22 - a12 * a12) * g_sq
    rhs = hg1 * hg1 + hg2 * hg2 - (a11 + a22) * (g1 * hg1 + g2 * hg2)
    scale = 1.0 + (a11 * a11 + 2.0 * a12 * a12 + a22 * a22) * g_sq
    return lhs - rhs, scale


def _default_test_function(u: ScalarField, margin_cells: int) -> TestFunction:
    x0, x1, y0, y1 = u.grid.bounds
    m = (margin_cells + 1) * u.grid.h
    radius = 0.5 * min(x1 - x0, y1 - y0) - m
    return TestFunction(center=(0.5 * (x0 + x1), 0.5 * (y0 + y1)), radius=radius, order=3)


def pointwise_identity_check(u: ScalarField, epsilon: Optional[float], which: str,
                             phi: Optional[TestFunction] = None, delta: Optional[float] = None,
                             margin_cells: int = 2) -> Dict[str, Any]:
    """Riepilogo delle identità puntuali sul campo u (massimo residuo o valore minimo)"""
    if which not in CHECKS:
        raise ValueError(f"Verifica sconosciuta: {which}")
    if which in ("key_II", "key_III", "nonneg_det") and epsilon is None:
        raise MissingEpsilon(f"La verifica {which} richiede epsilon")

    grid = u.grid
    h = grid.h
    margin = grid.margin_mask(margin_cells)
    g1, g2 = FiniteDifferences.gradient_arrays(u.values, h)
    a11, a12, a22 = FiniteDifferences.hessian_arrays(u.values, h)
    minus_det = -(a11 * a22 - a12 * a12)
    summary: Dict[str, Any] = {"which": which}

    if which == "alg2x2":
        residual, scale = _alg2x2(a11, a12, a22, g1, g2)
        summary["max_abs_residual"] = float(np.max(np.abs(residual)))
        summary["max_relative_residual"] = float(np.max(np.abs(residual) / scale))
    elif which == "det_divergence":
        phi = phi or _default_test_function(u, margin_cells)
        det_value = functional_pairing(u, 0.0, phi, "det", margin_cells=margin_cells)
        div_value = functional_pairing(u, 0.0, phi, "divergence", margin_cells=margin_cells)
        summary.update({"det": det_value, "divergence": div_value, "max_abs_residual": abs(det_value - div_value)})
    elif which == "key_II":
        v1, v2 = half_speed_squared_gradient(u)
        lap = a11 + a22
        residual = minus_det * (g1 * g1 + g2 * g2) - (v1 * v1 + v2 * v2) - epsilon * lap * lap
        _residual_summary(summary, residual[margin])
    elif which == "key_III":
        speed, speed_grad = speed_gradient_norm(u)
        quotient, floored = floored_quotient((a11 + a22) ** 2, speed, 2.0, _delta_for(u, delta))
        residual = minus_det - speed_grad ** 2 - epsilon * quotient
        # i nodi sotto soglia sono esclusi
        keep = margin & (speed > _delta_for(u, delta))
        _residual_summary(summary, residual[keep])
        summary["floored_nodes"] = floored
    else:
        summary["min_value"] = float(np.min(minus_det[margin]))

    logger.debug(f"Verifica {which}: {summary}")
    return summary


def _residual_summary(summary: Dict[str, Any], residual: np.ndarray):
    if residual.size == 0:
        summary["max_abs_residual"] = 0.0
        summary["l1_average"] = 0.0
        return
    summary["max_abs_residual"] = float(np.max(np.abs(residual)))
    summary["l1_average"] = float(np.mean(np.abs(residual)))
