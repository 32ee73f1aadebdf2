# dual_equation.py
"""
Equazione duale per v = |Du|^2/2: -div(Dv/|Dv|) = |Dv|/(2v) fuori dagli assi
e, nel caso di Aronsson, la misura singolare -2 H^1 concentrata sugli assi.
"""

from typing import Optional, Tuple, Union
import logging

import numpy as np
from scipy import integrate

from analytic.reference_functions import AronssonDualFunction, ReferenceFunction
from config.errors import DegenerateGradient
from config.settings import config
from estimates.test_functions import TestFunction
from grid.fields import GridSpec, Region, ScalarField
from grid.stencils import FiniteDifferences
from solvers.boundary import gradient_floor

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1024


def curvature_residual(v, v1, v2, v11, v12, v22) -> np.ndarray:
    """-(v2^2 v11 - 2 v1 v2 v12 + v1^2 v22)/|Dv|^3 - |Dv|/(2v)"""
    speed = np.hypot(v1, v2)
    curvature = -(v2 * v2 * v11 - 2.0 * v1 * v2 * v12 + v1 * v1 * v22) / speed ** 3
    return curvature - speed / (2.0 * v)


def dual_equation_residual(v: Union[ScalarField, ReferenceFunction], R: Region,
                           grid: Optional[GridSpec] = None, delta: Optional[float] = None) -> ScalarField:
    """
    Residuo nodo per nodo (nullo fuori da R). Con una ReferenceFunction si usano le
    derivate esatte (modo analitico, serve la griglia); con uno ScalarField gli stencil.
    """
    if isinstance(v, ScalarField):
        grid = v.grid
        values = v.values
        v1, v2 = FiniteDifferences.gradient_arrays(values, grid.h)
        v11, v12, v22 = FiniteDifferences.hessian_arrays(values, grid.h)
        scale = v.scale()
    else:
        if grid is None:
            raise ValueError("Il modo analitico richiede la griglia dei nodi")
        X, Y = grid.mesh()
        mask_all = R.mask(grid)
        Xr, Yr = X[mask_all], Y[mask_all]
        values = np.zeros(grid.shape)
        v1, v2 = np.zeros(grid.shape), np.zeros(grid.shape)
        v11, v12, v22 = np.zeros(grid.shape), np.zeros(grid.shape), np.zeros(grid.shape)
        values[mask_all] = v.value(Xr, Yr)
        g1, g2 = v.gradient(Xr, Yr)
        h11, h12, h22 = v.hessian(Xr, Yr)
        v1[mask_all], v2[mask_all] = g1, g2
        v11[mask_all], v12[mask_all], v22[mask_all] = h11, h12, h22
        scale = max(1.0, float(np.max(np.abs(values[mask_all]), initial=0.0)))

    mask = R.mask(grid)
    threshold = gradient_floor(scale, delta)
    speed = np.hypot(v1, v2)
    if np.any(speed[mask] <= threshold):
        raise DegenerateGradient(f"|Dv| <= {threshold:.3g} in {int(np.count_nonzero(speed[mask] <= threshold))} nodi di R")
    if np.any(values[mask] == 0):
        raise DegenerateGradient("v si annulla in R")

    out = np.zeros(grid.shape)
    out[mask] = curvature_residual(values[mask], v1[mask], v2[mask], v11[mask], v12[mask], v22[mask])
    return ScalarField(grid, out)


def _support_grid(phi: TestFunction, samples: int) -> Tuple[np.ndarray, np.ndarray, float]:
    """Nodi a metà cella sul quadrato che contiene il supporto, mai sugli assi"""
    cx, cy = phi.center
    r = phi.radius
    for n in (samples, samples + 1, samples + 3):
        h = 2.0 * r / n
        x = cx - r + (np.arange(n) + 0.5) * h
        y = cy - r + (np.arange(n) + 0.5) * h
        if np.min(np.abs(x)) > 1e-9 * h and np.min(np.abs(y)) > 1e-9 * h:
            X, Y = np.meshgrid(x, y, indexing="xy")
            return X, Y, h
    raise DegenerateGradient("Impossibile evitare gli assi con la griglia a metà cella")


def line_value(phi: TestFunction) -> float:
    """-2 (int phi(x1, 0) dx1 + int phi(0, x2) dx2) con quadratura adattiva 1D"""
    cx, cy = phi.center
    r = phi.radius
    total = 0.0
    if abs(cy) < r:
        a = np.sqrt(r * r - cy * cy)
        total += integrate.quad(lambda t: float(phi.value(t, 0.0)), cx - a, cx + a)[0]
    if abs(cx) < r:
        a = np.sqrt(r * r - cx * cx)
        total += integrate.quad(lambda t: float(phi.value(0.0, t)), cy - a, cy + a)[0]
    return -2.0 * total


def singular_measure_check(phi: TestFunction, samples: int = DEFAULT_SAMPLES,
                           eta_multipliers=config.ETA_MULTIPLIERS) -> Tuple[float, float]:
    """
    (f_value, line_value): f_value = int [<Dv/|Dv|, Dphi> - (|Dv|/2v) phi] calcolato
    escludendo strisce |x_i| <= eta attorno agli assi ed estrapolando a eta -> 0
    linearmente in eta^{2/3}.
    """
    v = AronssonDualFunction()
    X, Y, h = _support_grid(phi, samples)
    g1, g2 = v.gradient(X, Y)
    speed = np.hypot(g1, g2)
    p1, p2 = phi.gradient(X, Y)
    density = (g1 * p1 + g2 * p2) / speed - speed / (2.0 * v.value(X, Y)) * phi.value(X, Y)

    etas = np.array([m * h for m in eta_multipliers], dtype=float)
    totals = []
    for eta in etas:
        keep = (np.abs(X) > eta) & (np.abs(Y) > eta)
        totals.append(float(np.sum(density[keep])) * h * h)
    totals = np.array(totals)

    design = np.column_stack([np.ones_like(etas), etas ** (2.0 / 3.0)])
    coeffs, *_ = np.linalg.lstsq(design, totals, rcond=None)
    f_value = float(coeffs[0])
    lv = line_value(phi)
    logger.info(f"Misura singolare per phi centrata in {phi.center}, r={phi.radius:g}: "
                f"f={f_value:.6f}, linea={lv:.6f}")
    return f_value, lv
