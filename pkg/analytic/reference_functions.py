# reference_functions.py
"""
Funzioni di riferimento in forma chiusa (Aronsson, lineari, coni, sella) con
gradiente e hessiana esatti, e registro per nome usato da BoundaryData e dalla CLI.
"""

from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Tuple
import logging

import numpy as np

from config.errors import SingularNode
from grid.fields import GridSpec, ScalarField, SymMatField, VectorField2

logger = logging.getLogger(__name__)

Array = np.ndarray


class ReferenceFunction(ABC):
    """Classe base per tutte le funzioni di riferimento"""

    name: str = "reference"
    singular_set: str = "nessuno"
    infinity_harmonic: bool = False

    @abstractmethod
    def value(self, x: Array, y: Array) -> Array:
        pass

    @abstractmethod
    def gradient(self, x: Array, y: Array) -> Tuple[Array, Array]:
        pass

    @abstractmethod
    def hessian(self, x: Array, y: Array) -> Tuple[Array, Array, Array]:
        pass

    def singular_mask(self, x: Array, y: Array) -> Array:
        """Punti dove la funzione non è C^2 (default: nessuno)"""
        return np.zeros(np.broadcast(x, y).shape, dtype=bool)

    # Campionamento su griglia
    def sample(self, grid: GridSpec) -> ScalarField:
        X, Y = grid.mesh()
        return ScalarField(grid, np.broadcast_to(self.value(X, Y), grid.shape))

    def sample_gradient(self, grid: GridSpec) -> VectorField2:
        X, Y = grid.mesh()
        g1, g2 = self.gradient(X, Y)
        return VectorField2(grid, np.broadcast_to(g1, grid.shape), np.broadcast_to(g2, grid.shape))

    def sample_hessian(self, grid: GridSpec) -> SymMatField:
        X, Y = grid.mesh()
        if np.any(self.singular_mask(X, Y)):
            raise SingularNode(f"{self.name}: nodi su {self.singular_set}, hessiana non definita")
        a11, a12, a22 = self.hessian(X, Y)
        shape = grid.shape
        return SymMatField(grid, np.broadcast_to(a11, shape), np.broadcast_to(a12, shape), np.broadcast_to(a22, shape))


def _on_axis(t: Array) -> Array:
    return np.abs(t) <= 1e-12 * np.maximum(1.0, np.max(np.abs(t)))


class AronssonFunction(ReferenceFunction):
    """w(x1, x2) = x1^{4/3} - x2^{4/3}, con x^{4/3} = |x|^{4/3}"""

    name = "aronsson"
    singular_set = "assi coordinati x1 = 0 e x2 = 0"
    infinity_harmonic = True

    def value(self, x, y):
        return np.abs(x) ** (4.0 / 3.0) - np.abs(y) ** (4.0 / 3.0)

    def gradient(self, x, y):
        return (4.0 / 3.0) * np.cbrt(x), -(4.0 / 3.0) * np.cbrt(y)

    def hessian(self, x, y):
        with np.errstate(divide="ignore"):
            a11 = (4.0 / 9.0) * np.abs(x) ** (-2.0 / 3.0)
            a22 = -(4.0 / 9.0) * np.abs(y) ** (-2.0 / 3.0)
        return a11, np.zeros_like(a11 * a22), a22

    def singular_mask(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return _on_axis(x) | _on_axis(y)

    def speed(self, x, y):
        """|Dw| = (4/3)(x1^{2/3} + x2^{2/3})^{1/2}"""
        return (4.0 / 3.0) * np.sqrt(np.abs(x) ** (2.0 / 3.0) + np.abs(y) ** (2.0 / 3.0))

    def speed_squared_gradient(self, x, y):
        """D|Dw|^2 = (32/27)(x1^{-1/3}, x2^{-1/3})"""
        with np.errstate(divide="ignore"):
            return (32.0 / 27.0) / np.cbrt(x), (32.0 / 27.0) / np.cbrt(y)

    def speed_squared_gradient_norm(self, x, y):
        """|D|Dw|^2| = (32/27)(x1^{-2/3} + x2^{-2/3})^{1/2}"""
        with np.errstate(divide="ignore"):
            return (32.0 / 27.0) * np.sqrt(np.abs(x) ** (-2.0 / 3.0) + np.abs(y) ** (-2.0 / 3.0))

    def speed_power_gradient(self, x, y, alpha: float):
        """D|Dw|^alpha = (alpha/2)|Dw|^{alpha-2} D|Dw|^2"""
        factor = 0.5 * alpha * self.speed(x, y) ** (alpha - 2.0)
        d1, d2 = self.speed_squared_gradient(x, y)
        return factor * d1, factor * d2


class AronssonDualFunction(ReferenceFunction):
    """v = |Dw|^2 / 2 = (8/9)(x1^{2/3} + x2^{2/3})"""

    name = "aronsson_dual"
    singular_set = "assi coordinati x1 = 0 e x2 = 0"

    def value(self, x, y):
        return (8.0 / 9.0) * (np.abs(x) ** (2.0 / 3.0) + np.abs(y) ** (2.0 / 3.0))

    def gradient(self, x, y):
        with np.errstate(divide="ignore"):
            return (16.0 / 27.0) / np.cbrt(x), (16.0 / 27.0) / np.cbrt(y)

    def hessian(self, x, y):
        with np.errstate(divide="ignore"):
            a11 = -(16.0 / 81.0) * np.abs(x) ** (-4.0 / 3.0)
            a22 = -(16.0 / 81.0) * np.abs(y) ** (-4.0 / 3.0)
        return a11, np.zeros_like(a11 * a22), a22

    def singular_mask(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return _on_axis(x) | _on_axis(y)


class LinearFunction(ReferenceFunction):
    """P(x) = a x1 + b x2 + c"""

    infinity_harmonic = True

    def __init__(self, a: float = 1.0, b: float = 0.0, c: float = 0.0):
        self.a, self.b, self.c = float(a), float(b), float(c)
        self.name = f"linear({self.a:g},{self.b:g},{self.c:g})"

    def value(self, x, y):
        return self.a * np.asarray(x, dtype=float) + self.b * np.asarray(y, dtype=float) + self.c

    def gradient(self, x, y):
        shape = np.broadcast(x, y).shape
        return np.full(shape, self.a), np.full(shape, self.b)

    def hessian(self, x, y):
        zeros = np.zeros(np.broadcast(x, y).shape)
        return zeros, zeros.copy(), zeros.copy()

    @classmethod
    def tangent_plane(cls, ref: ReferenceFunction, point: Tuple[float, float]) -> "LinearFunction":
        """Piano tangente di ref nel punto dato"""
        px, py = point
        g1, g2 = ref.gradient(np.array(px), np.array(py))
        g1, g2 = float(g1), float(g2)
        return cls(g1, g2, float(ref.value(np.array(px), np.array(py))) - g1 * px - g2 * py)


class ConeFunction(ReferenceFunction):
    """Cono |x - x0|: infinito-armonico fuori dal vertice"""

    infinity_harmonic = True

    def __init__(self, x0: float = 0.0, y0: float = 0.0):
        self.x0, self.y0 = float(x0), float(y0)
        self.name = f"cone({self.x0:g},{self.y0:g})"
        self.singular_set = f"vertice ({self.x0:g}, {self.y0:g})"

    def _rho(self, x, y):
        return np.hypot(x - self.x0, y - self.y0)

    def value(self, x, y):
        return self._rho(x, y)

    def gradient(self, x, y):
        rho = self._rho(x, y)
        with np.errstate(invalid="ignore", divide="ignore"):
            return (x - self.x0) / rho, (y - self.y0) / rho

    def hessian(self, x, y):
        rho = self._rho(x, y)
        n1, n2 = self.gradient(x, y)
        with np.errstate(invalid="ignore", divide="ignore"):
            return (1.0 - n1 * n1) / rho, -n1 * n2 / rho, (1.0 - n2 * n2) / rho

    def singular_mask(self, x, y):
        return self._rho(x, y) <= 1e-12


class QuadraticSaddle(ReferenceFunction):
    """x1^2 - x2^2 (non infinito-armonica, utile per le identità)"""

    name = "quadratic_saddle"

    def value(self, x, y):
        return np.asarray(x, dtype=float) ** 2 - np.asarray(y, dtype=float) ** 2

    def gradient(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return 2.0 * x, -2.0 * y

    def hessian(self, x, y):
        shape = np.broadcast(x, y).shape
        return np.full(shape, 2.0), np.zeros(shape), np.full(shape, -2.0)


class HalfSquaredDistance(ReferenceFunction):
    """v = |x - x0|^2 / 2 (controllo negativo dell'equazione del 1-Laplaciano)"""

    def __init__(self, x0: float = 0.0, y0: float = 0.0):
        self.x0, self.y0 = float(x0), float(y0)
        self.name = f"half_squared_distance({self.x0:g},{self.y0:g})"

    def value(self, x, y):
        return 0.5 * ((x - self.x0) ** 2 + (y - self.y0) ** 2)

    def gradient(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        return x - self.x0, y - self.y0

    def hessian(self, x, y):
        shape = np.broadcast(x, y).shape
        return np.ones(shape), np.zeros(shape), np.ones(shape)


# Registro delle funzioni di riferimento
REFERENCE_REGISTRY: Dict[str, Tuple[Callable[..., ReferenceFunction], str]] = {
    "aronsson": (AronssonFunction, "w = x1^{4/3} - x2^{4/3}"),
    "aronsson_dual": (AronssonDualFunction, "v = |Dw|^2/2 = (8/9)(x1^{2/3} + x2^{2/3})"),
    "linear": (LinearFunction, "a*x1 + b*x2 + c (parametri a, b, c)"),
    "constant": (lambda c=0.0: LinearFunction(0.0, 0.0, c), "costante c"),
    "cone": (ConeFunction, "|x - x0| (parametri x0, y0)"),
    "radial": (lambda: ConeFunction(0.0, 0.0), "|x| (non infinito-armonica nel vertice)"),
    "quadratic_saddle": (QuadraticSaddle, "x1^2 - x2^2"),
    "half_squared_distance": (HalfSquaredDistance, "|x - x0|^2/2 (parametri x0, y0)"),
}


def get_reference(name: str, **params) -> ReferenceFunction:
    """Restituisce la funzione di riferimento registrata con quel nome"""
    if name not in REFERENCE_REGISTRY:
        raise KeyError(f"Funzione di riferimento sconosciuta: {name}")
    factory, _ = REFERENCE_REGISTRY[name]
    return factory(**params)


def list_references() -> List[Tuple[str, str]]:
    return [(name, description) for name, (_, description) in REFERENCE_REGISTRY.items()]


def offset_grid(grid: GridSpec) -> GridSpec:
    """Sposta l'origine di h/2 per evitare nodi sugli assi"""
    h = grid.h
    return GridSpec((grid.origin[0] + 0.5 * h, grid.origin[1] + 0.5 * h), grid.extent, grid.nodes)


def aronsson_fields(grid: GridSpec, with_hessian: bool = True):
    """
    Campioni esatti di w, Dw, D^2w e |Dw| sulla griglia.
    Restituisce (value, grad, hess, speed); hess è None se with_hessian=False.
    """
    ref = AronssonFunction()
    X, Y = grid.mesh()
    value = ref.sample(grid)
    grad = ref.sample_gradient(grid)
    hess = ref.sample_hessian(grid) if with_hessian else None
    speed = ScalarField(grid, ref.speed(X, Y))
    return value, grad, hess, speed
