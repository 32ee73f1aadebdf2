# quadrature.py
"""Quadratura a punto medio di cella: valore * h^2 sui nodi della regione"""

from typing import Optional, Union

import numpy as np

from config.errors import InvalidExponent
from grid.fields import GridSpec, Region, ScalarField


class Quadrature:
    """Integrali e norme L^p discrete"""

    @staticmethod
    def integrate_values(grid: GridSpec, values: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
        """Somma a coppie (np.sum su array contiguo): risultato deterministico"""
        selected = values[mask] if mask is not None else values.ravel()
        return float(np.sum(np.ascontiguousarray(selected, dtype=float))) * grid.h ** 2

    @staticmethod
    def integrate(f: ScalarField, region: Region) -> float:
        return Quadrature.integrate_values(f.grid, f.values, region.mask(f.grid))

    @staticmethod
    def measure(grid: GridSpec, region: Union[Region, np.ndarray]) -> float:
        mask = region.mask(grid) if isinstance(region, Region) else region
        return float(np.count_nonzero(mask)) * grid.h ** 2

    @staticmethod
    def lp_norm_values(grid: GridSpec, values: np.ndarray, p: float, mask: Optional[np.ndarray] = None) -> float:
        if not p >= 1:
            raise InvalidExponent(f"Norma L^p richiede p >= 1, ricevuto {p}")
        integral = Quadrature.integrate_values(grid, np.abs(values) ** p, mask)
        return integral ** (1.0 / p)

    @staticmethod
    def lp_norm(f: ScalarField, p: float, region: Region) -> float:
        return Quadrature.lp_norm_values(f.grid, f.values, p, region.mask(f.grid))

    @staticmethod
    def average_values(grid: GridSpec, values: np.ndarray, mask: np.ndarray) -> float:
        """Media integrale sulla regione discreta"""
        area = Quadrature.measure(grid, mask)
        return Quadrature.integrate_values(grid, values, mask) / area if area > 0 else 0.0


# Funzioni di utilità per accesso rapido
def integrate(f: ScalarField, region: Region) -> float:
    return Quadrature.integrate(f, region)


def lp_norm(f: ScalarField, p: float, region: Region) -> float:
    return Quadrature.lp_norm(f, p, region)
