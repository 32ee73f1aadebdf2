# base_solver.py
from abc import ABC, abstractmethod
from typing import List, Tuple
import logging
import math

import numpy as np

from config.errors import NonConvergence
from grid.fields import GridSpec
from solvers.boundary import SolverConfig

logger = logging.getLogger(__name__)


class BaseSolver(ABC):
    """Classe base per tutti i solutori iterativi a punto fisso"""

    label = "solutore"

    def __init__(self, grid: GridSpec, cfg: SolverConfig):
        self.grid = grid
        self.cfg = cfg
        self.history: List[float] = []
        self.iterations = 0
        self.converged = False
        self.last_values = None

    @abstractmethod
    def step(self, values: np.ndarray) -> Tuple[np.ndarray, float]:
        """Un passo del punto fisso: restituisce il nuovo iterato e il suo residuo"""
        pass

    def initial_residual(self, values: np.ndarray) -> float:
        """Residuo dell'iterato iniziale (infinito se non misurabile)"""
        return math.inf

    @property
    def max_iterations(self) -> int:
        return self.cfg.max_outer_iterations

    @property
    def tolerance(self) -> float:
        return self.cfg.residual_tolerance

    def iterate(self, initial: np.ndarray) -> np.ndarray:
        """Itera step() fino alla tolleranza, altrimenti NonConvergence"""
        values = np.array(initial, dtype=float, copy=True)
        residual = self.initial_residual(values)
        self.history = [residual]
        self.iterations = 0
        self.last_values = values

        if residual <= self.tolerance:
            self.converged = True
            self._generate_report()
            return values

        for k in range(1, self.max_iterations + 1):
            values, residual = self.step(values)
            self.iterations = k
            self.last_values = values
            self.history.append(residual)
            logger.debug(f"{self.label} iterazione {k}: residuo {residual:.3e}")

            if not math.isfinite(residual):
                raise NonConvergence(f"{self.label}: residuo non finito", residual, k)
            if residual <= self.tolerance:
                self.converged = True
                break

        self._generate_report()
        if not self.converged:
            raise NonConvergence(f"{self.label}: tolleranza {self.tolerance:.1e} non raggiunta",
                                 residual, self.iterations)
        return values

    def _generate_report(self):
        """Riga di riepilogo nel log"""
        final = self.history[-1] if self.history else math.nan
        state = "convergente" if self.converged else "NON convergente"
        logger.info(f"{self.label} su griglia {self.grid.nodes[0]}x{self.grid.nodes[1]}: "
                    f"{state} in {self.iterations} iterazioni, residuo {final:.3e}")
