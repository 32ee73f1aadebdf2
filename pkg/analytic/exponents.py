# exponents.py
"""
Esponenti critici di integrabilità per la funzione di Aronsson.

Gli integrali I_k = int_{A_k} |D|Dw|^alpha|^p dx sono calcolati su pezzi diadici
(anelli intorno all'origine o strisce lungo l'asse x1) con regole del punto medio
a 256x256 nodi. La pendenza di log2 I_k in k cambia segno esattamente alla soglia
di divergenza; la soglia si trova per bisezione in p.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple
import logging
import math

import numpy as np
from scipy import optimize, stats

from analytic.reference_functions import AronssonFunction
from config.errors import InsufficientLevels
from config.settings import config

logger = logging.getLogger(__name__)

MIN_LEVELS = 5
MODES = ("origin", "axis")


@dataclass
class ExponentFit:
    """Risultato di un fit dell'esponente critico"""

    alpha: float
    mode: str
    fitted_critical_p: float
    stderr: float
    target_p: float
    quantity: str = "speed_power"
    levels: int = MIN_LEVELS
    slopes: Dict[float, float] = field(default_factory=dict)

    def passed(self, tolerance: float = 0.1) -> bool:
        if math.isinf(self.target_p) or math.isinf(self.fitted_critical_p):
            return math.isinf(self.target_p) and math.isinf(self.fitted_critical_p)
        return abs(self.fitted_critical_p - self.target_p) <= tolerance

    def to_record(self) -> Dict:
        return {
            "quantity": self.quantity,
            "alpha": self.alpha,
            "mode": self.mode,
            "fitted_critical_p": self.fitted_critical_p,
            "stderr": self.stderr,
            "target_p": self.target_p,
            "levels": self.levels,
            "pass": self.passed(),
        }


def target_exponent(alpha: float, mode: str) -> float:
    """Soglia esatta: 6/(3-alpha) vicino all'origine (infinito se alpha >= 3), 3 lungo gli assi"""
    if mode == "axis":
        return 3.0
    if mode == "origin":
        return 6.0 / (3.0 - alpha) if alpha < 3.0 else math.inf
    raise ValueError(f"Modo sconosciuto: {mode}")


def combined_exponent(alpha: float) -> float:
    """p_alpha = 3 se alpha >= 1, 6/(3 - alpha) se alpha in (0, 1)"""
    return 3.0 if alpha >= 1.0 else 6.0 / (3.0 - alpha)


class DyadicIntegrals:
    """Campionamento dei pezzi diadici e valutazione di I_k(p)"""

    def __init__(self, quantity: str, alpha: float, mode: str, levels: int,
                 first_level: int = config.FIRST_DYADIC_LEVEL, samples: int = config.DYADIC_SAMPLES):
        if levels < MIN_LEVELS:
            raise InsufficientLevels(f"Servono almeno {MIN_LEVELS} livelli diadici, ricevuti {levels}")
        if mode not in MODES:
            raise ValueError(f"Modo sconosciuto: {mode}")
        if quantity == "speed_power" and not alpha > 0:
            raise ValueError("alpha deve essere > 0")
        self.quantity = quantity
        self.alpha = alpha
        self.mode = mode
        self.levels = np.arange(first_level, first_level + levels)
        self.samples = samples
        self._w = AronssonFunction()
        # per ogni livello: log dell'integrando e log dei pesi
        self._log_integrand: List[np.ndarray] = []
        self._log_weights: List[np.ndarray] = []
        for k in self.levels:
            x, y, weights = self._nodes(int(k))
            self._log_integrand.append(np.log(self._integrand(x, y)))
            self._log_weights.append(np.log(weights))

    def _nodes(self, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        n = self.samples
        outer = 2.0 ** (-k)
        inner = 2.0 ** (-k - 1)
        t = (np.arange(n) + 0.5) / n
        if self.mode == "origin":
            # regola polare: r in (2^{-k-1}, 2^{-k}), theta in (0, 2 pi)
            r = inner + (outer - inner) * t
            theta = 2.0 * np.pi * t
            R, T = np.meshgrid(r, theta, indexing="ij")
            weights = R * ((outer - inner) / n) * (2.0 * np.pi / n)
            return R * np.cos(T), R * np.sin(T), weights
        # striscia {1 < x1 < 2, 2^{-k-1} < x2 < 2^{-k}}
        x1 = 1.0 + t
        x2 = inner + (outer - inner) * t
        X1, X2 = np.meshgrid(x1, x2, indexing="ij")
        weights = np.full(X1.shape, (1.0 / n) * ((outer - inner) / n))
        return X1, X2, weights

    def _integrand(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        speed = self._w.speed(x, y)
        grad_sq = self._w.speed_squared_gradient_norm(x, y)
        if self.quantity == "log_speed":
            # |D log|Dw|| = (1/2)|Dw|^{-2}|D|Dw|^2|
            return 0.5 * speed ** (-2.0) * grad_sq
        # |D|Dw|^alpha| = (alpha/2)|Dw|^{alpha-2}|D|Dw|^2|
        return 0.5 * self.alpha * speed ** (self.alpha - 2.0) * grad_sq

    def log2_integrals(self, p: float) -> np.ndarray:
        out = np.empty(len(self.levels))
        for i, (log_g, log_w) in enumerate(zip(self._log_integrand, self._log_weights)):
            exponent = p * log_g + log_w
            top = float(np.max(exponent))
            out[i] = (top + math.log(float(np.sum(np.exp(exponent - top))))) / math.log(2.0)
        return out

    def slope(self, p: float) -> Tuple[float, float]:
        """Pendenza (e suo errore standard) di log2 I_k rispetto a k"""
        fit = stats.linregress(self.levels.astype(float), self.log2_integrals(p))
        return float(fit.slope), float(fit.stderr)

    def critical_exponent(self, p_low: float = 1.0, p_high: float = config.MAX_SWEEP_EXPONENT,
                          xtol: float = config.BISECTION_TOLERANCE) -> Tuple[float, float, Dict[float, float]]:
        """Zero della pendenza per bisezione; +inf se non cambia segno fino a p_high"""
        s_low, _ = self.slope(p_low)
        s_high, _ = self.slope(p_high)
        slopes = {p_low: s_low, p_high: s_high}
        if s_high < 0.0:
            logger.info(f"Nessun cambio di segno per p <= {p_high}: soglia infinita")
            return math.inf, 0.0, slopes
        if s_low >= 0.0:
            logger.warning(f"Pendenza già non negativa a p = {p_low}")
            return p_low, 0.0, slopes

        p_star = optimize.bisect(lambda p: self.slope(p)[0], p_low, p_high, xtol=xtol)
        slope_star, slope_err = self.slope(p_star)
        dp = 0.05
        derivative = (self.slope(p_star + dp)[0] - self.slope(p_star - dp)[0]) / (2.0 * dp)
        stderr = abs(slope_err / derivative) if derivative != 0 else 0.0
        slopes[p_star] = slope_star
        return float(p_star), float(stderr), slopes


def dyadic_slope(alpha: float, mode: str, p: float, levels: int = 8, quantity: str = "speed_power") -> float:
    """Pendenza di log2 I_k per un singolo esponente p"""
    return DyadicIntegrals(quantity, alpha, mode, levels).slope(p)[0]


def critical_exponent_estimate(alpha: float, mode: str, levels: int = 8) -> ExponentFit:
    """Soglia di integrabilità di |D|Dw|^alpha|^p vicino all'origine o all'asse"""
    if not alpha > 0:
        raise ValueError("alpha deve essere > 0")
    integrals = DyadicIntegrals("speed_power", alpha, mode, levels)
    p_star, stderr, slopes = integrals.critical_exponent()
    fit = ExponentFit(alpha=alpha, mode=mode, fitted_critical_p=p_star, stderr=stderr,
                      target_p=target_exponent(alpha, mode), levels=levels, slopes=slopes)
    logger.info(f"Esponente critico alpha={alpha}, modo={mode}: {p_star:.4f} (atteso {fit.target_p})")
    return fit


def log_speed_exponent_estimate(levels: int = 8) -> ExponentFit:
    """Soglia per |D log|Dw||: minimo tra il fit all'origine e quello sull'asse"""
    fits = []
    for mode in MODES:
        p_star, stderr, slopes = DyadicIntegrals("log_speed", 0.0, mode, levels).critical_exponent()
        fits.append((p_star, stderr, slopes))
    p_star, stderr, slopes = min(fits, key=lambda item: item[0])
    fit = ExponentFit(alpha=0.0, mode="combined", fitted_critical_p=p_star, stderr=stderr,
                      target_p=2.0, quantity="log_speed", levels=levels, slopes=slopes)
    logger.info(f"Esponente critico di log|Dw|: {p_star:.4f} (atteso 2)")
    return fit
