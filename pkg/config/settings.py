# settings.py
from pathlib import Path
from dataclasses import dataclass, field
from typing import Tuple
import logging
import os

from dotenv import load_dotenv

# Carica eventuali variabili da .env nella root del progetto
load_dotenv(Path(__file__).parent.parent / ".env")


def _threads_from_env() -> int:
    """Legge INFLAB_THREADS (0 = automatico)"""
    raw = os.getenv("INFLAB_THREADS", "0").strip() or "0"
    try:
        threads = int(raw)
    except ValueError:
        threads = 0
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


@dataclass
class ProjectConfig:
    # Paths relativi alla root del progetto
    BASE_DIR: Path = Path(__file__).parent.parent
    OUTPUT_PATH: Path = Path(os.getenv("INFLAB_OUTPUT_DIR", str(Path(__file__).parent.parent / "output")))

    VERSION: str = "1.0.0"

    # Solver regolarizzato
    RESIDUAL_TOLERANCE: float = 1e-8
    MAX_OUTER_ITERATIONS: int = 200
    MAX_INNER_SWEEPS: int = 20000
    RELAXATION: float = 0.7
    LINEAR_SOLVER: str = "sweeps"
    SOR_OMEGA_MAX: float = 1.9

    # Margine (in celle) delle regioni di verifica
    MARGIN_CELLS: int = 2

    # Soglia del gradiente: DELTA_FACTOR * eps macchina * scala del campo
    DELTA_FACTOR: float = 1e3

    # Esponenti critici (integrali diadici)
    DYADIC_SAMPLES: int = 256
    BISECTION_TOLERANCE: float = 0.02
    FIRST_DYADIC_LEVEL: int = 10
    MAX_SWEEP_EXPONENT: float = 10.0

    # Capacità
    CAPACITY_MU: float = 1e-10
    ETA_MULTIPLIERS: Tuple[int, ...] = (8, 4, 2)

    # Parallelismo (INFLAB_THREADS, 0 = auto)
    THREADS: int = field(default_factory=_threads_from_env)

    def setup_directories(self):
        """Crea le directory necessarie"""
        self.OUTPUT_PATH.mkdir(parents=True, exist_ok=True)


def setup_logging(level: int = None):
    """Configurazione unica del logging per tutto il progetto (INFLAB_LOG_LEVEL)"""
    if level is None:
        level = getattr(logging, os.getenv("INFLAB_LOG_LEVEL", "INFO").upper(), logging.INFO)
    logging.basicConfig(level=level, format='%(asctime)s - %(levelname)s - %(message)s')


# Configurazione globale
config = ProjectConfig()
