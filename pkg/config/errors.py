# errors.py
"""Eccezioni del laboratorio numerico"""

from typing import Optional


class InflabError(Exception):
    """Classe base di tutti gli errori del progetto"""


class GridError(InflabError, ValueError):
    """Geometria di griglia non valida"""


class RegionError(InflabError, ValueError):
    """Regione non contenuta nella griglia o mal definita"""


class NonConvergence(InflabError):
    """Iterazione non convergente: conserva l'ultimo residuo"""

    def __init__(self, message: str, final_residual: float, iterations: int):
        super().__init__(f"{message} (residuo finale {final_residual:.3e} dopo {iterations} iterazioni)")
        self.final_residual = final_residual
        self.iterations = iterations


class InvalidEpsilon(InflabError, ValueError):
    """epsilon fuori da (0, 1]"""


class InvalidParameter(InflabError, ValueError):
    """kappa, delta o omega fuori dal dominio ammesso"""


class SingularNode(InflabError, ValueError):
    """Nodo sugli assi dove la funzione di Aronsson non è C^2"""


class InsufficientLevels(InflabError, ValueError):
    """Troppo pochi livelli diadici per il fit"""


class SupportViolation(InflabError, ValueError):
    """Il supporto della funzione test tocca il margine"""


class MissingEpsilon(InflabError, ValueError):
    """La verifica richiede epsilon"""


class DegenerateDistance(InflabError, ValueError):
    """Separazione tra V e W troppo piccola rispetto al passo"""


class UnsupportedExponent(InflabError, ValueError):
    """Esponente di capacità non supportato"""


class DegenerateGradient(InflabError, ValueError):
    """Gradiente nullo dove serve |Dv| > 0"""


class InvalidExponent(InflabError, ValueError):
    """Esponente fuori dal dominio ammesso"""


class ConfigError(InflabError, ValueError):
    """Configurazione di scenario non valida"""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        where = []
        if field:
            where.append(f"campo '{field}'")
        if line is not None:
            where.append(f"riga {line}")
        suffix = f" [{', '.join(where)}]" if where else ""
        super().__init__(f"{message}{suffix}")
        self.field = field
        self.line = line
