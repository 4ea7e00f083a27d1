import logging
from typing import Optional

from src import config
from src.arakawa_eval import SpecialValue, secant_value_arakawa
from src.quad_field import QuadElem
from .base import SecantMethod

logger = logging.getLogger(__name__)


class ArakawaMethod(SecantMethod):
    """Finite Bernoulli double sum over the transfer matrix; cost grows with its lower-left entry."""
    name = 'arakawa'

    def __init__(self, c_cap: Optional[int] = None, workers: Optional[int] = None, multiple: int = 1):
        self.c_cap = config.C_CAP if c_cap is None else c_cap
        self.workers = config.WORKERS if workers is None else workers
        self.multiple = multiple

    def secant_value(self, alpha: QuadElem, k: int) -> SpecialValue:
        logger.info(f"arakawa: alpha={alpha}, k={k}, c_cap={self.c_cap}")
        return secant_value_arakawa(alpha, k, multiple=self.multiple, c_cap=self.c_cap, workers=self.workers)

    def describe(self) -> str:
        return f"arakawa (c_cap={self.c_cap}, workers={self.workers})"
