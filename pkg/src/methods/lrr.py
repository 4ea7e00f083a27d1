import logging
from typing import Optional

from src.arakawa_eval import SpecialValue
from src.functional_equations import secant_value_lrr
from src.quad_field import QuadElem
from .base import SecantMethod

logger = logging.getLogger(__name__)


class LRRMethod(SecantMethod):
    """Fixed-point relation of a Gamma(2) matrix fixing alpha; cost is linear in the word length."""
    name = 'lrr'

    def __init__(self, c_cap: Optional[int] = None, workers: Optional[int] = None, multiple: int = 1):
        """c_cap, workers and multiple only shape the arakawa sum; they are accepted so
        ``get_methods('both', ...)`` can hand one option set to every method, and have no effect here."""
        if c_cap is not None or workers not in (None, 1) or multiple != 1:
            logger.debug(f"lrr ignores c_cap={c_cap}, workers={workers}, multiple={multiple}")

    def secant_value(self, alpha: QuadElem, k: int) -> SpecialValue:
        logger.info(f"lrr: alpha={alpha}, k={k}")
        return secant_value_lrr(alpha, k)

    def describe(self) -> str:
        return 'lrr'
