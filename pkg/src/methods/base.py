from abc import ABC, abstractmethod
from typing import Optional

from src.arakawa_eval import SpecialValue
from src.quad_field import QuadElem


class SecantMethod(ABC):
    name: str = ''

    @abstractmethod
    def secant_value(self, alpha: QuadElem, k: int) -> SpecialValue:
        """
        Compute psi(alpha, 2k) / pi^{2k} exactly

        Args:
            alpha: A real quadratic irrationality
            k: Positive integer, the series is evaluated at s = 2k

        Returns:
            SpecialValue holding an element of Q(alpha)
        """
        pass

    def describe(self) -> Optional[str]:
        return None
