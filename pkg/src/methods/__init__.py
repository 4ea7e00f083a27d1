from typing import List, Optional

from src import config
from .base import SecantMethod
from .arakawa import ArakawaMethod
from .lrr import LRRMethod

METHODS = {
    'arakawa': ArakawaMethod,
    'lrr': LRRMethod,
}


def get_method(method_name: Optional[str] = None, **options) -> SecantMethod:
    """
    Factory function to get a secant-value method by name

    Args:
        method_name: 'arakawa' or 'lrr'. If None, uses QUADZETA_METHOD (unless that is 'both')
        **options: Passed to the method constructor (c_cap, workers, multiple)

    Returns:
        An instance of the requested method
    """
    if method_name is None:
        method_name = config.DEFAULT_METHOD if config.DEFAULT_METHOD != 'both' else 'lrr'

    method_class = METHODS.get(method_name.lower())
    if not method_class:
        raise ValueError(f"Unknown method: {method_name}. Available: {list(METHODS.keys())}")

    return method_class(**options)


def get_methods(selection: str, **options) -> List[SecantMethod]:
    """'both' expands to every registered method, in registry order."""
    if selection == 'both':
        return [get_method(name, **options) for name in METHODS]
    return [get_method(selection, **options)]


__all__ = [
    'SecantMethod',
    'ArakawaMethod',
    'LRRMethod',
    'METHODS',
    'get_method',
    'get_methods',
]
