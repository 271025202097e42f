"""Exact values, certified asymptotics and inequality certification for plane partitions PL(n)."""

from .ball import BallReal
from .kernels import BACKEND
from .sequence import PlCache, open_cache, pl_values

__all__ = ["BACKEND", "BallReal", "PlCache", "open_cache", "pl_values"]
__version__ = "0.1.0"
