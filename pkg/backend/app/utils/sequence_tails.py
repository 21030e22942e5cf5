"""Tail aggregates used as finite-horizon limsup/liminf proxies."""
import math

import numpy as np


def tail_length(size: int, fraction: float) -> int:
    """Number of trailing entries covered by a tail of the given fraction (at least one)."""
    return max(1, math.ceil(size * fraction))


def running_sup_tail(sequence: np.ndarray, fraction: float) -> float:
    """Max over the last ⌈fraction·N⌉ entries, the limsup proxy."""
    sequence = np.asarray(sequence)
    return float(sequence[-tail_length(len(sequence), fraction):].max())


def running_inf_tail(sequence: np.ndarray, fraction: float) -> float:
    """Min over the last ⌈fraction·N⌉ entries, the liminf proxy."""
    sequence = np.asarray(sequence)
    return float(sequence[-tail_length(len(sequence), fraction):].min())
