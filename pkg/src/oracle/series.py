"""
Усеченные ряды с геометрическим весом и точной оценкой хвоста.

Все суммы считаются компенсированно (math.fsum). Отдельные члены
вычисляются в логарифмах, чтобы факториалы не переполнялись.
"""
import math

import numpy as np
from scipy import special

from utils.errors import DomainError


def geometric_terms(epsilon: float, tol: float, tail_factor: float = 1.0, extra: int = 0) -> int:
    """
    Наименьшее M >= 1, при котором tail_factor·ε^(M + extra) < tol.

    Для ε = 0 хвост равен нулю уже после первого члена.
    """
    if tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if epsilon == 0.0:
        return 1
    m = max(1, math.ceil(math.log(tol / tail_factor) / math.log(epsilon)) - extra)
    while m > 1 and tail_factor * epsilon ** (m - 1 + extra) < tol:
        m -= 1
    while tail_factor * epsilon ** (m + extra) >= tol:
        m += 1
    return m


def poisson_terms(u: float, count: int) -> np.ndarray:
    """e^(-u)·u^k/k! для k = 0..count-1."""
    k = np.arange(count, dtype=float)
    return np.exp(-u + special.xlogy(k, u) - special.gammaln(k + 1.0))


def geometric_weights(epsilon: float, count: int) -> np.ndarray:
    """(1 - ε)·ε^(i-1) для i = 1..count."""
    return (1.0 - epsilon) * epsilon ** np.arange(count, dtype=float)


def compensated_sum(values) -> float:
    return math.fsum(np.asarray(values, dtype=float).tolist())
