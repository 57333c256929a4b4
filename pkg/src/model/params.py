"""
Параметры модели ветвления возбужденного состояния.

Две свободные величины - скорость ветвления λ_B и вероятность ε того, что
наблюдатель остается на возбужденной ветви после события ветвления.
Остальное (λ_A, W, τ_A) выводится из них.
"""
import math
from dataclasses import dataclass
from typing import Sequence

from utils.errors import DomainError, ValidationError

# Допуск нормировки суперпозиции
NORMALIZATION_TOLERANCE = 1e-9


def check_rate(value: float, name: str = "rate") -> float:
    """Проверка положительной конечной скорости; возвращает float."""
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be positive and finite, got {value}")
    return value


def check_epsilon(epsilon: float) -> float:
    """Проверка ε ∈ [0, 1); ε = 1 означает, что распад никогда не наблюдается."""
    epsilon = float(epsilon)
    if not 0.0 <= epsilon < 1.0:
        raise DomainError(
            f"epsilon must lie in [0, 1), got {epsilon}"
            + (" (epsilon = 1: no decay is ever observed)" if epsilon == 1.0 else "")
        )
    return epsilon


@dataclass(frozen=True)
class RateParams:
    """
    Скорость ветвления и вероятность ветви возбужденного состояния.

    Attributes:
        lambda_B (float): Скорость событий ветвления на ветви B_0, 1/время
        epsilon (float): Вероятность остаться с возбужденным состоянием, [0, 1)

    ε = 0 - предел обычной теории (один класс ветвей). Строгая
    внутренность 0 < ε < 1 доступна как флаг is_strict_interior.
    """

    lambda_B: float
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "lambda_B", check_rate(self.lambda_B, "lambda_B"))
        object.__setattr__(self, "epsilon", check_epsilon(self.epsilon))

    @classmethod
    def from_rates(cls, lambda_A: float, lambda_B: float) -> "RateParams":
        """Восстановление ε из пары скоростей: ε = 1 - λ_A/λ_B."""
        lambda_A = check_rate(lambda_A, "lambda_A")
        lambda_B = check_rate(lambda_B, "lambda_B")
        return cls(lambda_B=lambda_B, epsilon=1.0 - lambda_A / lambda_B)

    @property
    def lambda_A(self) -> float:
        """Кажущаяся скорость распада (1 - ε)·λ_B."""
        return (1.0 - self.epsilon) * self.lambda_B

    @property
    def W(self) -> float:
        """Среднее ожидание между соседними событиями ветвления."""
        return 1.0 / self.lambda_B

    @property
    def tau_A(self) -> float:
        """Кажущееся время жизни W/(1 - ε)."""
        return self.W / (1.0 - self.epsilon)

    @property
    def is_strict_interior(self) -> bool:
        return 0.0 < self.epsilon < 1.0

    def branch_waiting_time(self, i: int) -> float:
        """Ожидаемое время распада на ветви B_i: W_i = i·W."""
        i = check_branch_index(i)
        return i * self.W


def check_branch_index(i) -> int:
    """Номер ветви - целое число не меньше 1."""
    if isinstance(i, bool) or int(i) != i or i < 1:
        raise DomainError(f"branch index must be an integer >= 1, got {i}")
    return int(i)


@dataclass(frozen=True)
class ErlangSpec:
    """
    Закон времени ожидания i-го события ветвления: Erlang(shape, rate).

    Attributes:
        shape (int): Номер ветви i >= 1
        rate (float): Скорость λ > 0
    """

    shape: int
    rate: float

    def __post_init__(self):
        object.__setattr__(self, "shape", check_branch_index(self.shape))
        object.__setattr__(self, "rate", check_rate(self.rate))

    @property
    def mean(self) -> float:
        return self.shape / self.rate

    @property
    def variance(self) -> float:
        return self.shape / self.rate**2


@dataclass(frozen=True)
class AmplitudeVector:
    """
    Коэффициенты (ψ_i, φ_j) нормированной суперпозиции собственных состояний.

    Raises:
        ValidationError: Если сумма квадратов модулей отличается от 1 больше чем на 1e-9
    """

    amplitudes: Sequence[complex]

    def __post_init__(self):
        amplitudes = tuple(complex(a) for a in self.amplitudes)
        if not amplitudes:
            raise ValidationError("amplitude vector is empty")
        norm = math.fsum(abs(a) ** 2 for a in amplitudes)
        deficit = 1.0 - norm
        if abs(deficit) > NORMALIZATION_TOLERANCE:
            raise ValidationError(
                f"amplitudes are not normalized: sum of squared magnitudes {norm!r}, deficit {deficit!r}"
            )
        object.__setattr__(self, "amplitudes", amplitudes)

    def __len__(self):
        return len(self.amplitudes)
