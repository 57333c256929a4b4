"""
Оценка кажущейся скорости λ_A по данным и обращение λ_A = (1 - ε)λ_B.

λ_A оценивается методом максимального правдоподобия для экспоненты:
λ̂ = n/Σt. Сумма Σt имеет закон Gamma(n, λ), поэтому 2λΣt ~ χ²(2n) дает
точный интервал; при n > 10^4 используется нормальное приближение.
"""
import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

from scipy import stats

from model.params import check_rate
from sim.io import format_number
from sim.summaries import branch_class_counts
from utils.errors import DomainError, ValidationError
from utils.logger import AppLogger

from .goodness import DEFAULT_ALPHA, chi2_geometric, decay_times, ks_exponential

# Выше этого размера выборки интервал строится по нормальному приближению
NORMAL_APPROX_THRESHOLD = 10_000

# Число классов ветвей (плюс переполнение) для хи-квадрат по умолчанию
DEFAULT_MAX_CLASS = 30


def _check_confidence(confidence: float) -> float:
    confidence = float(confidence)
    if not 0.0 < confidence < 1.0:
        raise DomainError(f"confidence must lie in (0, 1), got {confidence}")
    return confidence


def _checked_times(dataset):
    times = decay_times(dataset)
    if times.size < 2:
        raise ValidationError(f"at least 2 decay times are required, got {times.size}")
    if not (times > 0.0).all():
        raise ValidationError("decay times must be positive")
    return times


@dataclass(frozen=True)
class EstimateResult:
    """
    Результат оценки по одному набору данных.

    epsilon_hat может быть отрицательной из-за шума выборки и не обрезается.
    chi2_stat и chi2_pass равны None, если ε генерации неизвестна (внешние данные).
    """

    lambda_A_hat: float
    lambda_A_ci: Tuple[float, float]
    epsilon_hat: float
    epsilon_ci: Tuple[float, float]
    epsilon_upper_limit: float
    ks_stat: float
    ks_pass: bool
    chi2_stat: Optional[float]
    chi2_pass: Optional[bool]
    confidence: float
    alpha: float
    n: int

    def to_dict(self) -> dict:
        data = asdict(self)
        data["lambda_A_ci"] = list(self.lambda_A_ci)
        data["epsilon_ci"] = list(self.epsilon_ci)
        return data

    def to_json(self) -> str:
        """Плоский JSON-объект с именами полей типа; бесконечные статистики пишутся как null."""
        data = {
            key: None if isinstance(value, float) and not math.isfinite(value) else value
            for key, value in self.to_dict().items()
        }
        return json.dumps(data, allow_nan=False)

    def to_csv_row(self) -> str:
        """CSV из заголовка и одной строки; интервалы разворачиваются в <имя>_lo и <имя>_hi."""
        row = {}
        for key, value in self.to_dict().items():
            if isinstance(value, list):
                row[f"{key}_lo"], row[f"{key}_hi"] = (format_number(v) for v in value)
            elif value is None:
                row[key] = ""
            elif isinstance(value, float):
                row[key] = format_number(value)
            else:
                row[key] = value
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=list(row), lineterminator="\n")
        writer.writeheader()
        writer.writerow(row)
        return buffer.getvalue()


def mle_lambda(dataset, confidence: float = 0.95) -> Tuple[float, Tuple[float, float]]:
    """
    Оценка λ_A и двусторонний доверительный интервал.

    Args:
        dataset: DecayDataset или массив времен распада
        confidence: Доверительный уровень интервала

    Returns:
        tuple: (λ̂_A, (нижняя граница, верхняя граница))

    Raises:
        ValidationError: Если времен меньше двух или среди них есть неположительные
    """
    confidence = _check_confidence(confidence)
    times = _checked_times(dataset)
    n = times.size
    total = math.fsum(times)
    lambda_hat = n / total
    tail = (1.0 - confidence) / 2.0

    if n <= NORMAL_APPROX_THRESHOLD:
        lower = stats.chi2.ppf(tail, 2 * n) / (2.0 * total)
        upper = stats.chi2.ppf(1.0 - tail, 2 * n) / (2.0 * total)
    else:
        half_width = stats.norm.ppf(1.0 - tail) / math.sqrt(n)
        lower = lambda_hat * (1.0 - half_width)
        upper = lambda_hat * (1.0 + half_width)
    return lambda_hat, (float(lower), float(upper))


def lambda_lower_bound(dataset, confidence: float = 0.95) -> float:
    """Односторонняя нижняя граница λ_A на уровне confidence (не выше самой оценки)."""
    confidence = _check_confidence(confidence)
    times = _checked_times(dataset)
    n = times.size
    total = math.fsum(times)
    lambda_hat = n / total
    if n <= NORMAL_APPROX_THRESHOLD:
        lower = stats.chi2.ppf(1.0 - confidence, 2 * n) / (2.0 * total)
    else:
        lower = lambda_hat * (1.0 - stats.norm.ppf(confidence) / math.sqrt(n))
    return float(min(lower, lambda_hat))


def epsilon_from_rates(lambda_A_hat: float, lambda_B_theory: float) -> float:
    """ε = 1 - λ̂_A/λ_B; отрицательное значение возвращается как есть."""
    lambda_A_hat = check_rate(lambda_A_hat, "lambda_A_hat")
    lambda_B_theory = check_rate(lambda_B_theory, "lambda_B_theory")
    return 1.0 - lambda_A_hat / lambda_B_theory


def epsilon_upper_limit(dataset, lambda_B_theory: float, confidence: float = 0.95) -> float:
    """
    Односторонняя верхняя граница ε: 1 - (нижняя граница λ_A)/λ_B.

    Именно эта величина дает утверждение вида "ε не больше ~0.1%".
    """
    lambda_B_theory = check_rate(lambda_B_theory, "lambda_B_theory")
    return 1.0 - lambda_lower_bound(dataset, confidence) / lambda_B_theory


def required_sample_size(epsilon_target: float, confidence: float = 0.95) -> int:
    """
    Наименьшее N, при котором z(confidence)·(1 - ε)/sqrt(N) <= ε.

    Монотонно убывает по ε; при ε -> 1 стремится к 1.

    Raises:
        DomainError: Если ε_target не лежит в (0, 1)
    """
    epsilon_target = float(epsilon_target)
    if not 0.0 < epsilon_target < 1.0:
        raise DomainError(f"epsilon_target must lie in (0, 1), got {epsilon_target}")
    z = stats.norm.ppf(_check_confidence(confidence))

    def resolved(n: int) -> bool:
        return z * (1.0 - epsilon_target) / math.sqrt(n) <= epsilon_target

    n = max(1, math.ceil((z * (1.0 - epsilon_target) / epsilon_target) ** 2))
    # Поправка на округление вещественной арифметики
    while n > 1 and resolved(n - 1):
        n -= 1
    while not resolved(n):
        n += 1
    return n


def estimate_dataset(dataset, lambda_B_theory: float, confidence: float = 0.95,
                     alpha: float = DEFAULT_ALPHA, max_class: int = DEFAULT_MAX_CLASS) -> EstimateResult:
    """
    Полная оценка по набору данных: λ̂_A, ε̂, интервалы, верхняя граница ε и критерии согласия.

    KS проверяет экспоненциальность относительно оцененной λ̂_A; хи-квадрат классов
    ветвей выполняется только для симулированных данных, где известна ε генерации.
    """
    logger = AppLogger()
    lambda_B_theory = check_rate(lambda_B_theory, "lambda_B_theory")
    lambda_hat, (lower, upper) = mle_lambda(dataset, confidence)
    epsilon_hat = epsilon_from_rates(lambda_hat, lambda_B_theory)
    # Верхняя граница не опускается ниже самой оценки ε̂
    upper_limit = max(epsilon_upper_limit(dataset, lambda_B_theory, confidence), epsilon_hat)
    ks = ks_exponential(dataset, lambda_hat, alpha)

    chi2_stat = chi2_pass = None
    # Внешний файл без метаданных: ε генерации неизвестна
    params = getattr(dataset, "params", None)
    if params is not None and hasattr(dataset, "branch_index"):
        chi2 = chi2_geometric(branch_class_counts(dataset, max_class), params.epsilon, alpha)
        chi2_stat, chi2_pass = chi2.statistic, chi2.passed

    result = EstimateResult(
        lambda_A_hat=lambda_hat,
        lambda_A_ci=(lower, upper),
        epsilon_hat=epsilon_hat,
        epsilon_ci=(1.0 - upper / lambda_B_theory, 1.0 - lower / lambda_B_theory),
        epsilon_upper_limit=upper_limit,
        ks_stat=ks.statistic,
        ks_pass=ks.passed,
        chi2_stat=chi2_stat,
        chi2_pass=chi2_pass,
        confidence=confidence,
        alpha=alpha,
        n=int(decay_times(dataset).size),
    )
    logger.debug(
        f"Estimate n={result.n}: lambda_A_hat={lambda_hat:.6g}, epsilon_hat={epsilon_hat:.6g}, "
        f"epsilon_upper_limit={upper_limit:.6g}, ks_pass={ks.passed}"
    )
    return result
