"""
Критерии согласия: KS против экспоненты, хи-квадрат против геометрического
закона классов ветвей и двухвыборочные варианты для сравнения сэмплеров.
"""
# Импорт необходимых библиотек
import math
from typing import List, NamedTuple, Sequence

import numpy as np
from scipy import stats   # kstest, ks_2samp, chisquare, chi2_contingency

from model.params import check_epsilon, check_rate
from utils.errors import ValidationError

DEFAULT_ALPHA = 0.01

# Минимальное ожидаемое число в объединенном классе
MIN_EXPECTED = 5.0


class FitOutcome(NamedTuple):
    statistic: float
    passed: bool


def decay_times(data) -> np.ndarray:
    """Времена распада из DecayDataset или из массива."""
    times = getattr(data, "decay_time", data)
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValidationError("dataset is empty")
    return times


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise ValidationError(f"alpha must lie in (0, 1), got {alpha}")
    return alpha


def ks_critical_value(n: int, alpha: float = DEFAULT_ALPHA) -> float:
    """Асимптотическое критическое значение Колмогорова: sqrt(-ln(α/2)/2)/sqrt(n)."""
    return math.sqrt(-math.log(_check_alpha(alpha) / 2.0) / 2.0) / math.sqrt(n)


def ks_exponential(dataset, lam: float, alpha: float = DEFAULT_ALPHA) -> FitOutcome:
    """
    Одновыборочный KS времен распада против Exponential(λ).

    Критерий пройден, если статистика меньше асимптотического критического
    значения. Если λ оценена по тем же данным, критерий консервативен.
    """
    times = decay_times(dataset)
    lam = check_rate(lam, "lambda")
    statistic = float(stats.kstest(times, "expon", args=(0.0, 1.0 / lam)).statistic)
    return FitOutcome(statistic, statistic < ks_critical_value(times.size, alpha))


def _pool(observed: Sequence[float], expected: Sequence[float]):
    """Объединение соседних классов слева направо, пока ожидаемое число не станет >= 5."""
    pooled_obs, pooled_exp = [], []
    acc_obs = acc_exp = 0.0
    for o, e in zip(observed, expected):
        acc_obs += o
        acc_exp += e
        if acc_exp >= MIN_EXPECTED:
            pooled_obs.append(acc_obs)
            pooled_exp.append(acc_exp)
            acc_obs = acc_exp = 0.0
    if acc_obs or acc_exp:
        if pooled_obs:
            pooled_obs[-1] += acc_obs
            pooled_exp[-1] += acc_exp
        else:
            pooled_obs.append(acc_obs)
            pooled_exp.append(acc_exp)
    return np.array(pooled_obs), np.array(pooled_exp)


def geometric_expected_counts(total: int, epsilon: float, classes: int) -> List[float]:
    """Ожидаемые N(1-ε)ε^(i-1) для i = 1..classes и N·ε^classes для переполнения."""
    epsilon = check_epsilon(epsilon)
    expected = [total * (1.0 - epsilon) * epsilon ** (i - 1) for i in range(1, classes + 1)]
    expected.append(total * epsilon**classes)
    return expected


def chi2_geometric(counts: Sequence[int], epsilon: float, alpha: float = DEFAULT_ALPHA) -> FitOutcome:
    """
    Хи-квадрат Пирсона для счетчиков классов ветвей против геометрического закона.

    Args:
        counts: Счетчики классов 1..K и последний элемент - переполнение (i > K),
                как их возвращает branch_class_counts
        epsilon: Проверяемое значение ε
        alpha: Уровень значимости

    Raises:
        ValidationError: Если сумма счетчиков равна 0
    """
    alpha = _check_alpha(alpha)
    observed = np.asarray(counts, dtype=float)
    total = observed.sum()
    if observed.ndim != 1 or observed.size < 2 or total <= 0:
        raise ValidationError("counts must hold at least one class plus overflow and a positive total")
    expected = np.array(geometric_expected_counts(total, epsilon, observed.size - 1))

    # Наблюдения в классе с нулевым ожиданием несовместимы с гипотезой
    if np.any((expected == 0.0) & (observed > 0.0)):
        return FitOutcome(math.inf, False)

    pooled_obs, pooled_exp = _pool(observed, expected)
    if pooled_obs.size < 2:
        return FitOutcome(0.0, True)
    result = stats.chisquare(pooled_obs, pooled_exp)
    return FitOutcome(float(result.statistic), bool(result.pvalue >= alpha))


def ks_two_sample(first, second, alpha: float = DEFAULT_ALPHA) -> FitOutcome:
    """Двухвыборочный KS по временам распада двух наборов."""
    alpha = _check_alpha(alpha)
    result = stats.ks_2samp(decay_times(first), decay_times(second))
    return FitOutcome(float(result.statistic), bool(result.pvalue >= alpha))


def chi2_two_sample(first_counts: Sequence[int], second_counts: Sequence[int],
                    alpha: float = DEFAULT_ALPHA) -> FitOutcome:
    """
    Хи-квадрат однородности двух гистограмм классов ветвей (таблица 2 x k).

    Столбцы объединяются слева направо, пока наименьшее ожидаемое в столбце не станет >= 5.
    """
    alpha = _check_alpha(alpha)
    table = np.array([first_counts, second_counts], dtype=float)
    if table.ndim != 2 or table.shape[1] == 0 or np.any(table.sum(axis=1) <= 0):
        raise ValidationError("both histograms must have the same classes and positive totals")
    row_share = table.sum(axis=1).min() / table.sum()

    columns, acc = [], np.zeros(2)
    for column in table.T:
        acc = acc + column
        if acc.sum() * row_share >= MIN_EXPECTED:
            columns.append(acc)
            acc = np.zeros(2)
    if acc.sum():
        if columns:
            columns[-1] = columns[-1] + acc
        else:
            columns.append(acc)
    if len(columns) < 2:
        return FitOutcome(0.0, True)
    statistic, pvalue, _, _ = stats.chi2_contingency(np.array(columns).T, correction=False)
    return FitOutcome(float(statistic), bool(pvalue >= alpha))
