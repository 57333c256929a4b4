"""
Сводки по набору данных: эмпирическая функция выживания и классы ветвей.
"""
from typing import List

import numpy as np

from utils.errors import ValidationError

from .records import DecayDataset


def _check_nonempty(dataset: DecayDataset):
    if dataset is None or len(dataset) == 0:
        raise ValidationError("dataset is empty")


def empirical_survival(dataset: DecayDataset, grid) -> List[float]:
    """
    Доля записей с decay_time > t для каждой точки сетки.

    Цензурирования в модели нет, поэтому это просто эмпирическая функция выживания.

    Raises:
        ValidationError: Пустой набор, пустая, отрицательная или неотсортированная сетка
    """
    _check_nonempty(dataset)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValidationError("grid must be a non-empty 1-D sequence")
    if np.any(grid < 0.0) or np.any(np.diff(grid) < 0.0):
        raise ValidationError("grid must be non-negative and sorted ascending")
    times = np.sort(dataset.decay_time)
    survivors = times.size - np.searchsorted(times, grid, side="right")
    return (survivors / times.size).tolist()


def branch_class_counts(dataset: DecayDataset, max_i: int) -> List[int]:
    """
    Гистограмма номеров ветвей: классы 1..max_i и корзина переполнения (i > max_i).

    Сумма счетчиков равна N.
    """
    _check_nonempty(dataset)
    if int(max_i) != max_i or max_i < 1:
        raise ValidationError(f"max_i must be an integer >= 1, got {max_i}")
    max_i = int(max_i)
    clipped = np.minimum(dataset.branch_index, max_i + 1)
    counts = np.bincount(clipped, minlength=max_i + 2)[1:]
    return counts.tolist()


def branch_class_summary(dataset: DecayDataset, max_i: int) -> List[dict]:
    """
    Число записей, среднее и выборочная дисперсия времени распада в каждом
    классе 1..max_i (условный закон Эрланга: среднее i/λ_B, дисперсия i/λ_B²).

    expected_mean - ожидание W_i = i·W по параметрам набора (nan, если их нет).
    """
    params = dataset.params
    counts = branch_class_counts(dataset, max_i)
    summary = []
    for i in range(1, int(max_i) + 1):
        times = dataset.decay_time[dataset.branch_index == i]
        summary.append({
            'branch_index': i,
            'count': counts[i - 1],
            'mean': float(times.mean()) if times.size else float('nan'),
            'expected_mean': params.branch_waiting_time(i) if params is not None else float('nan'),
            'variance': float(times.var(ddof=1)) if times.size > 1 else float('nan'),
        })
    return summary
