"""
Сэмплеры топологии ветвления.

- sample_branch_tree: внешний взгляд, события на ветви B_0 как пуассоновский поток.
- sample_observer_mechanistic: линия наблюдателя проходит по событиям ветви B_0
  и на каждом остается с возбужденным состоянием с вероятностью ε.
- sample_observer_direct: номер ветви из геометрического закона, затем время
  как сумма i экспоненциальных промежутков.

Оба сэмплера наблюдателя дают одно и то же распределение; блочные версии
используются драйвером симуляции, одиночные - это блок размера 1.
"""
import math
from typing import Optional, Tuple

import numpy as np

from model.params import RateParams, check_rate

from .records import BranchTree, ObserverRecord, SamplerTag
from .streams import RandomStream


def sample_branch_tree(params: RateParams, horizon: float, stream: RandomStream) -> BranchTree:
    """
    Розыгрыш событий ветвления на (0, horizon].

    Промежутки - независимые Exponential(λ_B), поэтому число событий имеет
    закон Пуассона со средним λ_B·horizon.

    Raises:
        DomainError: Если horizon <= 0
    """
    horizon = check_rate(horizon, "horizon")
    expected = params.lambda_B * horizon
    # Запас в 4σ над средним числом событий: обычно хватает одной порции
    chunk = int(expected + 4.0 * math.sqrt(expected) + 16)

    parts = []
    elapsed = 0.0
    while True:
        event_times = elapsed + np.cumsum(stream.exponentials(params.lambda_B, chunk))
        inside = event_times[event_times <= horizon]
        parts.append(inside)
        # Горизонт достигнут внутри порции; иначе продолжаем с последнего события
        if inside.size < chunk:
            break
        elapsed = float(event_times[-1])
    return BranchTree(tuple(np.concatenate(parts).tolist()), horizon, params)


def mechanistic_block(params: RateParams, stream: RandomStream, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Проход по ветви B_0 для size линий наблюдателя одновременно.

    На каждом раунде активные линии получают промежуток Exponential(λ_B),
    затем остаются (u <= ε) или уходят на новую ветвь основного состояния.
    """
    branch_index = np.zeros(size, dtype=np.int64)
    decay_time = np.zeros(size, dtype=float)
    active = np.arange(size)
    ordinal = 0
    while active.size:
        ordinal += 1
        decay_time[active] += stream.exponentials(params.lambda_B, active.size)
        stays = stream.uniforms(active.size) <= params.epsilon
        # Ушедшие линии фиксируют номер ветви; время уже накоплено
        branch_index[active[~stays]] = ordinal
        active = active[stays]
    return branch_index, decay_time


def direct_block(params: RateParams, stream: RandomStream, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Геометрический номер ветви на {1, 2, ...} с P(i > k) = ε^k, затем время
    как сумма i обратных экспонент.
    """
    u = stream.uniforms(size)
    if params.epsilon == 0.0:
        branch_index = np.ones(size, dtype=np.int64)
    else:
        branch_index = 1 + np.floor(np.log(u) / math.log(params.epsilon)).astype(np.int64)
    gaps = stream.exponentials(params.lambda_B, int(branch_index.sum()))
    # Границы сумм: частица k берет branch_index[k] промежутков подряд
    offsets = np.concatenate(([0], np.cumsum(branch_index)[:-1]))
    decay_time = np.add.reduceat(gaps, offsets)
    return branch_index, decay_time


BLOCK_SAMPLERS = {
    SamplerTag.MECHANISTIC: mechanistic_block,
    SamplerTag.DIRECT: direct_block,
}


def sample_observer_mechanistic(params: RateParams, stream: RandomStream, particle_id: int = 0) -> ObserverRecord:
    """Одна линия наблюдателя по механизму прохода по событиям."""
    branch_index, decay_time = mechanistic_block(params, stream, 1)
    return ObserverRecord(particle_id, int(branch_index[0]), float(decay_time[0]))


def sample_observer_direct(params: RateParams, stream: RandomStream, particle_id: int = 0) -> ObserverRecord:
    """Одна линия наблюдателя через геометрический номер и время Эрланга."""
    branch_index, decay_time = direct_block(params, stream, 1)
    return ObserverRecord(particle_id, int(branch_index[0]), float(decay_time[0]))


def observe_tree(tree: BranchTree, stream: RandomStream, particle_id: int = 0) -> Optional[ObserverRecord]:
    """
    Внутренний взгляд на уже разыгранное дерево.

    Линия наблюдателя проходит события дерева по порядку; None означает, что
    до горизонта она осталась на B_0 и распада не увидела.
    """
    if not tree.event_count:
        return None
    leaves = np.flatnonzero(stream.uniforms(tree.event_count) > tree.params.epsilon)
    if not leaves.size:
        return None
    ordinal = int(leaves[0]) + 1
    return ObserverRecord(particle_id, ordinal, tree.spine_event_times[ordinal - 1])
