"""
Пакетный драйвер: N частиц по блокам фиксированного размера.

Частица k попадает в блок k // BLOCK_SIZE, блок всегда разыгрывается
целиком из своего потока и только затем обрезается, поэтому запись частицы
зависит лишь от (seed, particle_id), а не от N, числа потоков или порядка
выполнения блоков.
"""
# Импорт необходимых библиотек
import time  # Длительность симуляции для отладочного лога
from concurrent.futures import ThreadPoolExecutor  # Пул потоков для блоков частиц
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from model.params import RateParams
from utils.errors import ValidationError
from utils.logger import AppLogger

from .records import DecayDataset, SamplerTag
from .samplers import BLOCK_SAMPLERS
from .streams import BLOCK_SIZE, block_stream, check_seed


class SampleConfig(Protocol):
    """Поля конфигурации эксперимента, нужные драйверу."""

    params: RateParams
    n_particles: int
    seed: int
    sampler: SamplerTag
    threads: int


@dataclass(frozen=True)
class SampleRequest:
    """Минимальная конфигурация для программных прогонов (повторы, тесты)."""

    params: RateParams
    n_particles: int
    seed: int
    sampler: SamplerTag = SamplerTag.DIRECT
    threads: int = 1


def _simulate_block(params: RateParams, seed: int, sampler: SamplerTag, block_index: int, count: int):
    stream = block_stream(seed, block_index)
    branch_index, decay_time = BLOCK_SAMPLERS[sampler](params, stream, BLOCK_SIZE)
    return branch_index[:count], decay_time[:count]


def simulate_sample(config: SampleConfig) -> DecayDataset:
    """
    Симуляция N линий наблюдателя выбранным сэмплером.

    Args:
        config: ExperimentConfig или любой объект с полями params, n_particles, seed, sampler, threads

    Returns:
        DecayDataset: Неизменяемый набор из N записей

    Raises:
        ValidationError: Если N < 1
    """
    n = int(config.n_particles)
    if n < 1:
        raise ValidationError(f"n_particles must be >= 1, got {config.n_particles}")
    params = config.params
    seed = check_seed(config.seed)
    sampler = SamplerTag(config.sampler)
    threads = max(1, int(getattr(config, "threads", 1) or 1))

    logger = AppLogger()
    logger.debug(
        f"Simulating {n} particles: lambda_B={params.lambda_B!r}, epsilon={params.epsilon!r}, "
        f"sampler={sampler.value}, seed={seed}, threads={threads}"
    )
    started = time.perf_counter()

    n_blocks = -(-n // BLOCK_SIZE)
    counts = [min(BLOCK_SIZE, n - b * BLOCK_SIZE) for b in range(n_blocks)]

    def run(block_index: int):
        return _simulate_block(params, seed, sampler, block_index, counts[block_index])

    if threads == 1 or n_blocks == 1:
        blocks = [run(b) for b in range(n_blocks)]
    else:
        # map сохраняет порядок блоков независимо от порядка завершения
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(run, range(n_blocks)))

    branch_index = np.concatenate([b[0] for b in blocks])
    decay_time = np.concatenate([b[1] for b in blocks])
    logger.debug(f"Simulated {n_blocks} blocks in {time.perf_counter() - started:.3f}s")
    return DecayDataset(branch_index, decay_time, params, seed, sampler)
