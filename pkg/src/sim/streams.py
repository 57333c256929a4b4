"""
Воспроизводимые потоки случайных чисел на счетчиковом генераторе Philox.

Поток адресуется тройкой (главный seed, домен, индекс): ключ Philox
выводится из seed через SeedSequence, а старшие слова 256-битного счетчика
задают домен и индекс. Младшее слово счетчика - номер розыгрыша внутри
потока, поэтому потоки не пересекаются и не зависят от порядка создания.
"""
from enum import IntEnum
from functools import lru_cache

import numpy as np

from utils.errors import DomainError

# Число частиц в одном блоке симуляции; фиксировано, чтобы результат не зависел от числа потоков
BLOCK_SIZE = 1024

_UINT64_MAX = 2**64 - 1


class StreamDomain(IntEnum):
    """Непересекающиеся пространства потоков."""

    BLOCK = 1
    TREE = 2
    TREE_OBSERVER = 3
    REPLICATE = 4


def check_seed(seed) -> int:
    """Seed - 64-битное беззнаковое целое."""
    if isinstance(seed, bool) or int(seed) != seed or not 0 <= int(seed) <= _UINT64_MAX:
        raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


@lru_cache(maxsize=256)
def _philox_key(seed: int) -> tuple:
    state = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


class RandomStream:
    """
    Поток равномерных и экспоненциальных величин для одного адреса.

    Равномерные величины берутся из (0, 1], чтобы логарифм не обращался в -inf.
    """

    def __init__(self, seed: int, domain: StreamDomain, index: int):
        self.seed = check_seed(seed)
        self.domain = StreamDomain(domain)
        if int(index) != index or index < 0:
            raise DomainError(f"stream index must be a non-negative integer, got {index!r}")
        self.index = int(index)
        counter = np.array([0, 0, int(self.domain), self.index], dtype=np.uint64)
        key = np.array(_philox_key(self.seed), dtype=np.uint64)
        self._generator = np.random.Generator(np.random.Philox(counter=counter, key=key))
        self.draws = 0

    def uniforms(self, size: int) -> np.ndarray:
        """Массив из size равномерных величин на (0, 1]."""
        self.draws += size
        return 1.0 - self._generator.random(size)

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])

    def exponentials(self, rate: float, size: int) -> np.ndarray:
        """Экспоненциальные величины методом обратной функции: -ln(u)/λ."""
        return -np.log(self.uniforms(size)) / rate

    def exponential(self, rate: float) -> float:
        return float(self.exponentials(rate, 1)[0])


def block_stream(seed: int, block_index: int) -> RandomStream:
    """Поток блока из BLOCK_SIZE частиц с номерами block_index*BLOCK_SIZE и далее."""
    return RandomStream(seed, StreamDomain.BLOCK, block_index)


def tree_stream(seed: int, tree_index: int) -> RandomStream:
    return RandomStream(seed, StreamDomain.TREE, tree_index)


def observer_stream(seed: int, tree_index: int) -> RandomStream:
    """Поток выбора ветвей наблюдателем на дереве tree_index; не пересекается с потоком самого дерева."""
    return RandomStream(seed, StreamDomain.TREE_OBSERVER, tree_index)


def derive_seed(seed: int, index: int, domain: StreamDomain = StreamDomain.REPLICATE) -> int:
    """Производный 64-битный seed для повтора эксперимента номер index."""
    state = np.random.SeedSequence([check_seed(seed), int(domain), int(index)]).generate_state(1, dtype=np.uint64)
    return int(state[0])
