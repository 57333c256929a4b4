"""
Результаты симуляции: дерево ветвей (внешний взгляд), запись наблюдателя
(внутренний взгляд) и набор данных из N частиц.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Tuple

import numpy as np

from model.params import RateParams, check_rate
from utils.errors import DomainError, ValidationError


class SamplerTag(str, Enum):
    """Способ получения записей наблюдателя."""

    MECHANISTIC = "mechanistic"
    DIRECT = "direct"


@dataclass(frozen=True)
class ObserverRecord:
    """
    Исход распада одной частицы для одной линии наблюдателя.

    Attributes:
        particle_id (int): Номер частицы в выборке
        branch_index (int): Номер ветви B_i, на которой наблюдался распад (i >= 1)
        decay_time (float): Время распада, > 0
    """

    particle_id: int
    branch_index: int
    decay_time: float

    def __post_init__(self):
        if self.particle_id < 0:
            raise ValidationError(f"particle_id must be non-negative, got {self.particle_id}")
        if self.branch_index < 1:
            raise ValidationError(f"branch_index must be >= 1, got {self.branch_index}")
        if not self.decay_time > 0.0:
            raise ValidationError(f"decay_time must be positive, got {self.decay_time}")


@dataclass(frozen=True)
class BranchTree:
    """
    Реализация топологии ветвления до горизонта времени.

    Каждое событие t_i на ветви B_0 порождает ветвь основного состояния B_i,
    поэтому ветвь B_i существует тогда и только тогда, когда i <= event_count.
    """

    spine_event_times: Tuple[float, ...]
    horizon: float
    params: RateParams

    def __post_init__(self):
        horizon = check_rate(self.horizon, "horizon")
        times = tuple(float(t) for t in self.spine_event_times)
        if times:
            gaps = np.diff(np.concatenate(([0.0], times)))
            if np.any(gaps <= 0.0):
                raise ValidationError("spine event times must be positive and strictly increasing")
            if times[-1] > horizon:
                raise ValidationError(f"event time {times[-1]} exceeds horizon {horizon}")
        object.__setattr__(self, "horizon", horizon)
        object.__setattr__(self, "spine_event_times", times)

    @property
    def event_count(self) -> int:
        return len(self.spine_event_times)

    def inter_event_gaps(self) -> np.ndarray:
        """Промежутки между событиями, начиная с t_1 - 0."""
        return np.diff(np.concatenate(([0.0], self.spine_event_times)))

    def branch_count_at(self, t: float) -> int:
        """Число ветвей к моменту t (внешний взгляд): B_0 плюс по одной на событие."""
        if t < 0.0:
            raise DomainError(f"time must be non-negative, got {t}")
        return 1 + int(np.searchsorted(self.spine_event_times, t, side="right"))


class DecayDataset:
    """
    Набор из N записей наблюдателя с параметрами генерации.

    Записи хранятся по столбцам (массивы numpy), чтобы выборки в миллионы
    частиц оставались компактными; свойство records отдает ObserverRecord.
    """

    def __init__(self, branch_index, decay_time, params: Optional[RateParams],
                 seed: Optional[int], sampler_tag: Optional[SamplerTag]):
        branch_index = np.asarray(branch_index, dtype=np.int64)
        decay_time = np.asarray(decay_time, dtype=float)
        if branch_index.ndim != 1 or branch_index.shape != decay_time.shape:
            raise ValidationError("branch_index and decay_time must be 1-D arrays of equal length")
        if branch_index.size == 0:
            raise ValidationError("dataset is empty")
        if np.any(branch_index < 1):
            raise ValidationError("branch_index must be >= 1 for every record")
        if not np.all(decay_time > 0.0):
            raise ValidationError("decay_time must be positive for every record")
        branch_index.flags.writeable = False
        decay_time.flags.writeable = False
        self.branch_index = branch_index
        self.decay_time = decay_time
        self.params = params
        self.seed = seed
        self.sampler_tag = SamplerTag(sampler_tag) if sampler_tag is not None else None

    @classmethod
    def from_times(cls, decay_time, params=None) -> "DecayDataset":
        """Набор только из времен распада (номер ветви неизвестен и принимается равным 1)."""
        decay_time = np.asarray(decay_time, dtype=float)
        return cls(np.ones(decay_time.shape, dtype=np.int64), decay_time, params, None, None)

    def __len__(self) -> int:
        return int(self.decay_time.size)

    @property
    def n(self) -> int:
        return len(self)

    @property
    def particle_id(self) -> np.ndarray:
        return np.arange(len(self), dtype=np.int64)

    @property
    def records(self) -> Iterator[ObserverRecord]:
        for pid, (i, t) in enumerate(zip(self.branch_index.tolist(), self.decay_time.tolist())):
            yield ObserverRecord(pid, i, t)

    def __getitem__(self, particle_id: int) -> ObserverRecord:
        return ObserverRecord(int(particle_id), int(self.branch_index[particle_id]),
                              float(self.decay_time[particle_id]))

    def __eq__(self, other) -> bool:
        if not isinstance(other, DecayDataset):
            return NotImplemented
        return (
            self.params == other.params
            and self.seed == other.seed
            and self.sampler_tag == other.sampler_tag
            and np.array_equal(self.branch_index, other.branch_index)
            and np.array_equal(self.decay_time, other.decay_time)
        )

    def __repr__(self) -> str:
        return (f"DecayDataset(n={len(self)}, params={self.params}, seed={self.seed}, "
                f"sampler={self.sampler_tag.value if self.sampler_tag else None})")
