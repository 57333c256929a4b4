"""
Конфигурация эксперимента: флаги командной строки поверх файла key=value.

Пример файла:
    # эксперимент с ε = 0.5
    lambda-b=1
    epsilon=0.5
    n=100000
    seed=42
    sampler=direct
"""
import math
from dataclasses import dataclass
from typing import Optional

from model.params import RateParams, check_rate
from sim.records import SamplerTag
from sim.streams import check_seed
from utils.config import Settings, read_config_file
from utils.errors import DomainError, ValidationError

# Синонимы ключей файла конфигурации (после приведения к нижнему регистру)
KEY_ALIASES = {
    "lambda_b": "lambda_B",
    "n": "n_particles",
    "out": "output_path",
    "output": "output_path",
}

# Преобразование строковых значений файла
FIELD_TYPES = {
    "lambda_B": float,
    "epsilon": float,
    "n_particles": int,
    "seed": int,
    "sampler": str,
    "horizon": float,
    "confidence": float,
    "output_path": str,
    "threads": int,
}


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Параметры одного запуска команды simulate, tree или coverage.

    Инварианты повторяют RateParams; сэмплер по умолчанию - direct.
    threads влияет только на скорость, но не на результат.
    """

    lambda_B: float
    epsilon: float = 0.0
    n_particles: int = 1
    seed: int = 0
    sampler: SamplerTag = SamplerTag.DIRECT
    horizon: Optional[float] = None
    confidence: float = 0.95
    output_path: Optional[str] = None
    threads: int = 1

    def __post_init__(self):
        # RateParams проверяет λ_B и ε и приводит их к float
        params = RateParams(self.lambda_B, self.epsilon)
        object.__setattr__(self, "lambda_B", params.lambda_B)
        object.__setattr__(self, "epsilon", params.epsilon)
        if int(self.n_particles) != self.n_particles or self.n_particles < 1:
            raise ValidationError(f"n_particles must be an integer >= 1, got {self.n_particles}")
        object.__setattr__(self, "seed", check_seed(self.seed))
        try:
            object.__setattr__(self, "sampler", SamplerTag(self.sampler))
        except ValueError as e:
            choices = ", ".join(tag.value for tag in SamplerTag)
            raise ValidationError(f"sampler must be one of {choices}, got {self.sampler!r}") from e
        if self.horizon is not None:
            object.__setattr__(self, "horizon", check_rate(self.horizon, "horizon"))
        if not 0.0 < self.confidence < 1.0 or math.isnan(self.confidence):
            raise DomainError(f"confidence must lie in (0, 1), got {self.confidence}")
        if self.threads < 1:
            raise ValidationError(f"threads must be >= 1, got {self.threads}")

    @property
    def params(self) -> RateParams:
        return RateParams(self.lambda_B, self.epsilon)

    @classmethod
    def from_sources(cls, flags: dict, config_path=None, settings: Settings = None) -> "ExperimentConfig":
        """
        Сборка конфигурации: значения по умолчанию, затем файл, затем флаги.

        Флаги со значением None считаются не заданными и не перекрывают файл.

        Args:
            flags (dict): Значения флагов с именами полей ExperimentConfig
            config_path: Путь к файлу key=value или None
            settings (Settings): Настройки процесса (число потоков по умолчанию)

        Raises:
            ValidationError: Неизвестный ключ, нечисловое значение или отсутствие lambda_B
        """
        settings = settings or Settings.from_env()
        values = {"threads": settings.threads}
        if config_path is not None:
            for key, raw in read_config_file(config_path).items():
                name = KEY_ALIASES.get(key, key)
                if name not in FIELD_TYPES:
                    raise ValidationError(f"Unknown config key in {config_path}: {key}")
                try:
                    values[name] = FIELD_TYPES[name](raw)
                except ValueError as e:
                    raise ValidationError(f"Invalid value for {key} in {config_path}: {raw!r}") from e
        values.update({name: value for name, value in flags.items() if value is not None})
        if "lambda_B" not in values:
            raise ValidationError("lambda_B is required (flag --lambda-b or config key lambda-b)")
        return cls(**values)
