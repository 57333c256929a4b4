# Импорт необходимых библиотек
import os                              # Доступ к переменным окружения
from dataclasses import dataclass      # Неизменяемый контейнер настроек
from pathlib import Path               # Работа с путями к файлам конфигурации

from dotenv import dotenv_values, load_dotenv  # Загрузка .env и разбор файлов key=value

from .errors import ValidationError

# Загрузка переменных окружения из .env файла при импорте модуля
load_dotenv()


def _env_flag(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class Settings:
    """
    Настройки процесса, общие для всех команд.

    Источник - переменные окружения (и .env файл):
    - DECAYLAB_LOG_DIR: директория для файлов логов
    - DECAYLAB_LOG_LEVEL: уровень логирования (DEBUG, INFO, ...)
    - DECAYLAB_LOG_TO_FILE: писать ли лог в файл
    - DECAYLAB_THREADS: число потоков симуляции по умолчанию
    - DECAYLAB_ALPHA: уровень значимости критериев согласия по умолчанию
    """

    log_dir: str = "logs"
    log_level: str = "INFO"
    log_to_file: bool = True
    threads: int = 1
    alpha: float = 0.01

    @classmethod
    def from_env(cls) -> "Settings":
        """Чтение настроек из окружения с проверкой числовых значений."""
        try:
            threads = int(os.getenv("DECAYLAB_THREADS", "1"))
            alpha = float(os.getenv("DECAYLAB_ALPHA", "0.01"))
        except ValueError as e:
            raise ValidationError(f"Invalid numeric setting in environment: {e}") from e
        if threads < 1:
            raise ValidationError(f"DECAYLAB_THREADS must be >= 1, got {threads}")
        if not 0.0 < alpha < 1.0:
            raise ValidationError(f"DECAYLAB_ALPHA must lie in (0, 1), got {alpha}")
        return cls(
            log_dir=os.getenv("DECAYLAB_LOG_DIR", "logs"),
            log_level=os.getenv("DECAYLAB_LOG_LEVEL", "INFO").upper(),
            log_to_file=_env_flag("DECAYLAB_LOG_TO_FILE", True),
            threads=threads,
            alpha=alpha,
        )


def read_config_file(path) -> dict:
    """
    Чтение файла конфигурации эксперимента в формате key=value.

    Строки с '#' считаются комментариями, ключи приводятся к нижнему регистру,
    дефисы заменяются подчеркиваниями (lambda-b == lambda_b).

    Args:
        path: Путь к файлу конфигурации

    Returns:
        dict: Словарь строковых значений

    Raises:
        ValidationError: Если файл не существует или содержит ключ без значения
    """
    path = Path(path)
    if not path.is_file():
        raise ValidationError(f"Config file not found: {path}")
    values = {}
    for key, value in dotenv_values(path).items():
        if value is None:
            raise ValidationError(f"Config key without value in {path}: {key}")
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values
