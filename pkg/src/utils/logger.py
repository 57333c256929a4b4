# Импорт необходимых библиотек
import logging     # Стандартная библиотека Python для логирования
import os         # Библиотека для работы с операционной системой и файлами
import sys        # Доступ к текущему потоку stderr
from datetime import datetime  # Библиотека для работы с датой и временем

from .config import Settings

# Атрибут, которым помечены собственные обработчики AppLogger
HANDLER_MARK = "_decay_lab_handler"


class _ConsoleHandler(logging.StreamHandler):
    """
    Консольный обработчик, который всегда пишет в текущий sys.stderr.

    Стандартный StreamHandler запоминает поток в момент создания; при подмене
    sys.stderr (тесты, перенаправление вывода CLI) сообщения ушли бы в закрытый поток.
    """

    @property
    def stream(self):
        return sys.stderr

    @stream.setter
    def stream(self, value):
        pass


class AppLogger:
    """
    Класс для логирования работы приложения.

    Обеспечивает:
    - Сохранение логов в файлы с датой в имени
    - Вывод логов в консоль (stderr, stdout остается для CSV и JSON)
    - Различные уровни логирования (debug, info, warning, error)
    - Форматирование сообщений с временными метками

    Обработчики добавляются один раз на процесс, поэтому экземпляры
    можно создавать в каждом модуле, как это делают клиенты и мониторы.
    """

    LOGGER_NAME = 'DecayLab'

    def __init__(self, settings: Settings = None):
        """
        Инициализация системы логирования.

        Настраивает:
        - Директорию для хранения логов
        - Форматирование сообщений
        - Обработчики для файла и консоли
        - Уровень логирования из настроек окружения

        Args:
            settings (Settings): Настройки процесса; по умолчанию читаются из окружения
        """
        settings = settings or Settings.from_env()
        self.logger = logging.getLogger(self.LOGGER_NAME)
        self.logger.setLevel(getattr(logging, settings.log_level, logging.INFO))
        self.logs_dir = settings.log_dir

        # Обработчики уже настроены другим экземпляром; чужие (например, перехват логов pytest) не в счет
        if any(getattr(handler, HANDLER_MARK, False) for handler in self.logger.handlers):
            return

        # Настройка формата сообщений лога
        # Формат: YYYY-MM-DD HH:MM:SS - LEVEL - Message
        formatter = logging.Formatter(
            '%(asctime)s - %(levelname)s - %(message)s',  # Шаблон сообщения
            datefmt='%Y-%m-%d %H:%M:%S'                   # Формат даты и времени
        )

        if settings.log_to_file:
            # Создание директории для хранения файлов логов
            os.makedirs(self.logs_dir, exist_ok=True)

            # Формирование имени файла лога с текущей датой
            # Формат: decay_lab_YYYY-MM-DD.log
            current_date = datetime.now().strftime("%Y-%m-%d")
            log_file = os.path.join(self.logs_dir, f"decay_lab_{current_date}.log")

            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setFormatter(formatter)
            setattr(file_handler, HANDLER_MARK, True)
            self.logger.addHandler(file_handler)

        console_handler = _ConsoleHandler()
        console_handler.setFormatter(formatter)
        setattr(console_handler, HANDLER_MARK, True)
        self.logger.addHandler(console_handler)
        self.logger.propagate = False

    def info(self, message: str):
        """
        Логирование информационного сообщения.

        Args:
            message (str): Текст информационного сообщения
        """
        self.logger.info(message)

    def error(self, message: str, exc_info=None):
        """
        Логирование ошибки.

        Args:
            message (str): Текст сообщения об ошибке
            exc_info: Информация об исключении (по умолчанию None)
                     Если передано True, автоматически добавляет стек вызовов
        """
        self.logger.error(message, exc_info=exc_info)

    def debug(self, message: str):
        """
        Логирование отладочной информации (параметры прогонов, размеры блоков).

        Args:
            message (str): Текст отладочного сообщения
        """
        self.logger.debug(message)

    def warning(self, message: str):
        """
        Логирование предупреждения.

        Args:
            message (str): Текст предупреждения
        """
        self.logger.warning(message)
