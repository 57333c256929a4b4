# Импорт необходимых библиотек
import psutil      # Библиотека для мониторинга системных ресурсов (CPU, память, потоки)
import time        # Библиотека для работы с временными метками и измерения интервалов
from datetime import datetime  # Библиотека для работы с датой и временем


class PerformanceMonitor:
    """
    Класс для мониторинга производительности долгих прогонов.

    Отслеживает и анализирует:
    - Использование CPU
    - Использование памяти
    - Количество активных потоков
    - Время работы с момента создания монитора
    """

    # Ограничение размера истории метрик
    HISTORY_LIMIT = 1000

    def __init__(self, thresholds: dict = None):
        """
        Инициализация системы мониторинга производительности.

        Args:
            thresholds (dict): Пороговые значения cpu_percent, memory_percent, thread_count
        """
        self.start_time = time.time()  # Сохранение времени запуска для расчета uptime
        self.metrics_history = []      # Список для хранения истории метрик
        self.process = psutil.Process()  # Получение объекта текущего процесса

        # Пороговые значения для определения проблем с производительностью
        self.thresholds = {
            'cpu_percent': 400.0,   # Несколько ядер при многопоточной симуляции
            'memory_percent': 75.0,
            'thread_count': 64,
        }
        if thresholds:
            self.thresholds.update(thresholds)

    def get_metrics(self) -> dict:
        """
        Получение текущих метрик производительности.

        Returns:
            dict: timestamp, cpu_percent, memory_percent, memory_rss_mb, thread_count, uptime.
                  В случае ошибки psutil возвращает словарь с ключом 'error'.
        """
        try:
            metrics = {
                'timestamp': datetime.now(),
                'cpu_percent': self.process.cpu_percent(),
                'memory_percent': self.process.memory_percent(),
                'memory_rss_mb': self.process.memory_info().rss / 2**20,
                'thread_count': self.process.num_threads(),
                'uptime': time.time() - self.start_time,
            }
        except psutil.Error as e:
            return {
                'error': str(e),
                'timestamp': datetime.now()
            }

        self.metrics_history.append(metrics)
        if len(self.metrics_history) > self.HISTORY_LIMIT:
            self.metrics_history.pop(0)  # Удаление самой старой записи
        return metrics

    def check_health(self, metrics: dict = None) -> dict:
        """
        Проверка состояния процесса на основе пороговых значений.

        Args:
            metrics (dict): Уже снятые метрики; если не переданы, снимаются заново

        Returns:
            dict: status ('healthy', 'warning' или 'error'), warnings, timestamp
        """
        metrics = metrics or self.get_metrics()

        if 'error' in metrics:
            return {'status': 'error', 'error': metrics['error'], 'warnings': []}

        health_status = {
            'status': 'healthy',
            'warnings': [],
            'timestamp': metrics['timestamp']
        }

        if metrics['cpu_percent'] > self.thresholds['cpu_percent']:
            health_status['warnings'].append(f"High CPU usage: {metrics['cpu_percent']}%")
        if metrics['memory_percent'] > self.thresholds['memory_percent']:
            health_status['warnings'].append(f"High memory usage: {metrics['memory_percent']:.1f}%")
        if metrics['thread_count'] > self.thresholds['thread_count']:
            health_status['warnings'].append(f"High thread count: {metrics['thread_count']}")

        if health_status['warnings']:
            health_status['status'] = 'warning'
        return health_status

    def log_metrics(self, logger, label: str = "run") -> dict:
        """
        Логирование текущих метрик и предупреждений после этапа работы.

        Args:
            logger: Объект логгера (AppLogger)
            label (str): Название этапа для сообщения

        Returns:
            dict: Результат check_health
        """
        metrics = self.get_metrics()
        health = self.check_health(metrics)

        if 'error' not in metrics:
            logger.info(
                f"Performance metrics ({label}) - "
                f"CPU: {metrics['cpu_percent']:.1f}%, "
                f"Memory: {metrics['memory_rss_mb']:.1f} MB, "
                f"Threads: {metrics['thread_count']}, "
                f"Elapsed: {metrics['uptime']:.2f}s"
            )
        else:
            logger.warning(f"Performance metrics unavailable: {metrics['error']}")

        for warning in health['warnings']:
            logger.warning(f"Performance warning: {warning}")
        return health
