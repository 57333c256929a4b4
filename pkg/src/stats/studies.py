# Импорт необходимых библиотек
import math                  # Квадратный корень для стандартной ошибки
import time                  # Библиотека для измерения длительности исследования
from concurrent.futures import ThreadPoolExecutor  # Параллельные повторы
from datetime import datetime  # Отметки времени повторов

from model.params import RateParams
from sim.driver import SampleRequest, simulate_sample
from sim.records import SamplerTag
from sim.streams import derive_seed
from utils.errors import ValidationError
from utils.logger import AppLogger

from .estimate import EstimateResult, estimate_dataset


class ReplicateStudy:
    """
    Класс для сбора и анализа результатов повторных симуляций.

    Отслеживает для каждого повтора:
    - Оценки λ̂_A и ε̂ с интервалами
    - Попадание истинного ε в доверительный интервал
    - Отклонение ε̂ от истины в единицах стандартной ошибки
    - Верхнюю границу ε
    """

    def __init__(self, params: RateParams, lambda_B_theory: float = None):
        """
        Инициализация исследования.

        Args:
            params (RateParams): Истинные параметры генерации
            lambda_B_theory (float): Теоретическая λ_B для обращения (по умолчанию params.lambda_B)
        """
        self.params = params
        self.lambda_B_theory = lambda_B_theory or params.lambda_B
        self.start_time = time.time()
        self.replicates = []

    def track_replicate(self, seed: int, result: EstimateResult):
        """
        Сохранение метрик одного повтора.

        Args:
            seed (int): Seed повтора
            result (EstimateResult): Оценка по набору данных повтора
        """
        epsilon = self.params.epsilon
        lo, hi = result.epsilon_ci
        standard_error = result.lambda_A_hat / (math.sqrt(result.n) * self.lambda_B_theory)
        self.replicates.append({
            'timestamp': datetime.now(),
            'seed': seed,
            'lambda_A_hat': result.lambda_A_hat,
            'epsilon_hat': result.epsilon_hat,
            'epsilon_upper_limit': result.epsilon_upper_limit,
            'covered': lo <= epsilon <= hi,
            'z_score': (result.epsilon_hat - epsilon) / standard_error,
            'ks_pass': result.ks_pass,
        })

    def get_statistics(self, upper_limit_threshold: float = None) -> dict:
        """
        Агрегированные метрики по всем повторам.

        Args:
            upper_limit_threshold (float): Если задан, считается доля повторов с верхней границей ε не выше порога

        Returns:
            dict: replicates, coverage, within_3se, mean_epsilon_hat, std_epsilon_hat,
                  mean_upper_limit, ks_pass_rate, duration (и upper_limit_below при пороге)
        """
        count = len(self.replicates)
        if count == 0:
            return {'replicates': 0, 'duration': time.time() - self.start_time}

        estimates = [r['epsilon_hat'] for r in self.replicates]
        mean = math.fsum(estimates) / count
        variance = math.fsum((e - mean) ** 2 for e in estimates) / (count - 1) if count > 1 else 0.0
        statistics = {
            'replicates': count,
            'coverage': sum(r['covered'] for r in self.replicates) / count,
            'within_3se': sum(abs(r['z_score']) <= 3.0 for r in self.replicates) / count,
            'mean_epsilon_hat': mean,
            'std_epsilon_hat': math.sqrt(variance),
            'mean_upper_limit': math.fsum(r['epsilon_upper_limit'] for r in self.replicates) / count,
            'ks_pass_rate': sum(r['ks_pass'] for r in self.replicates) / count,
            'duration': time.time() - self.start_time,
        }
        if upper_limit_threshold is not None:
            statistics['upper_limit_below'] = sum(
                r['epsilon_upper_limit'] <= upper_limit_threshold for r in self.replicates
            ) / count
        return statistics

    def export_data(self) -> list:
        """Все записи повторов (список словарей), отметки времени в ISO 8601."""
        return [{**record, 'timestamp': record['timestamp'].isoformat()} for record in self.replicates]


def coverage_study(params: RateParams, n_particles: int, replicates: int, confidence: float = 0.95,
                   seed: int = 0, sampler: SamplerTag = SamplerTag.DIRECT, threads: int = 1,
                   lambda_B_theory: float = None) -> ReplicateStudy:
    """
    Повторная симуляция и оценка для проверки покрытия интервалов и состоятельности.

    Seed повтора r выводится из (seed, r), поэтому результат не зависит от числа потоков.
    """
    if replicates < 1:
        raise ValidationError(f"replicates must be >= 1, got {replicates}")
    logger = AppLogger()
    study = ReplicateStudy(params, lambda_B_theory)
    logger.info(
        f"Coverage study: {replicates} replicates of N={n_particles}, "
        f"lambda_B={params.lambda_B!r}, epsilon={params.epsilon!r}, confidence={confidence}"
    )

    def run(index: int):
        replicate_seed = derive_seed(seed, index)
        dataset = simulate_sample(SampleRequest(params, n_particles, replicate_seed, sampler))
        return replicate_seed, estimate_dataset(dataset, study.lambda_B_theory, confidence)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, range(replicates)))
    else:
        outcomes = [run(index) for index in range(replicates)]

    for replicate_seed, result in outcomes:
        study.track_replicate(replicate_seed, result)
    return study
