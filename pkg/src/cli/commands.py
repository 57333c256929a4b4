"""
Командная строка decay-lab.

Стандартный вывод занят только результатами (CSV, JSON, таблица, число),
логи и сообщения об ошибках идут в stderr.

Коды выхода:
    0 - успех
    1 - проверка тождеств не пройдена
    2 - ошибка использования или неверные входные данные
"""
# Импорт необходимых библиотек
import functools   # Обертка обработчика ошибок с сохранением имени команды
import json        # Сводка coverage и записи повторов
import logging     # Логгер по имени, пока AppLogger не создан
import math
import sys         # stdout по умолчанию для экспорта дерева

import click       # Командная строка: группы, опции, коды выхода
import numpy as np

from model.analytic import erlang_survival
from model.params import ErlangSpec, check_rate
from oracle.identities import (
    DEFAULT_EPSILONS,
    DEFAULT_LAMBDAS,
    DEFAULT_QUAD_TOLERANCE,
    DEFAULT_TOLERANCE,
    run_identity_suite,
)
from sim.driver import simulate_sample
from sim.io import format_number, read_dataset_csv, write_dataset_csv, write_tree_csv
from sim.records import SamplerTag
from sim.samplers import observe_tree, sample_branch_tree
from sim.streams import observer_stream, tree_stream
from sim.summaries import branch_class_summary
from stats.estimate import estimate_dataset, required_sample_size
from stats.studies import coverage_study
from utils.config import Settings
from utils.errors import ValidationError
from utils.logger import AppLogger
from utils.monitor import PerformanceMonitor

from .config import ExperimentConfig

# Число ветвей на рисунке выживания по классам
FIGURE_BRANCHES = 5
# Классы ветвей в отладочной сводке simulate
SUMMARY_BRANCHES = 5


class InvalidInput(click.ClickException):
    """Неверные параметры или входные файлы: сообщение в stderr, код выхода 2."""

    exit_code = 2


def handle_errors(func):
    """Перевод ошибок домена и валидации в InvalidInput; прочие ошибки логируются со стеком."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        # Логгер берется по имени: AppLogger сам читает окружение и может быть источником ошибки
        logger = logging.getLogger(AppLogger.LOGGER_NAME)
        try:
            return func(*args, **kwargs)
        except ValueError as e:
            logger.error(f"{func.__name__}: {e}")
            raise InvalidInput(str(e)) from e
        except OSError as e:
            # Недоступный файл или каталог вывода - ошибка входных данных, а не провал проверки
            target = f" {e.filename}" if e.filename else ""
            logger.error(f"{func.__name__}: cannot access{target}: {e.strerror or e}")
            raise InvalidInput(f"cannot access{target}: {e.strerror or e}") from e
        except (click.ClickException, click.exceptions.Exit):
            raise
        except Exception:
            logger.error(f"{func.__name__}: unexpected failure", exc_info=True)
            raise

    return wrapper


def config_option(func):
    return click.option(
        "--config", "config_path", type=click.Path(dir_okay=False),
        default=None, help="Файл key=value с параметрами (флаги имеют приоритет)",
    )(func)


def rate_options(func):
    func = click.option("--epsilon", type=float, default=None, help="Вероятность ветви возбужденного состояния ε")(func)
    func = click.option("--lambda-b", "lambda_B", type=float, default=None, help="Скорость ветвления λ_B")(func)
    return func


@click.group()
def main():
    """decay-lab: симуляция и анализ модели ветвления распада возбужденного состояния."""


@main.command()
@rate_options
@click.option("--n", "n_particles", type=int, default=None, help="Число частиц")
@click.option("--seed", type=int, default=None, help="64-битный seed")
@click.option("--sampler", type=click.Choice([tag.value for tag in SamplerTag]), default=None)
@click.option("--out", "output_path", type=click.Path(dir_okay=False), default=None, help="Файл CSV набора данных")
@click.option("--threads", type=int, default=None, help="Потоки симуляции (не влияют на результат)")
@config_option
@handle_errors
def simulate(config_path, **flags):
    """Симуляция N линий наблюдателя и запись набора данных в CSV."""
    logger = AppLogger()
    monitor = PerformanceMonitor()
    config = ExperimentConfig.from_sources(flags, config_path)
    if config.output_path is None:
        raise ValidationError("output path is required (flag --out or config key out)")

    logger.info(
        f"simulate: N={config.n_particles}, lambda_B={config.lambda_B!r}, epsilon={config.epsilon!r}, "
        f"sampler={config.sampler.value}, seed={config.seed}"
    )
    dataset = simulate_sample(config)
    write_dataset_csv(dataset, config.output_path)

    total = math.fsum(dataset.decay_time.tolist())
    click.echo(f"n={dataset.n}")
    click.echo(f"mean_lifetime={format_number(total / dataset.n)}")
    click.echo(f"lambda_A_hat={format_number(dataset.n / total)}")
    logger.info(f"Dataset written to {config.output_path}")
    for row in branch_class_summary(dataset, SUMMARY_BRANCHES):
        logger.debug(
            f"B_{row['branch_index']}: count={row['count']}, mean={row['mean']:.4g} "
            f"(expected {row['expected_mean']:.4g}), variance={row['variance']:.4g}"
        )
    monitor.log_metrics(logger, "simulate")


@main.command()
@click.argument("dataset_path", type=click.Path(dir_okay=False))
@click.option("--lambda-b", "lambda_B", type=float, required=True, help="Теоретическая скорость ветвления λ_B")
@click.option("--confidence", type=float, default=0.95, show_default=True)
@click.option("--alpha", type=float, default=None, help="Уровень значимости критериев (по умолчанию DECAYLAB_ALPHA)")
@click.option("--format", "output_format", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@handle_errors
def estimate(dataset_path, lambda_B, confidence, alpha, output_format):
    """Оценка λ_A и ε по набору данных; результат в JSON или CSV."""
    logger = AppLogger()
    settings = Settings.from_env()
    dataset = read_dataset_csv(dataset_path)
    logger.info(f"estimate: {dataset.n} records from {dataset_path}")
    result = estimate_dataset(dataset, lambda_B, confidence, alpha if alpha is not None else settings.alpha)
    if output_format == "csv":
        click.echo(result.to_csv_row(), nl=False)
    else:
        click.echo(result.to_json())


@main.command()
@click.option("--lambda-b", "lambda_B", type=float, default=1.0, show_default=True)
@click.option("--t-max", "t_max_over_W", type=float, default=6.0, show_default=True, help="Верхняя граница t/W")
@click.option("--points", "n_points", type=int, default=61, show_default=True)
@handle_errors
def figure2(lambda_B, t_max_over_W, n_points):
    """Функции выживания S_1..S_5 на сетке нормированного времени t/W (CSV)."""
    lambda_B = check_rate(lambda_B, "lambda_B")
    t_max_over_W = check_rate(t_max_over_W, "t_max_over_W")
    if n_points < 2:
        raise ValidationError(f"points must be >= 2, got {n_points}")

    scaled = np.linspace(0.0, t_max_over_W, n_points)
    times = scaled / lambda_B
    columns = [erlang_survival(ErlangSpec(i, lambda_B), times) for i in range(1, FIGURE_BRANCHES + 1)]
    click.echo("t_over_W," + ",".join(f"S{i}" for i in range(1, FIGURE_BRANCHES + 1)))
    for row, u in enumerate(scaled):
        click.echo(",".join([format_number(u)] + [format_number(column[row]) for column in columns]))


@main.command()
@click.option("--epsilon", "epsilons", type=float, multiple=True, help="Значения ε (по умолчанию решетка)")
@click.option("--lambda-b", "lambdas", type=float, multiple=True, help="Значения λ_B (по умолчанию решетка)")
@click.option("--tol", type=float, default=DEFAULT_TOLERANCE, show_default=True)
@click.option("--quad-tol", type=float, default=DEFAULT_QUAD_TOLERANCE, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="Один JSON-объект на тождество вместо таблицы")
@handle_errors
def verify(epsilons, lambdas, tol, quad_tol, as_json):
    """Проверка всех тождеств модели рядами и квадратурой; код выхода 1 при провале."""
    logger = AppLogger()
    monitor = PerformanceMonitor()
    suite = run_identity_suite(
        epsilons or DEFAULT_EPSILONS,
        lambdas or DEFAULT_LAMBDAS,
        tol=tol,
        quad_tol=quad_tol,
        logger=logger,
    )

    for notice in suite.notices:
        # В режиме JSON stdout содержит только объекты отчетов
        click.echo(f"SKIP {notice}", err=as_json)
    if as_json:
        for report in suite.reports:
            click.echo(report.to_json())
    else:
        click.echo(f"{'identity':<18} {'lambda_B':>8} {'epsilon':>8} {'max_abs_error':>13} {'terms':>6} result")
        for report in suite.reports:
            label = report.identity_name.value
            if "shape" in report.details:
                label = f"{label}[{report.details['shape']}]"
            click.echo(
                f"{label:<18} {report.params.lambda_B:>8g} {report.params.epsilon:>8g} "
                f"{report.max_abs_error:>13.3e} {report.terms_used:>6d} {'PASS' if report.passed else 'FAIL'}"
            )
        click.echo(f"{len(suite.reports) - len(suite.failures)}/{len(suite.reports)} passed")
    monitor.log_metrics(logger, "verify")

    if not suite.passed:
        raise click.exceptions.Exit(1)


@main.command()
@click.argument("epsilon_target", type=float)
@click.argument("confidence", type=float, default=0.95, required=False)
@handle_errors
def power(epsilon_target, confidence):
    """Размер выборки, при котором ε_target отличима от нуля на уровне confidence."""
    click.echo(required_sample_size(epsilon_target, confidence))


@main.command()
@rate_options
@click.option("--horizon", type=float, default=None, help="Длина интервала наблюдения")
@click.option("--seed", type=int, default=None)
@click.option("--index", "tree_index", type=int, default=0, show_default=True, help="Номер дерева в потоке seed")
@click.option("--out", "output_path", type=click.Path(dir_okay=False), default=None, help="Файл CSV (иначе stdout)")
@config_option
@handle_errors
def tree(config_path, tree_index, **flags):
    """Экспорт дерева ветвления (внешний взгляд) в CSV."""
    logger = AppLogger()
    config = ExperimentConfig.from_sources(flags, config_path)
    if config.horizon is None:
        raise ValidationError("horizon is required (flag --horizon or config key horizon)")
    if tree_index < 0:
        raise ValidationError(f"index must be >= 0, got {tree_index}")

    branch_tree = sample_branch_tree(config.params, config.horizon, tree_stream(config.seed, tree_index))
    logger.info(f"tree: {branch_tree.event_count} branching events on (0, {config.horizon!r}]")
    record = observe_tree(branch_tree, observer_stream(config.seed, tree_index))
    if record is None:
        logger.info("tree: observer lineage stays on B_0 up to the horizon")
    else:
        logger.info(f"tree: observer decays on B_{record.branch_index} at t={record.decay_time!r}")
    write_tree_csv(branch_tree, config.output_path or sys.stdout, seed=config.seed)


@main.command()
@rate_options
@click.option("--n", "n_particles", type=int, default=None, help="Частиц в одном повторе")
@click.option("--replicates", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--sampler", type=click.Choice([tag.value for tag in SamplerTag]), default=None)
@click.option("--confidence", type=float, default=None)
@click.option("--lambda-b-theory", type=float, default=None, help="λ_B для обращения (по умолчанию истинная)")
@click.option("--upper-limit-threshold", type=float, default=None, help="Порог для доли верхних границ ε")
@click.option("--export", "export_path", type=click.Path(dir_okay=False), default=None,
              help="Файл JSON Lines с записями отдельных повторов")
@click.option("--threads", type=int, default=None)
@config_option
@handle_errors
def coverage(config_path, replicates, lambda_b_theory, upper_limit_threshold, export_path, **flags):
    """Повторные симуляции: покрытие интервалов, отклонения ε̂ и верхние границы (JSON)."""
    logger = AppLogger()
    monitor = PerformanceMonitor()
    config = ExperimentConfig.from_sources(flags, config_path)
    study = coverage_study(
        config.params,
        config.n_particles,
        replicates,
        confidence=config.confidence,
        seed=config.seed,
        sampler=config.sampler,
        threads=config.threads,
        lambda_B_theory=lambda_b_theory,
    )
    if export_path is not None:
        with open(export_path, "w", encoding="utf-8") as f:
            for record in study.export_data():
                f.write(json.dumps(record) + "\n")
        logger.info(f"Replicate records written to {export_path}")
    statistics = study.get_statistics(upper_limit_threshold)
    logger.info(f"Coverage study finished in {statistics.pop('duration'):.2f}s")
    summary = {
        "lambda_B": config.lambda_B,
        "epsilon": config.epsilon,
        "n_particles": config.n_particles,
        "confidence": config.confidence,
        "seed": config.seed,
        **statistics,
    }
    click.echo(json.dumps(summary))
    monitor.log_metrics(logger, "coverage")
