"""
Численная проверка тождеств модели ветвления усеченными рядами и квадратурой.

Модуль намеренно не использует замкнутые формы из model.analytic для
вычисления рядов: каждый член строится заново, а сравнение идет с
замкнутой формой. Ошибки измеряются в безразмерных величинах
(время в единицах W = 1/λ_B, плотность в единицах λ_B), поэтому один
допуск осмыслен при любом λ_B.
"""
# Импорт необходимых библиотек
import json                 # Отчеты проверок в формате JSON
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special  # Квадратура quad и гамма-функции для интегральных тождеств

from model.analytic import beta, erlang_pdf, erlang_survival, mixture_pdf, mixture_survival
from model.params import ErlangSpec, RateParams, check_rate
from utils.errors import DomainError, ValidationError

from .series import compensated_sum, geometric_terms, geometric_weights, poisson_terms

DEFAULT_TOLERANCE = 1e-12
DEFAULT_QUAD_TOLERANCE = 1e-8

DEFAULT_EPSILONS = (0.01, 0.1, 0.5, 0.9, 0.99)
DEFAULT_LAMBDAS = (0.1, 1.0, 10.0)
DEFAULT_SCALED_TIMES = tuple(float(u) for u in range(21))
DEFAULT_SHAPES = (1, 2, 5, 10, 50, 100)

# Предел подынтервалов адаптивной квадратуры
QUAD_LIMIT = 200


class IdentityName(str, Enum):
    BETA_SERIES = "beta_series"
    TAU_A_SERIES = "tau_A_series"
    F_A_SERIES = "f_A_series"
    S_A_COLUMN_SUM = "S_A_column_sum"
    PDF_NORMALIZATION = "pdf_normalization"


@dataclass(frozen=True)
class IdentityReport:
    """
    Результат проверки одного тождества.

    passed вычисляется из max_abs_error и tolerance, поэтому инвариант
    passed <=> max_abs_error <= tolerance выполняется по построению.
    details хранит значения обеих сторон и вспомогательные величины.
    """

    identity_name: IdentityName
    params: RateParams
    max_abs_error: float
    terms_used: int
    tolerance: float
    t_grid: Tuple[float, ...] = ()
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        # numpy-скаляры приводятся к float, иначе json.dumps не примет отчет
        object.__setattr__(self, "max_abs_error", float(self.max_abs_error))
        if self.terms_used < 1:
            raise ValidationError(f"terms_used must be >= 1, got {self.terms_used}")
        if not self.max_abs_error >= 0.0:
            raise ValidationError(f"max_abs_error must be non-negative, got {self.max_abs_error}")

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_error <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "identity_name": self.identity_name.value,
            "lambda_B": self.params.lambda_B,
            "epsilon": self.params.epsilon,
            "t_grid": list(self.t_grid),
            "max_abs_error": self.max_abs_error,
            "terms_used": self.terms_used,
            "tolerance": self.tolerance,
            "pass": self.passed,
            **self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _check_tolerance(tol: float) -> float:
    tol = float(tol)
    if not math.isfinite(tol) or tol <= 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    return tol


def _check_grid(t_grid) -> Tuple[float, ...]:
    grid = np.asarray(t_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValidationError("time grid must be a non-empty one-dimensional sequence")
    if np.any(np.isnan(grid)) or np.any(grid < 0.0):
        raise DomainError("time grid must hold non-negative times")
    return tuple(grid.tolist())


def verify_beta_series(epsilon: float, tol: float = DEFAULT_TOLERANCE) -> IdentityReport:
    """
    Σ_{i=1..M} ε^i против ε/(1 - ε).

    M - наименьшее число членов с хвостом ε^(M+1)/(1 - ε) < tol.

    Raises:
        DomainError: Если ε не лежит строго внутри (0, 1)
    """
    tol = _check_tolerance(tol)
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"beta series is undefined for epsilon = {epsilon}; it requires 0 < epsilon < 1")
    terms = geometric_terms(epsilon, tol, tail_factor=1.0 / (1.0 - epsilon), extra=1)
    series = compensated_sum(epsilon ** np.arange(1, terms + 1, dtype=float))
    closed = beta(epsilon)
    return IdentityReport(
        identity_name=IdentityName.BETA_SERIES,
        params=RateParams(lambda_B=1.0, epsilon=epsilon),
        max_abs_error=float(abs(series - closed)),
        terms_used=terms,
        tolerance=tol,
        details={"series_value": series, "closed_value": closed},
    )


def _tau_terms(epsilon: float, tol: float) -> int:
    """Наименьшее M с хвостом ε^M·(M + 1/(1 - ε)) < tol (в единицах W)."""
    if epsilon == 0.0:
        return 1
    terms = max(1, math.ceil(math.log(tol) / math.log(epsilon)))
    while epsilon**terms * (terms + 1.0 / (1.0 - epsilon)) >= tol:
        terms += 1
    return terms


def verify_tau_series(params: RateParams, tol: float = DEFAULT_TOLERANCE) -> IdentityReport:
    """
    Среднее время распада по классам ветвей Σ (N_i/N)·W_i против τ_A = W/(1 - ε).

    При ε = 0 ряд состоит из одного члена W и совпадает с τ_A точно.
    """
    tol = _check_tolerance(tol)
    epsilon = params.epsilon
    terms = _tau_terms(epsilon, tol / 2.0)
    index = np.arange(1, terms + 1, dtype=float)
    series = compensated_sum(geometric_weights(epsilon, terms) * index)
    closed = 1.0 / (1.0 - epsilon)
    return IdentityReport(
        identity_name=IdentityName.TAU_A_SERIES,
        params=params,
        max_abs_error=float(abs(series - closed)),
        terms_used=terms,
        tolerance=tol,
        details={"series_value": series * params.W, "closed_value": params.tau_A},
    )


def verify_fA_series(params: RateParams, t_grid, tol: float = DEFAULT_TOLERANCE) -> IdentityReport:
    """
    Взвешенная сумма плотностей Эрланга Σ (1-ε)ε^(i-1)·f_i(t) против λ_A·e^(-λ_A t).

    Каждый член не больше (1-ε)ε^(i-1)·λ_B, поэтому хвост после M членов
    ограничен ε^M (в единицах λ_B).
    """
    tol = _check_tolerance(tol)
    grid = _check_grid(t_grid)
    epsilon = params.epsilon
    terms = geometric_terms(epsilon, tol / 2.0)
    weights = geometric_weights(epsilon, terms)
    closed = np.asarray(mixture_pdf(params, np.array(grid))) / params.lambda_B

    errors = []
    for t, expected in zip(grid, closed):
        series = compensated_sum(weights * poisson_terms(params.lambda_B * t, terms))
        errors.append(abs(series - expected))
    return IdentityReport(
        identity_name=IdentityName.F_A_SERIES,
        params=params,
        max_abs_error=float(max(errors)),
        terms_used=terms,
        tolerance=tol,
        t_grid=grid,
    )


def verify_SA_column_sum(params: RateParams, t_grid, tol: float = DEFAULT_TOLERANCE) -> IdentityReport:
    """
    Двойной ряд Σ_i (1-ε)ε^(i-1)·Σ_{n<=i} e^(-u)u^(n-1)/(n-1)! против e^(-(1-ε)u), u = λ_B·t.

    Ряд суммируется тремя способами на одном и том же треугольнике i <= M:
    - по строкам (внешняя сумма по ветвям)
    - по столбцам (внешняя сумма по n, вес - хвост геометрического ряда)
    - в свернутом виде e^(-u)·Σ_k (εu)^k/k!
    Ошибка отчета - наибольшее отклонение любого способа от замкнутой формы,
    в details дополнительно сохраняется наибольший разрыв строк и столбцов.
    """
    tol = _check_tolerance(tol)
    grid = _check_grid(t_grid)
    epsilon = params.epsilon
    terms = geometric_terms(epsilon, tol / 2.0)
    weights = geometric_weights(epsilon, terms)
    # Σ_{i>=n} w_i в пределах треугольника
    column_weights = np.cumsum(weights[::-1])[::-1]
    k = np.arange(terms, dtype=float)
    closed = np.asarray(mixture_survival(params, np.array(grid)))

    errors, gaps = [], []
    for t, expected in zip(grid, closed):
        u = params.lambda_B * t
        pmf = poisson_terms(u, terms)
        by_rows = compensated_sum(weights * np.cumsum(pmf))
        by_columns = compensated_sum(pmf * column_weights)
        collapsed = compensated_sum(np.exp(-u + special.xlogy(k, epsilon * u) - special.gammaln(k + 1.0)))
        errors.append(max(abs(by_rows - expected), abs(by_columns - expected), abs(collapsed - expected)))
        gaps.append(abs(by_rows - by_columns))
    return IdentityReport(
        identity_name=IdentityName.S_A_COLUMN_SUM,
        params=params,
        max_abs_error=float(max(errors)),
        terms_used=terms,
        tolerance=tol,
        t_grid=grid,
        details={"row_column_gap": float(max(gaps))},
    )


def verify_pdf_normalization(spec: ErlangSpec, tol: float = DEFAULT_QUAD_TOLERANCE) -> IdentityReport:
    """
    Нормировка плотности Эрланга: ∫_0^T* f_i dt + S_i(T*) = 1, T* = (i + 10√i)/λ.

    Интеграл считается адаптивной квадратурой, хвост добавляется аналитически.
    terms_used - число вычислений подынтегральной функции.
    """
    tol = _check_tolerance(tol)
    horizon = (spec.shape + 10.0 * math.sqrt(spec.shape)) / spec.rate
    mode = (spec.shape - 1) / spec.rate
    points = [mode] if 0.0 < mode < horizon else None
    result = integrate.quad(
        lambda t: erlang_pdf(spec, t),
        0.0,
        horizon,
        points=points,
        epsabs=tol / 10.0,
        epsrel=1e-12,
        limit=QUAD_LIMIT,
        full_output=1,
    )
    # При предупреждении quad добавляет четвертый элемент с сообщением
    integral, info = result[0], result[2]
    total = integral + erlang_survival(spec, horizon)
    return IdentityReport(
        identity_name=IdentityName.PDF_NORMALIZATION,
        params=RateParams(lambda_B=spec.rate),
        max_abs_error=float(abs(total - 1.0)),
        terms_used=int(info["neval"]),
        tolerance=tol,
        details={"shape": spec.shape, "horizon": horizon, "total": float(total)},
    )


@dataclass
class IdentitySuite:
    """Отчеты всех проверок и уведомления о пропущенных (ε вне области тождества)."""

    reports: List[IdentityReport] = field(default_factory=list)
    notices: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(report.passed for report in self.reports)

    @property
    def failures(self) -> List[IdentityReport]:
        return [report for report in self.reports if not report.passed]


def run_identity_suite(epsilons: Iterable[float] = DEFAULT_EPSILONS,
                       lambdas: Iterable[float] = DEFAULT_LAMBDAS,
                       tol: float = DEFAULT_TOLERANCE,
                       quad_tol: float = DEFAULT_QUAD_TOLERANCE,
                       scaled_times: Sequence[float] = DEFAULT_SCALED_TIMES,
                       shapes: Optional[Sequence[int]] = DEFAULT_SHAPES,
                       logger=None) -> IdentitySuite:
    """
    Все проверки по решетке параметров.

    Для каждой пары (ε, λ_B) строится сетка t = u/λ_B по безразмерным
    временам u. Тождество β проверяется один раз на ε; при ε = 0 вместо
    отчета добавляется уведомление о пропуске. Нормировка плотностей
    проверяется для форм shapes при каждой λ_B.
    """
    epsilons = [float(e) for e in epsilons]
    lambdas = [check_rate(lam, "lambda_B") for lam in lambdas]
    suite = IdentitySuite()

    for epsilon in epsilons:
        if epsilon == 0.0:
            suite.notices.append("beta_series skipped for epsilon=0: the identity requires 0 < epsilon < 1")
        else:
            suite.reports.append(verify_beta_series(epsilon, tol))
        for lambda_B in lambdas:
            params = RateParams(lambda_B, epsilon)
            grid = [u / lambda_B for u in scaled_times]
            suite.reports.append(verify_tau_series(params, tol))
            suite.reports.append(verify_fA_series(params, grid, tol))
            suite.reports.append(verify_SA_column_sum(params, grid, tol))

    for lambda_B in lambdas:
        for shape in shapes or ():
            suite.reports.append(verify_pdf_normalization(ErlangSpec(shape, lambda_B), quad_tol))

    if logger is not None:
        logger.info(
            f"Identity suite: {len(suite.reports)} checks, {len(suite.failures)} failed, "
            f"{len(suite.notices)} skipped"
        )
        for report in suite.failures:
            logger.debug(f"Identity failure: {report.to_json()}")
    return suite
