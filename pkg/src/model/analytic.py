"""
Замкнутые формулы модели ветвления: законы выживания, плотности и тождества.

Все функции чистые и не хранят состояние. Аргумент времени t может быть
скаляром (возвращается float) или массивом numpy (возвращается массив).
Время везде входит только через произведение λ·t.
"""
# Импорт необходимых библиотек
import math                  # Скалярные логарифмы и константы

import numpy as np           # Векторные вычисления на сетках времени
from scipy import special  # gammaln, xlogy и регуляризованные неполные гамма-функции

from utils.errors import DomainError

from .params import (
    AmplitudeVector,
    ErlangSpec,
    RateParams,
    check_branch_index,
    check_epsilon,
    check_rate,
)


def _as_time(t):
    """Приведение t к массиву float с проверкой t >= 0."""
    times = np.asarray(t, dtype=float)
    if np.any(np.isnan(times)) or np.any(times < 0.0):
        raise DomainError(f"time must be non-negative, got {t!r}")
    return times


def _unwrap(values, t):
    """Скаляр на входе - float на выходе."""
    if np.ndim(t) == 0:
        return float(values)
    return values


def exp_survival(lam: float, t):
    """
    Экспоненциальная функция выживания обычной теории, e^(-λt).

    Args:
        lam (float): Скорость перехода λ > 0
        t: Время (или массив времен) t >= 0
    """
    lam = check_rate(lam, "lambda")
    times = _as_time(t)
    return _unwrap(np.exp(-lam * times), t)


def golden_rule_rate(matrix_element_sq_density: float, hbar: float = 1.0) -> float:
    """
    Скорость перехода по золотому правилу: (2π/ħ)·|V_eg|²·ρ(E).

    Матричный элемент и плотность состояний не вычисляются, на вход подается
    готовое произведение |V_eg(E)|²·ρ(E).
    """
    product = check_rate(matrix_element_sq_density, "matrix_element_sq_density")
    hbar = check_rate(hbar, "hbar")
    return 2.0 * math.pi / hbar * product


def erlang_pdf(spec: ErlangSpec, t):
    """
    Плотность времени распада на ветви B_i: λe^(-λt)(λt)^(i-1)/(i-1)!.

    Считается в логарифмах через log-gamma, поэтому форма i до 10^4 и выше
    не переполняет факториал.
    """
    times = _as_time(t)
    u = spec.rate * times
    log_pdf = math.log(spec.rate) - u + special.xlogy(spec.shape - 1, u) - special.gammaln(spec.shape)
    return _unwrap(np.exp(log_pdf), t)


def erlang_cdf(spec: ErlangSpec, t):
    """Функция распределения F_i(λt) = 1 - S_i(λt) (регуляризованная нижняя неполная гамма)."""
    times = _as_time(t)
    return _unwrap(special.gammainc(spec.shape, spec.rate * times), t)


def erlang_survival(spec: ErlangSpec, t):
    """
    Функция выживания на ветви B_i: e^(-λt)·Σ_{n=1..i}(λt)^(n-1)/(n-1)!.

    Частичная сумма ряда Пуассона совпадает с регуляризованной верхней
    неполной гамма-функцией Q(i, λt).
    """
    times = _as_time(t)
    return _unwrap(special.gammaincc(spec.shape, spec.rate * times), t)


def erlang_hazard(spec: ErlangSpec, t):
    """
    Интенсивность распада на ветви B_i: f_i/S_i.

    Только для i = 1 она постоянна; при i > 1 растет от 0 к λ.
    """
    times = _as_time(t)
    pdf = np.asarray(erlang_pdf(spec, times))
    survival = np.asarray(erlang_survival(spec, times))
    with np.errstate(invalid="ignore", divide="ignore"):
        hazard = np.where(survival > 0.0, pdf / np.where(survival > 0.0, survival, 1.0), spec.rate)
    return _unwrap(hazard, t)


def branch_weight(epsilon: float, i: int) -> float:
    """
    Доля наблюдателей в классе ветвей C_i: N_i/N = (1 - ε)·ε^(i-1).

    При ε = 0 вся масса в классе 1.
    """
    epsilon = check_epsilon(epsilon)
    i = check_branch_index(i)
    return (1.0 - epsilon) * epsilon ** (i - 1)


def apparent_lifetime(params: RateParams) -> float:
    """Кажущееся время жизни τ_A = W/(1 - ε)."""
    return params.tau_A


def mixture_pdf(params: RateParams, t):
    """Взвешенная плотность времен распада f_A = λ_A·e^(-λ_A t)."""
    times = _as_time(t)
    lambda_A = params.lambda_A
    return _unwrap(lambda_A * np.exp(-lambda_A * times), t)


def mixture_survival(params: RateParams, t):
    """Кажущаяся функция выживания S_A = e^(-(1-ε)λ_B t)."""
    times = _as_time(t)
    return _unwrap(np.exp(-params.lambda_A * times), t)


def mixture_hazard(params: RateParams, t):
    """Кажущаяся интенсивность распада: постоянная λ_A при любом t."""
    times = _as_time(t)
    return _unwrap(np.full_like(times, params.lambda_A), t)


def expected_branch_count(params: RateParams, t):
    """Ожидаемое число ветвей к моменту t во внешнем взгляде: B_0 плюс λ_B·t ветвей основного состояния."""
    times = _as_time(t)
    return _unwrap(1.0 + params.lambda_B * times, t)


def beta(epsilon: float) -> float:
    """
    β = ε/(1 - ε) = Σ_{i>=1} ε^i.

    Raises:
        DomainError: Если ε не лежит строго внутри (0, 1)
    """
    epsilon = float(epsilon)
    if not 0.0 < epsilon < 1.0:
        raise DomainError(f"beta requires 0 < epsilon < 1, got {epsilon}")
    return epsilon / (1.0 - epsilon)


def born_weights(amps) -> list:
    """
    Вероятности ветвей по правилу Борна: |a_j|² для каждого коэффициента.

    Args:
        amps: AmplitudeVector или последовательность комплексных чисел

    Raises:
        ValidationError: Если вектор не нормирован (сообщение содержит дефицит нормы)
    """
    if not isinstance(amps, AmplitudeVector):
        amps = AmplitudeVector(amps)
    return [abs(a) ** 2 for a in amps.amplitudes]
