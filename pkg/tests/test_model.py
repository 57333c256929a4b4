import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from model import (
    AmplitudeVector,
    ErlangSpec,
    RateParams,
    apparent_lifetime,
    beta,
    born_weights,
    branch_weight,
    erlang_cdf,
    erlang_hazard,
    erlang_pdf,
    erlang_survival,
    exp_survival,
    expected_branch_count,
    golden_rule_rate,
    mixture_hazard,
    mixture_pdf,
    mixture_survival,
)
from utils.errors import DomainError, ValidationError

EPSILONS = (0.01, 0.1, 0.5, 0.9, 0.99)


class TestRateParams:
    def test_derived_quantities(self):
        params = RateParams(lambda_B=2.0, epsilon=0.5)
        assert params.lambda_A == 1.0
        assert params.W == 0.5
        assert params.tau_A == 1.0
        assert params.branch_waiting_time(3) == 1.5

    @pytest.mark.parametrize("epsilon", (0.0,) + EPSILONS)
    def test_lifetime_times_rate_is_one(self, epsilon):
        params = RateParams(lambda_B=3.7, epsilon=epsilon)
        assert params.tau_A * params.lambda_A == pytest.approx(1.0, rel=1e-15)

    def test_epsilon_one_rejected_with_reason(self):
        with pytest.raises(DomainError, match="no decay"):
            RateParams(lambda_B=1.0, epsilon=1.0)

    @pytest.mark.parametrize("lambda_B", [0.0, -1.0, math.inf, math.nan])
    def test_invalid_rate(self, lambda_B):
        with pytest.raises(DomainError):
            RateParams(lambda_B=lambda_B)

    def test_negative_epsilon(self):
        with pytest.raises(DomainError):
            RateParams(lambda_B=1.0, epsilon=-0.1)

    def test_interior_flag(self):
        assert not RateParams(1.0, 0.0).is_strict_interior
        assert RateParams(1.0, 0.3).is_strict_interior

    def test_from_rates(self):
        params = RateParams.from_rates(lambda_A=0.25, lambda_B=1.0)
        assert params.epsilon == 0.75

    def test_erlang_spec(self):
        spec = ErlangSpec(4, 2.0)
        assert spec.mean == 2.0
        assert spec.variance == 1.0
        with pytest.raises(DomainError):
            ErlangSpec(0, 1.0)
        with pytest.raises(DomainError):
            ErlangSpec(2, 0.0)


class TestClosedForms:
    def test_exp_survival(self):
        assert exp_survival(1.0, 0.0) == 1.0
        assert exp_survival(1.0, 1.0) == pytest.approx(0.36787944, abs=1e-8)
        assert exp_survival(2.0, 0.5) == pytest.approx(0.36787944, abs=1e-8)
        with pytest.raises(DomainError):
            exp_survival(1.0, -1.0)
        with pytest.raises(DomainError):
            exp_survival(0.0, 1.0)

    def test_array_input_returns_array(self):
        values = exp_survival(1.0, np.array([0.0, 1.0]))
        assert isinstance(values, np.ndarray)
        assert isinstance(exp_survival(1.0, 1.0), float)

    def test_golden_rule_rate(self):
        assert golden_rule_rate(1.0 / (2.0 * math.pi)) == pytest.approx(1.0)
        assert golden_rule_rate(1.0) == pytest.approx(6.2831853, abs=1e-7)
        assert golden_rule_rate(1.0, hbar=2.0) == pytest.approx(3.1415927, abs=1e-7)
        with pytest.raises(DomainError):
            golden_rule_rate(0.0)

    def test_erlang_pdf(self):
        assert erlang_pdf(ErlangSpec(1, 1.0), 0.0) == 1.0
        assert erlang_pdf(ErlangSpec(2, 1.0), 0.0) == 0.0
        assert erlang_pdf(ErlangSpec(3, 1.0), 2.0) == pytest.approx(0.27067057, abs=1e-8)

    def test_erlang_pdf_large_shape_is_finite(self):
        spec = ErlangSpec(10_000, 1.0)
        value = erlang_pdf(spec, 10_000.0)
        # Вблизи моды плотность ~ 1/sqrt(2π·i)
        assert value == pytest.approx(1.0 / math.sqrt(2.0 * math.pi * 10_000), rel=1e-3)

    def test_erlang_cdf(self):
        assert erlang_cdf(ErlangSpec(1, 1.0), 0.0) == 0.0
        assert erlang_cdf(ErlangSpec(1, 1.0), 1.0) == pytest.approx(0.63212056, abs=1e-8)
        assert erlang_cdf(ErlangSpec(2, 1.0), 1.0) == pytest.approx(0.26424112, abs=1e-8)

    def test_erlang_survival(self):
        assert erlang_survival(ErlangSpec(1, 1.0), 1.0) == pytest.approx(0.36787944, abs=1e-8)
        assert erlang_survival(ErlangSpec(3, 1.0), 1.0) == pytest.approx(0.91969860, abs=1e-8)
        assert erlang_survival(ErlangSpec(5, 1.0), 0.0) == 1.0

    @pytest.mark.parametrize("shape", [1, 2, 7, 50, 400])
    def test_cdf_plus_survival_is_one(self, shape):
        spec = ErlangSpec(shape, 1.3)
        t = np.linspace(0.0, 3.0 * shape, 41)
        assert_allclose(erlang_cdf(spec, t) + erlang_survival(spec, t), 1.0, atol=1e-12)

    @pytest.mark.parametrize("shape", [1, 5, 50])
    def test_quadrature_of_pdf_matches_cdf(self, shape):
        spec = ErlangSpec(shape, 1.0)
        for horizon in (1.0, 10.0, 100.0):
            integral, _ = integrate.quad(lambda t: erlang_pdf(spec, t), 0.0, horizon,
                                         points=[shape - 1.0] if 0 < shape - 1 < horizon else None,
                                         epsabs=1e-12, limit=200)
            assert integral == pytest.approx(erlang_cdf(spec, horizon), abs=1e-8)

    def test_survival_nondecreasing_in_branch(self):
        t = np.linspace(0.0, 6.0, 61)
        curves = np.array([erlang_survival(ErlangSpec(i, 1.0), t) for i in range(1, 8)])
        assert np.all(np.diff(curves, axis=0) >= 0.0)

    def test_survival_strictly_decreasing_in_time(self):
        t = np.linspace(0.0, 20.0, 201)
        assert np.all(np.diff(erlang_survival(ErlangSpec(4, 1.0), t)) < 0.0)

    def test_hazard(self):
        assert_allclose(erlang_hazard(ErlangSpec(1, 2.0), np.array([0.0, 1.0, 5.0])), 2.0)
        hazard = erlang_hazard(ErlangSpec(3, 1.0), np.linspace(0.0, 30.0, 31))
        assert hazard[0] == 0.0
        assert np.all(np.diff(hazard) > 0.0)
        assert hazard[-1] < 1.0

    @pytest.mark.parametrize("scale", [0.5, 2.0, 10.0])
    def test_depends_on_rate_times_time_only(self, scale):
        t = np.linspace(0.0, 5.0, 11)
        spec = ErlangSpec(3, 1.5)
        scaled = ErlangSpec(3, 1.5 * scale)
        assert_allclose(erlang_survival(spec, t), erlang_survival(scaled, t / scale), rtol=1e-13)
        assert_allclose(erlang_cdf(spec, t), erlang_cdf(scaled, t / scale), rtol=1e-13, atol=1e-15)
        assert_allclose(exp_survival(1.5, t), exp_survival(1.5 * scale, t / scale), rtol=1e-13)
        params = RateParams(1.5, 0.3)
        assert_allclose(mixture_survival(params, t), mixture_survival(RateParams(1.5 * scale, 0.3), t / scale),
                        rtol=1e-13)

    @pytest.mark.parametrize("scale", [0.5, 2.0, 10.0])
    def test_density_scales_with_rate(self, scale):
        # f(λs, t/s) = s·f(λ, t)
        t = np.linspace(0.0, 5.0, 11)
        spec = ErlangSpec(3, 1.5)
        assert_allclose(erlang_pdf(ErlangSpec(3, 1.5 * scale), t / scale), scale * erlang_pdf(spec, t),
                        rtol=1e-12, atol=1e-300)
        params = RateParams(1.5, 0.3)
        assert_allclose(mixture_pdf(RateParams(1.5 * scale, 0.3), t / scale), scale * mixture_pdf(params, t),
                        rtol=1e-12)


class TestBranchWeights:
    def test_examples(self):
        assert branch_weight(0.0, 1) == 1.0
        assert branch_weight(0.0, 2) == 0.0
        assert branch_weight(0.5, 1) == 0.5
        assert branch_weight(0.5, 3) == 0.125

    def test_invalid_arguments(self):
        with pytest.raises(DomainError):
            branch_weight(1.0, 1)
        with pytest.raises(DomainError):
            branch_weight(0.5, 0)

    @pytest.mark.parametrize("epsilon", EPSILONS)
    def test_partial_sum_deficit(self, epsilon):
        m = 30
        partial = math.fsum(branch_weight(epsilon, i) for i in range(1, m + 1))
        assert 1.0 - partial == pytest.approx(epsilon**m, rel=1e-9, abs=1e-15)


class TestMixture:
    def test_apparent_lifetime(self):
        assert apparent_lifetime(RateParams(1.0, 0.0)) == 1.0
        assert apparent_lifetime(RateParams(1.0, 0.5)) == 2.0
        assert apparent_lifetime(RateParams(2.0, 0.5)) == 1.0

    def test_mixture_pdf(self):
        assert mixture_pdf(RateParams(1.0, 0.0), 0.0) == 1.0
        assert mixture_pdf(RateParams(1.0, 0.5), 0.0) == 0.5
        assert mixture_pdf(RateParams(1.0, 0.5), 2.0) == pytest.approx(0.18393972, abs=1e-8)

    def test_mixture_survival(self):
        assert mixture_survival(RateParams(3.0, 0.2), 0.0) == 1.0
        assert mixture_survival(RateParams(1.0, 0.5), 2.0) == pytest.approx(0.36787944, abs=1e-8)
        assert mixture_survival(RateParams(1.0, 0.0), 1.0) == pytest.approx(0.36787944, abs=1e-8)

    @pytest.mark.parametrize("epsilon", EPSILONS)
    def test_survival_is_weighted_branch_survival(self, epsilon):
        params = RateParams(1.0, epsilon)
        u = np.array([0.0, 0.1, 1.0, 6.0, 20.0])
        # Хвост ε^m ниже 1e-30, чтобы и при малом S_A относительная ошибка осталась < 1e-12
        m = int(math.ceil(math.log(1e-30) / math.log(epsilon)))
        terms = np.array([
            branch_weight(epsilon, i) * erlang_survival(ErlangSpec(i, 1.0), u) for i in range(1, m + 1)
        ])
        assert_allclose(terms.T.copy().sum(axis=1), mixture_survival(params, u), rtol=1e-12)

    def test_hazard_is_constant(self):
        params = RateParams(2.0, 0.25)
        assert_allclose(mixture_hazard(params, np.linspace(0.0, 10.0, 5)), 1.5)

    def test_expected_branch_count(self):
        assert expected_branch_count(RateParams(2.0, 0.1), 0.0) == 1.0
        assert expected_branch_count(RateParams(2.0, 0.1), 5.0) == 11.0


class TestBeta:
    def test_examples(self):
        assert beta(0.5) == 1.0
        assert beta(0.1) == pytest.approx(0.11111111, abs=1e-8)
        assert beta(1e-12) == pytest.approx(1e-12, rel=1e-9)

    @pytest.mark.parametrize("epsilon", [0.0, 1.0, -0.5])
    def test_outside_open_interval(self, epsilon):
        with pytest.raises(DomainError):
            beta(epsilon)


class TestBornWeights:
    def test_examples(self):
        assert born_weights([1, 0]) == [1.0, 0.0]
        assert_allclose(born_weights([1 / math.sqrt(2), 1 / math.sqrt(2)]), [0.5, 0.5])
        assert_allclose(born_weights(AmplitudeVector([0.6, 0.8j])), [0.36, 0.64])

    def test_unnormalized_reports_deficit(self):
        with pytest.raises(ValidationError, match="deficit"):
            born_weights([0.6, 0.6])

    def test_empty_vector(self):
        with pytest.raises(ValidationError):
            AmplitudeVector([])
