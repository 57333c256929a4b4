# Общие настройки тестов: без файлов логов, консоль только для предупреждений
import os

os.environ.setdefault("DECAYLAB_LOG_TO_FILE", "false")
os.environ.setdefault("DECAYLAB_LOG_LEVEL", "WARNING")

import pytest  # noqa: E402

from model.params import RateParams  # noqa: E402
from sim.driver import SampleRequest, simulate_sample  # noqa: E402
from sim.records import SamplerTag  # noqa: E402


@pytest.fixture
def half_params():
    return RateParams(lambda_B=1.0, epsilon=0.5)


@pytest.fixture
def small_dataset(half_params):
    """10^4 частиц с ε = 0.5, seed 42."""
    return simulate_sample(SampleRequest(half_params, 10_000, 42, SamplerTag.DIRECT))
