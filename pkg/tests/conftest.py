import os

import pytest
from hypothesis import HealthCheck, settings

from auxcheck.constants import ENV_STATE_CAP, ENV_WORKERS
from auxcheck.utils.config_utils import ModelConfig
from auxcheck.values import int_range

settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("dev", max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture(autouse=True)
def no_env_limits(monkeypatch):
    """Tests never pick up a state cap or worker count from the environment or a .env file."""
    monkeypatch.delenv(ENV_STATE_CAP, raising=False)
    monkeypatch.delenv(ENV_WORKERS, raising=False)
    monkeypatch.setattr("auxcheck.utils.config_utils.load_dotenv", lambda: False)
    yield


@pytest.fixture
def int_cfg():
    yield ModelConfig(substitutions={"Int": int_range(-1, 1)})


@pytest.fixture
def snapshot_cfg():
    """One reader, one writer, two register values."""
    yield ModelConfig(
        substitutions={"Readers": frozenset({"r1"}), "Writers": frozenset({"w1"}), "RegVals": int_range(0, 1)},
        parameters={"InitRegVal": 0},
        constraint={"MaxRStateLen": 2, "MaxWrites": 1},
    )
