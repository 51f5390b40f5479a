import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from ulrichcert.pipeline import PipelineConfig, construct

settings.register_profile("default", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE_SEEDS = list(range(10))
REFERENCE_SEED = 1

_RUNS = {}


def pipeline_run(seed, prime=997):
    """construct() for (prime, seed), computed once per test session."""
    key = (prime, seed)
    if key not in _RUNS:
        _RUNS[key] = construct(PipelineConfig(prime=prime, seed=seed))
    return _RUNS[key]


@pytest.fixture(scope="session")
def reference_run():
    return pipeline_run(REFERENCE_SEED)
