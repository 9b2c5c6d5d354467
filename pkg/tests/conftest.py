import os

# numba fixes its pool size at import; allow genuinely different thread counts in tests
os.environ.setdefault("NUMBA_NUM_THREADS", "4")

import pytest  # noqa: E402
from hypothesis import settings  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def small_settings():
    from semantic_dds.reactive_channel import SimulationSettings

    return SimulationSettings(trials=4000, seed=7)
