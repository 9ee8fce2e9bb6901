import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from amgreuse.bench import warm_up  # noqa: E402


@pytest.fixture(scope="session", autouse=True)
def _compiled_kernels():
    warm_up()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
