import sys
from pathlib import Path

import numpy as np
import pytest


@pytest.fixture(scope="session", autouse=True)
def ensure_path_setup():
    """Add the project root to sys.path to ensure proper imports."""
    root_dir = Path(__file__).parent.parent
    if str(root_dir) not in sys.path:
        sys.path.insert(0, str(root_dir))


@pytest.fixture
def rng():
    """A fixed-seed generator for tests that draw directly."""
    return np.random.default_rng(20240613)


@pytest.fixture
def gamma_rep():
    from idpath.levy import GammaRep

    return GammaRep(a=1.0, beta=1.0)


@pytest.fixture
def symmetric_stable():
    """Symmetric α=1.2 stable law on R with unit weight at each of ±1."""
    from idpath.levy import StableRep

    return StableRep(alpha=1.2, atoms=[([1.0], 1.0), ([-1.0], 1.0)])


@pytest.fixture
def exp_cp():
    from idpath.levy import ExponentialCPRep

    return ExponentialCPRep()
