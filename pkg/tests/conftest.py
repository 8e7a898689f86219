import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from specblock import BlockOperatorMatrix


@pytest.fixture
def m3():
    """The cubic fixture: A = diag(2, 10), B = (1, 1)^T, C = (-1)."""
    return BlockOperatorMatrix(A=np.diag([2.0, 10.0]), B=[[1.0], [1.0]],
                               C=[[-1.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
