import os
import sys

import numpy as np
import pytest

# garante que o root do repo está no PYTHONPATH
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from scripts.extremes.streams import trial_rng  # noqa: E402


@pytest.fixture
def rng():
    return trial_rng(20240601, 0, 0)
