import math
import warnings

import pytest
from hypothesis import settings

from v2vsim.phase import SPEED_OF_LIGHT

warnings.filterwarnings("ignore", message=".*TBB threading layer.*")

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FC = 2.48e9
LAM = SPEED_OF_LIGHT / FC


@pytest.fixture
def lam():
    return LAM


@pytest.fixture
def report(capsys):
    """Print one PASS/FAIL line that survives output capturing."""

    def emit(label, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}")
        return ok

    return emit


def circle(n=360):
    return [2 * math.pi * k / n - math.pi for k in range(n)]
