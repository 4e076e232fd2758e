import mpmath
import pytest


@pytest.fixture(autouse=True)
def _precision():
    # every test starts from the same working precision
    with mpmath.workdps(50):
        yield


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))
