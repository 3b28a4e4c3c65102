import math
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from summability import PeriodicFunction  # noqa: E402

CRITERIA = {}


def record_criterion(number, passed, detail):
    CRITERIA[number] = (bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        passed, detail = CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")


def trig(coeffs, label):
    """PeriodicFunction for sum_k c_k e^{ikt} with an exact primitive."""
    ks = np.array(sorted(coeffs))
    cs = np.array([coeffs[k] for k in ks], dtype=complex)
    real = all(abs(coeffs.get(-k, 0) - np.conj(coeffs[k])) < 1e-15 for k in coeffs)

    def ev(t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * np.multiply.outer(t, ks)) @ cs

    def prim(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape, dtype=complex)
        for k, c in zip(ks, cs):
            out = out + (c * t if k == 0 else c * (np.exp(1j * k * t) - 1) / (1j * k))
        return out

    return PeriodicFunction(ev, label=label, real=real, primitive=prim,
                            max_frequency=float(np.max(np.abs(ks))))


@pytest.fixture
def cos_sin2():
    return PeriodicFunction(lambda t: np.cos(t) + np.sin(2 * t), label="test:cos+sin2",
                            primitive=lambda t: np.sin(t) + (1 - np.cos(2 * t)) / 2)


@pytest.fixture
def sign_fn():
    return PeriodicFunction(np.sign, piece_breaks=(0.0, math.pi), label="test:sign",
                            primitive=np.abs)
