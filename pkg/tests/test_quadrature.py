import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summability.quadrature import (
    QuadratureError,
    adaptive_integrate,
    exp_sum_from_grid,
    exp_sum_to_grid,
    panel_rule,
)


def test_adaptive_polynomial_exact():
    val, err = adaptive_integrate(lambda x: x ** 5 - 3 * x ** 2, [0.0, 2.0], tol=1e-12)
    assert val == pytest.approx(64 / 6 - 8, abs=1e-12)
    assert err <= 1e-12


def test_adaptive_sqrt_singularity():
    val, _ = adaptive_integrate(lambda x: 1 / np.sqrt(x), [0.0, 1.0], tol=1e-10)
    assert val == pytest.approx(2.0, abs=1e-9)


def test_adaptive_segments_sum_to_total():
    edges = np.array([0.0, 0.5, 1.0, 3.0])
    seg, _ = adaptive_integrate(np.exp, edges, tol=1e-12, segment_ids=np.arange(3))
    assert np.allclose(seg, np.exp(edges[1:]) - np.exp(edges[:-1]), atol=1e-12)


def test_adaptive_reports_failure_with_estimate():
    with pytest.raises(QuadratureError) as info:
        adaptive_integrate(lambda x: np.sin(1 / x) / x ** 1.5, [0.0, 1.0], tol=1e-14, max_depth=12)
    assert info.value.error > 0


def test_panel_rule_integrates_smooth_and_graded():
    x, w = panel_rule([-1.0, 1.0], 0.1)
    assert np.sum(w * np.cos(x)) == pytest.approx(2 * math.sin(1.0), abs=1e-14)
    x, w = panel_rule([0.0, 1.0], 0.1, graded=[0.0], grade_floor=1e-14)
    assert np.sum(w * x ** -0.5) == pytest.approx(2.0, abs=1e-6)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 40), st.integers(1, 30), st.floats(-3.0, 3.0))
def test_exp_sums_match_direct(m, count, start):
    rng = np.random.default_rng(m * 1000 + count)
    x = rng.uniform(-4, 4, m)
    v = rng.normal(size=m) + 1j * rng.normal(size=m)
    grid = start + 0.25 * np.arange(count)
    direct = np.exp(1j * np.outer(grid, x)) @ v
    assert np.allclose(exp_sum_to_grid(x, v, start, 0.25, count), direct, atol=1e-11)
    back = exp_sum_from_grid(v[:count] if count <= m else np.resize(v, count), start, 0.25, x)
    c = v[:count] if count <= m else np.resize(v, count)
    assert np.allclose(back, np.exp(1j * np.outer(x, grid)) @ c, atol=1e-11)
