import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle_values import DIRICHLET_HALF_L1
from summability import (
    TrigPolynomial,
    catalog_family,
    conjugate_dirichlet_kernel,
    conjugate_fejer_kernel,
    dirichlet_kernel,
    fejer_kernel,
    identity_residual,
    kernel_of,
    l1_norm,
    sidon_bound_check,
)


def direct_dirichlet(n, t):
    k = np.arange(1, n + 1)
    return 0.5 + np.cos(np.multiply.outer(t, k)).sum(-1)


def direct_fejer(n, t):
    k = np.arange(1, n + 1)
    return 0.5 + ((1 - k / (n + 1)) * np.cos(np.multiply.outer(t, k))).sum(-1)


def test_dirichlet_examples():
    assert dirichlet_kernel(5, 0.0) == pytest.approx(5.5)
    assert dirichlet_kernel(5, 2 * math.pi) == pytest.approx(5.5)
    assert dirichlet_kernel(2, math.pi / 2) == pytest.approx(-0.5, abs=1e-14)
    t = np.random.default_rng(1).uniform(-math.pi, math.pi, 200)
    assert np.allclose(dirichlet_kernel(64, t), direct_dirichlet(64, t), atol=1e-10)


def test_fejer_examples():
    assert fejer_kernel(3, 0.0) == pytest.approx(2.0)
    assert fejer_kernel(1, math.pi) == pytest.approx(0.0, abs=1e-15)
    t = np.random.default_rng(2).uniform(-math.pi, math.pi, 200)
    assert np.allclose(fejer_kernel(32, t), direct_fejer(32, t), atol=1e-10)


def test_conjugate_kernels_are_defining_sums():
    t = np.linspace(-3, 3, 41)
    k = np.arange(1, 7)
    dt = np.sin(np.multiply.outer(t, k)).sum(-1)
    assert np.allclose(conjugate_dirichlet_kernel(6, t), dt, atol=1e-13)
    partial = sum(np.sin(np.multiply.outer(t, np.arange(1, m + 1))).sum(-1) for m in range(1, 7))
    assert np.allclose(conjugate_fejer_kernel(6, t), partial / 7, atol=1e-13)


def test_fejer_nonnegative_random_pairs():
    rng = np.random.default_rng(3)
    ns = rng.integers(0, 129, 10_000)
    ts = rng.uniform(-math.pi, math.pi, 10_000)
    vals = np.array([fejer_kernel(int(n), t) for n, t in zip(ns, ts)])
    assert vals.min() >= -1e-12


def test_identity_lemma1_zero_at_origin_and_small():
    # corrected orientation: exact to rounding
    for n in (8, 16, 32, 64):
        assert identity_residual("lemma1", n) <= 1e-10


def test_identity_lemma1_as_printed_grows():
    r = [identity_residual("lemma1", n, as_printed=True) for n in (8, 16, 32, 64)]
    assert all(b > a for a, b in zip(r, r[1:]))
    assert r[0] > 1.0


@pytest.mark.parametrize("tag", ["remark1_1", "remark1_2", "remark1_3"])
def test_remark_identities_exact(tag):
    for n in (1, 2, 7, 64):
        assert identity_residual(tag, n) <= 1e-10


def test_remark1_2_random_points():
    t = np.random.default_rng(4).uniform(-math.pi, math.pi, 5)
    k0 = np.arange(0, 2)
    for s in t:
        lhs = (1 - np.exp(-1j * s)) * 0.5 * np.exp(1j * s)
        rhs = 1.5 * np.exp(1j * k0 * s).sum() - 2 * ((1 - k0 / 2) * np.exp(1j * k0 * s)).sum()
        assert abs(lhs - rhs) <= 1e-12
    assert identity_residual("remark1_2", 1) <= 1e-12


def test_identity_argument_errors():
    with pytest.raises(ValueError):
        identity_residual("lemma9", 4)
    with pytest.raises(ValueError):
        identity_residual("lemma1", 0)
    with pytest.raises(ValueError):
        identity_residual("lemma1", 4, grid=16)


def test_trig_polynomial_basics():
    p = TrigPolynomial.from_mapping({-1: 0.5, 0: 1.0, 1: 0.5})
    t = np.linspace(-3, 3, 13)
    assert np.allclose(p(t), 1 + np.cos(t))
    assert p.is_real()
    assert np.allclose(p.derivative()(t), -np.sin(t))
    assert np.allclose(p.antiderivative(t), t + np.sin(t))
    with pytest.raises(ValueError):
        TrigPolynomial(np.ones(4))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 300), st.integers(0, 2 ** 31))
def test_trig_polynomial_eval_matches_direct(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=2 * n + 1) + 1j * rng.normal(size=2 * n + 1)
    p = TrigPolynomial(c)
    t = rng.uniform(-10, 10, 50)
    direct = np.exp(1j * np.multiply.outer(t, np.arange(-n, n + 1))) @ c
    assert np.allclose(p(t), direct, atol=1e-10 * max(1, np.abs(c).sum()))


def test_l1_norm_examples():
    assert l1_norm(TrigPolynomial(np.array([1.0]))) == pytest.approx(1.0)
    d1 = kernel_of(catalog_family("dirichlet"), 1)
    assert l1_norm(d1) == pytest.approx(1 / 3 + 2 * math.sqrt(3) / math.pi, abs=1e-12)
    for n in (1, 5, 40, 300):
        assert l1_norm(kernel_of(catalog_family("fejer"), n)) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("n", [4, 16, 32, 64, 128])
def test_l1_norm_dirichlet_frozen_oracle(n):
    p = kernel_of(catalog_family("dirichlet"), n)
    assert l1_norm(p) == pytest.approx(2 * DIRICHLET_HALF_L1[n], abs=1e-10)


def test_l1_norm_complex_polynomial():
    p = TrigPolynomial.from_mapping({3: 1.0})
    assert l1_norm(p) == pytest.approx(1.0, abs=1e-10)
    q = TrigPolynomial.from_mapping({0: 1.0, 1: 1.0})      # |1 + e^{it}| = 2|cos(t/2)|
    assert l1_norm(q) == pytest.approx(4 / math.pi, abs=1e-9)


def test_signed_mean_equals_zeroth_coefficient():
    for n in (1, 8, 32):
        for fam in ("dirichlet", "fejer"):
            p = kernel_of(catalog_family(fam), n)
            mean = (p.antiderivative(math.pi) - p.antiderivative(-math.pi)) / (2 * math.pi)
            assert mean == pytest.approx(p.coefficient(0).real, abs=1e-8)


def test_lebesgue_constant_growth():
    ns = np.array([16, 32, 64, 128])
    vals = [l1_norm(kernel_of(catalog_family("dirichlet"), int(n))) for n in ns]
    b, _ = np.polyfit(np.log(ns), vals, 1)
    assert abs(b - 4 / math.pi ** 2) <= 0.15 * 4 / math.pi ** 2


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 64), st.integers(0, 2 ** 31))
def test_l1_norm_dominates_coefficients(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=2 * n + 1)
    c = c + c[::-1]
    if not np.any(c):
        return
    p = TrigPolynomial(c)
    v = l1_norm(p)
    assert v >= np.max(np.abs(c)) - 1e-9
    assert v <= np.sum(np.abs(c)) + 1e-9


def test_sidon_examples():
    r = sidon_bound_check(TrigPolynomial(np.array([1.0])))
    assert r.lhs == pytest.approx(2 * math.pi)
    assert r.rhs_sum == pytest.approx(1.0)
    assert r.fitted_constant == pytest.approx(2 * math.pi)
    assert r.verdict
    d = sidon_bound_check(TrigPolynomial.from_mapping({1: 1.0}), "dyadic")
    assert d.rhs_sum == pytest.approx(1.0)
    assert d.lhs == pytest.approx(2 * math.pi, abs=1e-9)


def test_sidon_dirichlet_constants_bounded_below():
    cs = [sidon_bound_check(kernel_of(catalog_family("dirichlet"), n)).fitted_constant
          for n in (4, 16, 64)]
    c = min(cs)
    assert c > 1.0
    for n in (4, 16, 64):
        assert sidon_bound_check(kernel_of(catalog_family("dirichlet"), n), constant=c).verdict


def test_sidon_errors():
    with pytest.raises(ValueError):
        sidon_bound_check(TrigPolynomial(np.zeros(3)))
    with pytest.raises(ValueError):
        sidon_bound_check(TrigPolynomial(np.ones(3)), variant="hardy")
