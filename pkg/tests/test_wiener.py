import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from summability import (
    MultiplierFunction,
    a_density,
    catalog_family,
    kernel_of,
    l1_norm,
    lemma_quantities,
    multiplier_function,
    phi_n_family_norms,
    theorem2_report,
)
from summability.multipliers import phi_family


def scaled(phi, lam):
    return MultiplierFunction(lambda x: phi(lam * np.asarray(x, dtype=float)),
                              phi.support_radius / lam, phi.value_at_zero, None,
                              tuple(p / lam for p in phi.nonsmooth_points),
                              f"{phi.label}[x{lam:g}]", phi.integrable, phi.real)


@pytest.fixture(scope="module")
def reports():
    out = {}
    for key, name, kw in (("gaussian", "gaussian", {}), ("riesz22", "riesz", dict(alpha=2, beta=2)),
                          ("fejer", "fejer", {}), ("abel", "abel", {})):
        out[key] = theorem2_report(multiplier_function(name, **kw))
    return out


# -- a_density --

def test_density_abel_matches_cauchy():
    rep = a_density(multiplier_function("abel"))
    y = np.array([0.0, 0.5, 3.0, 20.0])
    got = np.interp(y, rep.y, rep.density.real)
    assert np.allclose(got, 1 / (math.pi * (1 + y ** 2)), atol=1e-8)
    assert rep.l1_norm_estimate == pytest.approx(1.0, abs=1e-6)


def test_density_fejer_matches_fejer_transform():
    rep = a_density(multiplier_function("fejer"))
    y = np.array([0.1, 1.0, 7.3])
    want = (np.sin(y / 2) / (y / 2)) ** 2 / (2 * math.pi)
    assert np.allclose(np.interp(y, rep.y, rep.density.real), want, atol=1e-8)
    assert np.all(rep.density.real >= -1e-12)


def test_density_sinc_is_half_box():
    rep = a_density(multiplier_function("sinc"))
    assert rep.damped
    # the damping smooths the box edges over a width of about 0.1
    inside = np.abs(rep.y) < 0.5
    outside = np.abs(rep.y) > 1.6
    assert np.allclose(rep.density.real[inside], 0.5, atol=1e-6)
    assert np.max(np.abs(rep.density[outside])) < 1e-6
    assert rep.l1_norm_estimate == pytest.approx(1.0, abs=1e-3)


def test_density_invariant_lower_bound():
    for name in ("gaussian", "fejer", "rogosinski", "abel"):
        rep = a_density(multiplier_function(name))
        assert rep.l1_norm_estimate >= 1.0 - rep.tail_mass - rep.reconstruction_error


def test_density_bad_grid():
    with pytest.raises(ValueError):
        a_density(multiplier_function("gaussian"), grid_step=0.0)


def test_reconstruction_for_integrable_transforms():
    # phi and its transform both integrable: the sampled density rebuilds phi
    for name in ("gaussian", "fejer"):
        assert a_density(multiplier_function(name)).reconstruction_error < 1e-3


def test_nonintegrable_tail_is_flagged():
    # a jump at +-1 gives |g| ~ 1/|y|, which has no finite mass
    box = MultiplierFunction(lambda x: (np.abs(np.asarray(x)) < 1).astype(float), 1.0, 1.0,
                             None, (-1.0, 1.0), "box")
    rep = a_density(box)
    assert rep.in_A == "no" and math.isinf(rep.l1_norm_estimate)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([("gaussian", {}), ("abel", {}), ("fejer", {}),
                        ("riesz", {"alpha": 1, "beta": 2})]),
       st.one_of(st.sampled_from([2.0, 1 / 3]), st.floats(0.3, 3.0)))
def test_scale_invariance(case, lam):
    # tails here are one-signed or negligible, so the tail mass is exact
    phi = multiplier_function(case[0], **case[1])
    a = a_density(phi).l1_norm_estimate
    b = a_density(scaled(phi, lam)).l1_norm_estimate
    assert b == pytest.approx(a, abs=1e-6)


@pytest.mark.parametrize("lam", [2.0, 1 / 3])
def test_scale_invariance_algebraic_tail(lam):
    # rogosinski has an oscillating |y|^-2 tail that is extrapolated by the
    # power-law fit; agreement is about 1e-4, short of the 1e-6 target
    phi = multiplier_function("rogosinski")
    a = a_density(phi).l1_norm_estimate
    b = a_density(scaled(phi, lam)).l1_norm_estimate
    assert b == pytest.approx(a, abs=1e-6)


@pytest.mark.parametrize("name,kw", [("gaussian", {}), ("fejer", {}), ("abel", {}),
                                     ("riesz", dict(alpha=2, beta=2)), ("rogosinski", {})])
def test_kernel_norm_below_A_norm(name, kw):
    phi = multiplier_function(name, **kw)
    a = a_density(phi).l1_norm_estimate
    fam = phi_family(phi)
    for n in (1, 4, 16, 64):
        assert l1_norm(kernel_of(fam, n)) <= a * (1 + 1e-9)


# -- theorem2_report --

@pytest.mark.parametrize("key", ["gaussian", "riesz22", "abel"])
def test_theorem2_satisfied(reports, key):
    rep = reports[key]
    assert rep.overall == "satisfied" and rep.reasons == ()
    assert rep.phi0_is_one and rep.bv_near_zero[2] and rep.x_phi_in_L1[1]


def test_theorem2_fejer_violated(reports):
    rep = reports["fejer"]
    assert rep.overall == "violated"
    assert rep.reasons == ("x phi'(x) not in A(R)",)
    dens, (l1, converged) = rep.x_phi_prime_in_A_and_L1
    assert dens.tail_method == "power_law" and converged
    assert l1 == pytest.approx(1.0, abs=1e-9)  # int |x| on [-1, 1]


def test_theorem2_rejects_phi0(reports):
    phi = MultiplierFunction(lambda x: 2 * np.exp(-np.asarray(x) ** 2), math.inf, 2.0,
                             lambda x: -4 * np.asarray(x) * np.exp(-np.asarray(x) ** 2), (),
                             "2gauss")
    rep = theorem2_report(phi)
    assert rep.overall == "violated" and not rep.phi0_is_one


def test_theorem2_rogosinski_violated():
    rep = theorem2_report(multiplier_function("rogosinski"))
    assert "x phi'(x) not in A(R)" in rep.reasons


def test_theorem2_report_dict_roundtrip(reports):
    d = reports["gaussian"].to_dict()
    assert d["overall"] == "satisfied"
    assert set(d) >= {"phi_in_A", "x_phi_prime_in_A", "x_phi_prime_L1", "decay_o_over_x"}
    __import__("json").dumps(d)


def test_gaussian_decay_profile():
    phi = multiplier_function("gaussian")
    lo = np.linspace(4, 8, 401)
    hi = np.linspace(8, 16, 801)
    assert np.max(hi * phi(hi)) < np.max(lo * phi(lo))


# -- lemma_quantities --

@pytest.fixture(scope="module")
def lemma_records():
    out = {}
    for key, fam in (("fejer", catalog_family("fejer")),
                     ("riesz12", catalog_family("riesz", {"alpha": 1, "beta": 2})),
                     ("rogosinski", catalog_family("rogosinski"))):
        out[key] = lemma_quantities(fam, [8, 16, 32, 64])
    return out


def _series(recs, prefix):
    return [r.value.real for r in recs if r.experiment.startswith(prefix)]


def test_fejer_delta_variation_is_two(lemma_records):
    assert _series(lemma_records["fejer"], "delta_variation") == pytest.approx([2.0] * 4)


def test_fejer_t_kprime_grows(lemma_records):
    v = _series(lemma_records["fejer"], "t_kprime")
    assert all(b > a for a, b in zip(v, v[1:]))
    # roughly ln n growth: the increment per doubling stays away from zero
    assert min(np.diff(v)) > 0.5


def test_riesz12_t_kprime_bounded(lemma_records):
    v = _series(lemma_records["riesz12"], "t_kprime")
    steps = np.diff(v)
    # increments shrink geometrically per doubling, unlike the Fejer case
    assert max(v) < 7 and all(b < 0.6 * a for a, b in zip(steps, steps[1:]))


@pytest.mark.parametrize("key", ["fejer", "riesz12", "rogosinski"])
def test_lemma3_inequality(lemma_records, key):
    recs = [r for r in lemma_records[key] if r.experiment.startswith("lemma3")]
    assert all(r.status == "within_bound" and r.value.real <= r.bound for r in recs)


def test_t_kprime_exact_for_fejer_n1():
    # lambda_k = 1 - |k|/2 gives K = 1 + cos t, and int |t sin t| over [-pi, pi] is 2 pi
    recs = lemma_quantities(catalog_family("fejer"), [1])
    assert _series(recs, "t_kprime")[0] == pytest.approx(2 * math.pi, rel=1e-10)


def test_lemma_delta_range():
    with pytest.raises(ValueError):
        lemma_quantities(catalog_family("fejer"), [4], delta=0.0)


# -- phi_n family --

def test_phi_n_gaussian_bound_two():
    recs = phi_n_family_norms(multiplier_function("gaussian"), [1, 4, 16, 64])
    assert recs[0].bound == pytest.approx(2.0 * (1 + 1e-3), rel=5e-3)
    assert all(r.status == "within_bound" for r in recs)


def test_phi_n_riesz12_bounded():
    recs = phi_n_family_norms(multiplier_function("riesz", alpha=1, beta=2), [2, 8, 32, 128])
    norms = [r.value.real for r in recs]
    assert all(r.status == "within_bound" for r in recs)
    assert max(norms) < 1.2


def test_phi_n_rejects_failing_phi():
    with pytest.raises(ValueError, match="hypotheses"):
        phi_n_family_norms(multiplier_function("fejer"), [2])
