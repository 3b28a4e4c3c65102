"""Multiplier functions, multiplier families and linear means."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .kernels import TrigPolynomial
from .periodic import fourier_coefficients
from .quadrature import exp_sum_from_grid

__all__ = [
    "DiscreteMeasure",
    "FAMILY_NAMES",
    "MULTIPLIER_NAMES",
    "MultiplierFamily",
    "MultiplierFunction",
    "catalog_family",
    "endpoint_corrected",
    "kernel_of",
    "linear_means",
    "multiplier_function",
    "phi_family",
]


@dataclass(frozen=True, eq=False)
class MultiplierFunction:
    """A function phi on the real line generating multipliers phi(k/(n+1)).

    ``derivative`` is valid away from 0, from ``nonsmooth_points`` and from
    the support endpoints. ``integrable`` says whether phi itself is in L1
    (sinc is not, which changes how its transform is computed).
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    support_radius: float = math.inf
    value_at_zero: complex = 1.0
    derivative: Optional[Callable[[np.ndarray], np.ndarray]] = None
    nonsmooth_points: tuple = ()
    label: str = "phi"
    integrable: bool = True
    real: bool = True
    decay_scale: float = 1.0

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        y = np.asarray(self.evaluator(x))
        if math.isfinite(self.support_radius):
            y = np.where(np.abs(x) > self.support_radius, 0.0, y)
        if self.real:
            y = np.real(y)
        return y if y.ndim else y[()]

    def prime(self, x):
        if self.derivative is None:
            raise ValueError(f"{self.label} has no derivative evaluator")
        x = np.asarray(x, dtype=float)
        y = np.asarray(self.derivative(x))
        if math.isfinite(self.support_radius):
            y = np.where(np.abs(x) >= self.support_radius, 0.0, y)
        if self.real:
            y = np.real(y)
        return y if y.ndim else y[()]


@dataclass(frozen=True)
class DiscreteMeasure:
    """Atoms ``(t_j, w_j)`` of a finite complex measure."""

    atoms: tuple

    def __post_init__(self):
        object.__setattr__(self, "atoms",
                           tuple((float(t), complex(w)) for t, w in self.atoms))

    @property
    def total_mass(self):
        return sum(w for _, w in self.atoms)

    @property
    def variation(self):
        return sum(abs(w) for _, w in self.atoms)


def _box(x):
    return (np.abs(x) <= 1.0).astype(float)


def _sign(x):
    return np.sign(x)


def _sinc(x):
    x = np.asarray(x, dtype=float)
    return np.sinc(x / math.pi)


def _sinc_prime(x):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-4
    xs = np.where(small, 1.0, x)
    val = (xs * np.cos(xs) - np.sin(xs)) / xs ** 2
    return np.where(small, -x / 3.0, val)


def _riesz(alpha, beta):
    def ev(x):
        base = np.clip(1.0 - np.abs(x) ** alpha, 0.0, None)
        return base ** beta

    def der(x):
        ax = np.abs(x)
        base = np.clip(1.0 - ax ** alpha, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = -beta * base ** (beta - 1) * alpha * ax ** (alpha - 1) * np.sign(x)
        return np.where((ax < 1.0) & (ax > 0), d, 0.0)

    return ev, der


def _expo(alpha):
    def ev(x):
        return np.exp(-np.abs(x) ** alpha)

    def der(x):
        ax = np.abs(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = -alpha * ax ** (alpha - 1) * np.sign(x) * np.exp(-ax ** alpha)
        return np.where(ax > 0, d, 0.0)

    return ev, der


def _rb(gamma, measure):
    ts = np.array([t for t, _ in measure.atoms])
    ws = np.array([w for _, w in measure.atoms])

    def ev(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-1j * gamma * np.multiply.outer(x, ts)) @ ws

    def der(x):
        x = np.asarray(x, dtype=float)
        return np.exp(-1j * gamma * np.multiply.outer(x, ts)) @ (-1j * gamma * ts * ws)

    return ev, der


MULTIPLIER_NAMES = ("gaussian", "exp", "abel", "fejer", "riesz", "rogosinski",
                    "bernstein", "sinc", "rb_measure")


def _as_measure(atoms):
    if isinstance(atoms, DiscreteMeasure):
        return atoms
    return DiscreteMeasure(tuple(atoms))


def multiplier_function(name, **params):
    """Catalog of multiplier functions phi by name.

    Names: gaussian, exp (alpha), abel, fejer, riesz (alpha, beta),
    rogosinski, bernstein, sinc, rb_measure (gamma, atoms).
    """
    if name == "gaussian":
        return MultiplierFunction(lambda x: np.exp(-np.asarray(x) ** 2), math.inf, 1.0,
                                  lambda x: -2 * np.asarray(x) * np.exp(-np.asarray(x) ** 2),
                                  (), "gaussian", decay_scale=1.0)
    if name in ("exp", "abel"):
        alpha = float(params.get("alpha", 1.0))
        if alpha <= 0:
            raise ValueError("exp: alpha must be positive")
        ev, der = _expo(alpha)
        return MultiplierFunction(ev, math.inf, 1.0, der, (0.0,), f"exp(alpha={alpha:g})")
    if name == "fejer":
        return MultiplierFunction(lambda x: np.clip(1 - np.abs(x), 0, None), 1.0, 1.0,
                                  lambda x: -_sign(x) * (np.abs(x) < 1), (0.0, -1.0, 1.0),
                                  "fejer")
    if name == "riesz":
        alpha = float(params.get("alpha", 1.0))
        beta = float(params.get("beta", 1.0))
        if alpha <= 0 or beta <= 0:
            raise ValueError("riesz: alpha and beta must be positive")
        ev, der = _riesz(alpha, beta)
        return MultiplierFunction(ev, 1.0, 1.0, der, (0.0, -1.0, 1.0),
                                  f"riesz(alpha={alpha:g},beta={beta:g})")
    if name == "rogosinski":
        return MultiplierFunction(lambda x: np.cos(0.5 * math.pi * np.asarray(x)) * _box(x),
                                  1.0, 1.0,
                                  lambda x: -0.5 * math.pi * np.sin(0.5 * math.pi * np.asarray(x)),
                                  (-1.0, 1.0), "rogosinski")
    if name == "bernstein":
        return MultiplierFunction(
            lambda x: (np.cos(0.5 * math.pi * np.asarray(x)) ** 2
                       + 0.5j * np.sin(math.pi * np.asarray(x))) * _box(x),
            1.0, 1.0,
            lambda x: 0.5j * math.pi * np.exp(1j * math.pi * np.asarray(x)),
            (-1.0, 1.0), "bernstein", real=False)
    if name == "sinc":
        return MultiplierFunction(_sinc, math.inf, 1.0, _sinc_prime, (), "sinc",
                                  integrable=False)
    if name == "rb_measure":
        gamma = float(params.get("gamma", 1.0))
        measure = _as_measure(params.get("atoms", ((0.0, 1.0),)))
        if abs(measure.total_mass - 1) > 1e-12:
            raise ValueError(f"rb_measure: weights must sum to 1, got {measure.total_mass}")
        ev, der = _rb(gamma, measure)
        real = all(abs(w.imag) < 1e-15 for _, w in measure.atoms) and all(
            abs(t) < 1e-15 for t, _ in measure.atoms)
        return MultiplierFunction(lambda x: ev(x) * _box(x), 1.0, 1.0, der, (-1.0, 1.0),
                                  f"rb_measure(gamma={gamma:g})", real=real)
    raise ValueError(f"unknown multiplier function {name!r}")


def endpoint_corrected(phi):
    """Subtract the kinks of phi at +-1 with multiples of (1-|x|)_+ and
    (1-|x|)_+ sign(x), so the result has zero one-sided derivatives at +-1.

    The combination is ``phi + a(1-|x|)_+ + b(1-|x|)_+ sign x`` with
    ``a = (phi'(1) - phi'(-1))/2`` and ``b = (phi'(1) + phi'(-1))/2``, the
    derivatives taken from inside [-1, 1].
    """
    if phi.support_radius != 1.0:
        raise ValueError("endpoint correction needs support [-1, 1]")
    inner = 1.0 - 1e-12
    d_plus = complex(np.asarray(phi.prime(np.array([inner])))[0])
    d_minus = complex(np.asarray(phi.prime(np.array([-inner])))[0])
    a = 0.5 * (d_plus - d_minus)
    b = 0.5 * (d_plus + d_minus)
    real = phi.real and a.imag == 0 and b.imag == 0
    if real:
        a, b = a.real, b.real

    def ev(x):
        tri = np.clip(1 - np.abs(x), 0, None)
        return np.asarray(phi.evaluator(x)) + a * tri + b * tri * np.sign(x)

    def der(x):
        inside = np.abs(x) < 1
        return np.asarray(phi.derivative(x)) + (-a * np.sign(x) - b) * inside

    return MultiplierFunction(ev, 1.0, phi.value_at_zero + a, der,
                              tuple(sorted({*phi.nonsmooth_points, 0.0})),
                              f"corrected[{phi.label}]", phi.integrable, real)


# -- families --

@dataclass(frozen=True, eq=False)
class MultiplierFamily:
    """Rule ``n -> (lambda_{k,n})_{|k|<=N(n)}``.

    ``coefficients(n)`` returns the array indexed ``k + N(n)``. When the
    family is generated by a function, ``source`` holds it and ``scale(n)``
    is the dilation, so ``lambda_{k,n} = phi(k/scale(n))``.
    """

    label: str
    rule: Callable[[np.ndarray, int], np.ndarray]
    window: Callable[[int], int]
    source: Optional[MultiplierFunction] = None
    scale: Optional[Callable[[int], float]] = None
    tail_tol: float = 1e-10
    params: dict = field(default_factory=dict)

    def coefficients(self, n):
        if n < 0:
            raise ValueError("n must be nonnegative")
        N = int(self.window(n))
        k = np.arange(-N, N + 1)
        return np.asarray(self.rule(k, n), dtype=complex)

    def __call__(self, k, n):
        return self.rule(np.asarray(k), n)


def phi_family(phi, label=None, tail_tol=1e-10, scale=None, window=None):
    """Family ``lambda_{k,n} = phi(k/(n+1))`` (or ``phi(k/scale(n))``)."""
    scale = scale or (lambda n: n + 1.0)

    if window is None:
        if math.isfinite(phi.support_radius):
            def window(n):
                return int(math.ceil(phi.support_radius * scale(n) - 1e-9))
        else:
            reach = _decay_reach(phi, tail_tol)

            def window(n):
                return int(math.ceil(reach * scale(n)))

    def rule(k, n):
        return phi(np.asarray(k, dtype=float) / scale(n))

    return MultiplierFamily(label or phi.label, rule, window, phi, scale, tail_tol)


def _decay_reach(phi, tail_tol):
    # smallest X with |phi(x)| < tail_tol for all |x| >= X (monotone tails)
    x = 1.0
    while x < 1e8:
        probe = x * np.linspace(1.0, 2.0, 33)
        if np.max(np.abs(phi(probe))) < tail_tol and np.max(np.abs(phi(-probe))) < tail_tol:
            return x
        x *= 1.25
    raise ValueError(f"{phi.label}: no finite truncation reaches tail_tol={tail_tol:g}")


def _cesaro_rule(alpha):
    def rule(k, n):
        m = np.arange(1, n + 1)
        j = n - m + 1.0
        ratios = np.concatenate([[1.0], np.cumprod(j / (alpha + j))])
        k = np.asarray(k)
        out = np.zeros(k.shape)
        inside = np.abs(k) <= n
        out[inside] = ratios[np.abs(k[inside])]
        return out
    return rule


def _vallee_poussin_rule(m_of_n):
    def rule(k, n):
        half = m_of_n(n) // 2
        j = np.arange(1, half + 1)
        ratios = np.concatenate([[1.0], np.cumprod((half - j + 1.0) / (half + j))])
        k = np.asarray(k)
        out = np.zeros(k.shape)
        inside = np.abs(k) <= half
        out[inside] = ratios[np.abs(k[inside])]
        return out
    return rule


def _fejer_jackson_rule(s):
    def rule(k, n):
        base = np.ones(2 * n + 1)
        conv = base
        for _ in range(s - 1):
            conv = np.convolve(conv, base)
        conv = conv / conv[conv.size // 2]
        N = s * n
        k = np.asarray(k)
        out = np.zeros(k.shape)
        inside = np.abs(k) <= N
        out[inside] = conv[k[inside] + N]
        return out
    return rule


FAMILY_NAMES = ("fejer", "cesaro", "riesz", "exp", "vallee_poussin", "fejer_jackson",
                "rogosinski", "bernstein", "lebesgue", "rb_measure", "dirichlet")


def catalog_family(name, params=None):
    """Build a catalog multiplier family.

    Parameters
    ----------
    name : str
        One of ``FAMILY_NAMES``.
    params : dict, optional
        ``cesaro``: alpha; ``riesz``: alpha, beta; ``exp``: alpha;
        ``vallee_poussin``: m (even, fixed) or none for ``m = 2n``;
        ``fejer_jackson``: s; ``lebesgue``: eps (fixed) or c for
        ``eps_n = c/(n+1)`` (default c = pi), cutoff; ``rb_measure``:
        gamma, atoms.
    """
    params = dict(params or {})
    tail_tol = float(params.pop("tail_tol", 1e-10))

    def positive(key, default):
        v = float(params.get(key, default))
        if not v > 0:
            raise ValueError(f"{name}: parameter {key} must be positive, got {v}")
        return v

    if name == "dirichlet":
        return MultiplierFamily("dirichlet", lambda k, n: (np.abs(k) <= n).astype(float),
                                lambda n: n, params={})
    if name == "fejer":
        fam = phi_family(multiplier_function("fejer"), "fejer", tail_tol)
        return _with_params(fam, {})
    if name == "cesaro":
        alpha = positive("alpha", 1.0)
        return MultiplierFamily(f"cesaro(alpha={alpha:g})", _cesaro_rule(alpha), lambda n: n,
                                tail_tol=tail_tol, params={"alpha": alpha})
    if name == "riesz":
        alpha, beta = positive("alpha", 1.0), positive("beta", 1.0)
        phi = multiplier_function("riesz", alpha=alpha, beta=beta)
        return _with_params(phi_family(phi, phi.label, tail_tol), {"alpha": alpha, "beta": beta})
    if name == "exp":
        alpha = positive("alpha", 1.0)
        phi = multiplier_function("exp", alpha=alpha)
        reach = math.log(1.0 / tail_tol) ** (1.0 / alpha)
        fam = phi_family(phi, phi.label, tail_tol,
                         window=lambda n: int(math.ceil(reach * (n + 1))))
        return _with_params(fam, {"alpha": alpha})
    if name == "vallee_poussin":
        if "m" in params:
            m = int(float(params["m"]))
            if m != float(params["m"]) or m < 0:
                raise ValueError("vallee_poussin: m must be a nonnegative integer")
            if m % 2:
                raise ValueError(f"vallee_poussin: m must be even, got {m}")
            m_of_n = lambda n: m  # noqa: E731
            label = f"vallee_poussin(m={m})"
        else:
            m_of_n = lambda n: 2 * n  # noqa: E731
            label = "vallee_poussin(m=2n)"
        return MultiplierFamily(label, _vallee_poussin_rule(m_of_n), lambda n: m_of_n(n) // 2,
                                tail_tol=tail_tol, params=dict(params))
    if name == "fejer_jackson":
        s = params.get("s", 3)
        if float(s) != int(float(s)) or int(float(s)) < 1:
            raise ValueError(f"fejer_jackson: s must be a positive integer, got {s}")
        s = int(float(s))
        return MultiplierFamily(f"fejer_jackson(s={s})", _fejer_jackson_rule(s),
                                lambda n: s * n, tail_tol=tail_tol, params={"s": s})
    if name == "rogosinski":
        return _with_params(phi_family(multiplier_function("rogosinski"), "rogosinski",
                                       tail_tol), {})
    if name == "bernstein":
        return _with_params(phi_family(multiplier_function("bernstein"), "bernstein",
                                       tail_tol), {})
    if name == "lebesgue":
        return _lebesgue_family(params, tail_tol)
    if name == "rb_measure":
        phi = multiplier_function("rb_measure", gamma=params.get("gamma", 1.0),
                                  atoms=params.get("atoms", ((0.0, 1.0),)))
        return _with_params(phi_family(phi, phi.label, tail_tol), dict(params))
    raise ValueError(f"unknown method {name!r}; expected one of {FAMILY_NAMES}")


def _with_params(fam, params):
    return MultiplierFamily(fam.label, fam.rule, fam.window, fam.source, fam.scale,
                            fam.tail_tol, params)


def _lebesgue_family(params, tail_tol):
    # sinc multipliers are not absolutely summable, so no window meets a
    # relative tail tolerance; the window is cutoff/eps instead
    cutoff = float(params.get("cutoff", 4000.0))
    if cutoff <= 0:
        raise ValueError("lebesgue: cutoff must be positive")
    if "eps" in params:
        eps = float(params["eps"])
        if not 0 < eps <= 1:
            raise ValueError(f"lebesgue: eps must lie in (0, 1], got {eps}")
        eps_of_n = lambda n: eps  # noqa: E731
        label = f"lebesgue(eps={eps:g})"
    else:
        c = float(params.get("c", math.pi))
        if c <= 0:
            raise ValueError("lebesgue: c must be positive")
        eps_of_n = lambda n: c / (n + 1.0)  # noqa: E731
        label = f"lebesgue(eps=c/(n+1),c={c:g})"
    phi = multiplier_function("sinc")
    fam = phi_family(phi, label, tail_tol, scale=lambda n: 1.0 / eps_of_n(n),
                     window=lambda n: int(math.ceil(cutoff / eps_of_n(n))))
    return _with_params(fam, {**params, "cutoff": cutoff})


# -- means --

def kernel_of(fam, n):
    """Truncated kernel ``K_n(t) = sum lambda_{k,n} e^{ikt}``."""
    return TrigPolynomial(fam.coefficients(n), f"K[{fam.label}]_{n}")


def linear_means(f, fam, n, x, tol=1e-10):
    """``sum_{|k|<=N(n)} lambda_{k,n} f_k e^{ikx}``; ``x`` may be an array.

    Coefficients of ``f`` come from the shared cache, so a sweep over ``x``
    or over several families reuses one quadrature pass.
    """
    lam = fam.coefficients(n)
    N = (lam.size - 1) // 2
    c = fourier_coefficients(f, N, tol)
    out = exp_sum_from_grid(lam * c.values, -float(N), 1.0, np.asarray(x, dtype=float))
    return out if out.ndim else complex(out)
