"""Periodic functions on [-pi, pi], their integrals and Fourier data."""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .quadrature import (
    QuadratureError,
    adaptive_integrate,
    exp_sum_from_grid,
    exp_sum_to_grid,
    panel_rule,
)

TWO_PI = 2.0 * math.pi
_anon = itertools.count()


def wrap(t):
    """Map reals into [-pi, pi]; points already inside are left untouched."""
    t = np.asarray(t, dtype=float)
    inside = (t >= -math.pi) & (t <= math.pi)
    return np.where(inside, t, np.mod(t + math.pi, TWO_PI) - math.pi)


def _sorted_points(points):
    pts = sorted(float(p) for p in points)
    for p in pts:
        if p < -math.pi - 1e-12 or p > math.pi + 1e-12:
            raise ValueError(f"point {p!r} outside [-pi, pi]")
    return tuple(pts)


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """A 2pi-periodic integrable function sampled through ``evaluator``.

    ``evaluator`` takes a float array in [-pi, pi] and returns values of the
    same shape. ``singular_points`` are where the function may blow up;
    ``piece_breaks`` where its closed form changes. Both become forced
    quadrature panel edges.

    ``real`` is declared, not detected. ``primitive`` (optional) is an exact
    ``t -> integral_0^t f`` on [-pi, pi]; ``max_frequency`` is a hint of the
    fastest local oscillation, used to size quadrature panels.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    singular_points: tuple = ()
    piece_breaks: tuple = ()
    label: str = ""
    real: bool = True
    primitive: Optional[Callable[[np.ndarray], np.ndarray]] = None
    max_frequency: float = 0.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "singular_points", _sorted_points(self.singular_points))
        object.__setattr__(self, "piece_breaks", _sorted_points(self.piece_breaks))
        if not self.label:
            object.__setattr__(self, "label", f"anon-{next(_anon)}")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        y = np.asarray(self.evaluator(wrap(t)))
        if self.real:
            y = np.real(y)
        return y if y.ndim else y[()]

    @property
    def edges(self):
        """Forced panel edges in [-pi, pi], endpoints included."""
        pts = {-math.pi, math.pi, *self.piece_breaks, *self.singular_points}
        return np.array(sorted(pts))

    # -- arithmetic, used for linear combinations in tests and descriptors --
    def __add__(self, other):
        if not isinstance(other, PeriodicFunction):
            return NotImplemented
        prim = None
        if self.primitive is not None and other.primitive is not None:
            p1, p2 = self.primitive, other.primitive
            prim = lambda t: np.asarray(p1(t)) + np.asarray(p2(t))  # noqa: E731
        f1, f2 = self.evaluator, other.evaluator
        return PeriodicFunction(
            lambda t: np.asarray(f1(t)) + np.asarray(f2(t)),
            singular_points=tuple(set(self.singular_points) | set(other.singular_points)),
            piece_breaks=tuple(set(self.piece_breaks) | set(other.piece_breaks)),
            label=f"({self.label}+{other.label})",
            real=self.real and other.real,
            primitive=prim,
            max_frequency=max(self.max_frequency, other.max_frequency),
        )

    def scaled(self, alpha):
        alpha = complex(alpha) if np.iscomplexobj(alpha) else float(alpha)
        f = self.evaluator
        prim = None
        if self.primitive is not None:
            p = self.primitive
            prim = lambda t: alpha * np.asarray(p(t))  # noqa: E731
        return PeriodicFunction(
            lambda t: alpha * np.asarray(f(t)),
            singular_points=self.singular_points,
            piece_breaks=self.piece_breaks,
            label=f"{alpha!r}*{self.label}",
            real=self.real and not isinstance(alpha, complex),
            primitive=prim,
            max_frequency=self.max_frequency,
        )

    def __rmul__(self, alpha):
        return self.scaled(alpha)

    # -- integrals --
    def _primitive_ext(self, s):
        """Exact primitive continued periodically (drift 2pi * mean per turn)."""
        s = np.asarray(s, dtype=float)
        turns = np.floor((s + math.pi) / TWO_PI)
        inside = (s >= -math.pi) & (s <= math.pi)
        turns = np.where(inside, 0.0, turns)
        w = s - TWO_PI * turns
        period = self.primitive(np.array(math.pi)) - self.primitive(np.array(-math.pi))
        return np.asarray(self.primitive(w)) + turns * period

    def integral_from(self, x, offsets, tol=1e-11):
        """Vectorised ``integral_x^{x+t} f`` for every ``t`` in ``offsets``.

        Uses the exact primitive when one is declared, otherwise cumulative
        adaptive quadrature over the periodic extension.
        """
        offsets = np.asarray(offsets, dtype=float)
        if self.primitive is not None:
            out = self._primitive_ext(x + offsets) - self._primitive_ext(np.array(x))
            return out.real if self.real else out
        return _cumulative_integral(self, float(x), offsets, tol)

    def integral(self, a, b, tol=1e-11):
        """``integral_a^b f`` for arbitrary reals (periodic extension)."""
        return complex(np.asarray(self.integral_from(a, np.array([b - a]), tol))[0])


def _periodic_edges(f, lo, hi):
    base = f.edges[:-1]
    first = math.floor((lo + math.pi) / TWO_PI) - 1
    last = math.ceil((hi + math.pi) / TWO_PI) + 1
    reps = (base[None, :] + TWO_PI * np.arange(first, last + 1)[:, None]).ravel()
    return reps[(reps > lo) & (reps < hi)]


def _cumulative_integral(f, x, offsets, tol):
    ends = x + offsets.ravel()
    lo, hi = min(x, ends.min()), max(x, ends.max())
    points = np.unique(np.concatenate([[x], ends, _periodic_edges(f, lo, hi)]))
    if points.size < 2:
        return np.zeros(offsets.shape, dtype=float if f.real else complex)
    func = lambda s: np.asarray(f.evaluator(wrap(s)), dtype=complex)  # noqa: E731
    seg, _ = adaptive_integrate(func, points, tol=tol,
                                segment_ids=np.arange(points.size - 1))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    base = cum[np.searchsorted(points, x)]
    out = cum[np.searchsorted(points, ends)] - base
    out = out.reshape(offsets.shape)
    return out.real if f.real else out


def integrate_periodic(f, a, b, tol=1e-10, max_width=None):
    """Adaptive quadrature of ``f`` over ``[a, b]`` within ``[-pi, pi]``.

    Declared singular points and piece breaks are forced panel edges;
    ``max_width`` caps the initial panel width (oscillatory integrands).
    Raises :class:`QuadratureError` when the tolerance is out of reach.
    """
    if not (-math.pi - 1e-12 <= a <= b <= math.pi + 1e-12):
        raise ValueError(f"[{a}, {b}] is not a sub-interval of [-pi, pi]")
    if tol <= 0:
        raise ValueError("tol must be positive")
    inner = [p for p in f.edges if a < p < b]
    edges = np.array([a, *inner, b], dtype=float)
    if max_width is not None:
        edges = _refine_edges(edges, max_width)
    func = lambda t: np.asarray(f.evaluator(t), dtype=complex)  # noqa: E731
    value, _ = adaptive_integrate(func, edges, tol=tol)
    return complex(value)


def _refine_edges(edges, max_width):
    parts = []
    for p, q in zip(edges[:-1], edges[1:]):
        m = max(1, int(math.ceil((q - p) / max_width)))
        parts.append(np.linspace(p, q, m + 1)[:-1])
    parts.append(edges[-1:])
    return np.concatenate(parts)


def fourier_coefficient(f, k, tol=1e-10):
    """``(1/2pi) integral f(t) exp(-ikt) dt`` by adaptive quadrature."""
    k = int(k)
    g = f.evaluator
    integrand = PeriodicFunction(
        lambda t: np.asarray(g(t)) * np.exp(-1j * k * t),
        singular_points=f.singular_points,
        piece_breaks=f.piece_breaks,
        real=False,
    )
    width = math.pi / (4.0 * (abs(k) + f.max_frequency + 1))
    return integrate_periodic(integrand, -math.pi, math.pi, tol * TWO_PI, max_width=width) / TWO_PI


@dataclass(frozen=True)
class FourierCoefficients:
    """Coefficients ``f_k`` for ``|k| <= window``; ``values[k + window]``."""

    window: int
    values: np.ndarray
    quadrature_tolerance: float
    error_estimate: float = 0.0

    def __getitem__(self, k):
        k = np.asarray(k)
        if np.any(np.abs(k) > self.window):
            raise IndexError(f"|k| exceeds computed window {self.window}")
        out = self.values[k + self.window]
        return out if out.ndim else out[()]

    def truncated(self, n):
        if n > self.window:
            raise IndexError(f"window {n} exceeds computed window {self.window}")
        return FourierCoefficients(n, self.values[self.window - n:self.window + n + 1],
                                   self.quadrature_tolerance, self.error_estimate)


def _batch_coefficients(f, n, tol):
    freq = n + f.max_frequency + 1.0
    width = min(3.0 * math.pi / freq, math.pi / 8)
    edges = f.edges
    graded = f.singular_points
    err = math.inf
    for _ in range(5):
        sums = []
        for order in (20, 14):
            x, w = panel_rule(edges, width, order=order, graded=graded)
            y = np.asarray(f.evaluator(x), dtype=complex) * w
            if f.real:
                half = exp_sum_to_grid(x, y, 0.0, 1.0, n + 1, sign=-1.0) / TWO_PI
                sums.append(np.concatenate([np.conj(half[:0:-1]), half]))
            else:
                sums.append(exp_sum_to_grid(x, y, -float(n), 1.0, 2 * n + 1, sign=-1.0) / TWO_PI)
        err = float(np.max(np.abs(sums[0] - sums[1])))
        if err <= tol:
            return sums[0], err
        width *= 0.5
    raise QuadratureError(
        f"Fourier coefficients of {f.label} up to |k|={n} did not reach tol={tol:g}",
        estimate=sums[0], error=err)


def _canonical_window(n):
    """Smallest of 32, 2^j, 3*2^(j-1) that is >= n.

    Batch quadrature depends on the window, so every request is served from
    a window fixed by ``n`` alone; results then do not depend on call order.
    """
    w = 32
    while w < n:
        w = w * 3 // 2 if w & (w - 1) == 0 else w * 4 // 3
    return w


class CoefficientCache:
    """Thread-safe cache of coefficient windows keyed by (label, tol, window).

    One writer per key: concurrent requests for the same key wait on that
    key's lock, so each window is computed once.
    """

    def __init__(self):
        self._data = {}
        self._locks = {}
        self._guard = threading.Lock()

    def _lock_for(self, key):
        with self._guard:
            return self._locks.setdefault(key, threading.Lock())

    def get(self, f, n, tol):
        window = _canonical_window(n)
        key = (f.label, float(tol), window)
        with self._lock_for(key):
            entry = self._data.get(key)
            if entry is None:
                values, err = _batch_coefficients(f, window, tol)
                entry = FourierCoefficients(window, values, tol, err)
                self._data[key] = entry
        return entry.truncated(n)

    def clear(self):
        with self._guard:
            self._data.clear()
            self._locks.clear()


COEFFICIENT_CACHE = CoefficientCache()


def fourier_coefficients(f, n, tol=1e-10, cache=COEFFICIENT_CACHE):
    """All coefficients with ``|k| <= n`` (batch quadrature, cached)."""
    if n < 0:
        raise ValueError("window must be nonnegative")
    if cache is None:
        values, err = _batch_coefficients(f, n, tol)
        return FourierCoefficients(n, values, tol, err)
    return cache.get(f, n, tol)


def partial_sum(f, n, x, tol=1e-10):
    """``s_n(f; x) = sum_{|k|<=n} f_k e^{ikx}``; ``x`` may be an array."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    c = fourier_coefficients(f, n, tol)
    out = exp_sum_from_grid(c.values, -float(n), 1.0, np.asarray(x, dtype=float))
    return out if out.ndim else complex(out)


def averaged_primitive(f, x, value_at_zero=None, tol=1e-11):
    """``F_x(t) = (1/t) integral_0^t f(x+u) du`` as a PeriodicFunction.

    ``F_x(0)`` is ``value_at_zero`` when given, otherwise the d-value found by
    :func:`summability.points.classify_point`. If neither exists the function
    is built but evaluating it at ``t = 0`` raises ``ValueError``.
    """
    x = float(x)
    d = value_at_zero
    if d is None:
        from .points import classify_point

        d = classify_point(f, x).d_estimate

    def evaluator(t):
        t = np.asarray(t, dtype=float)
        zero = t == 0.0
        if np.any(zero) and d is None:
            raise ValueError(f"no d-value at x={x!r}; F_x(0) is undefined")
        safe = np.where(zero, 1.0, t)
        g = f.integral_from(x, safe, tol)
        return np.where(zero, d if d is not None else 0.0, g / safe)

    shifted = {float(wrap(p - x)) for p in (*f.piece_breaks, *f.singular_points)}
    shifted |= {0.0, float(wrap(math.pi - x))}
    shifted = {p for p in shifted if -math.pi < p < math.pi}
    real = f.real and (d is None or np.isrealobj(d) or np.imag(d) == 0)
    return PeriodicFunction(
        evaluator,
        piece_breaks=tuple(shifted),
        label=f"avg[{f.label}]@{x!r}",
        real=real,
        max_frequency=f.max_frequency,
        metadata={"x": x, "value_at_zero": d},
    )


def modulus_of_continuity(f, h, grid=4096):
    """Grid estimate of ``sup |f(t) - f(t+delta)|`` over ``0 < delta <= h``.

    Samples ``grid`` equispaced points of [-pi, pi] and takes the largest
    oscillation over windows spanning at most ``h``. This under-estimates the
    true modulus by at most the oscillation of ``f`` over one grid step, and
    is exactly monotone in ``h``.
    """
    if f.singular_points:
        raise ValueError("modulus of continuity needs a function without singular points")
    if not 0 < h <= TWO_PI + 1e-12:
        raise ValueError("h must lie in (0, 2pi]")
    if grid < 64:
        raise ValueError("grid must be at least 64")
    t = np.linspace(-math.pi, math.pi, grid)
    y = np.asarray(f(t))
    step = TWO_PI / (grid - 1)
    m = min(grid - 1, int(math.floor(h / step + 1e-9)))
    if m == 0:
        return 0.0
    if np.isrealobj(y):
        win = np.lib.stride_tricks.sliding_window_view(y, m + 1)
        return float(np.max(win.max(axis=1) - win.min(axis=1)))
    best = 0.0
    for lag in range(1, m + 1):
        best = max(best, float(np.max(np.abs(y[lag:] - y[:-lag]))))
    return best
