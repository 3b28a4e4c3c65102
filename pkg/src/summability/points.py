"""d-points, l-points and the witness functions used to probe them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import digamma

from .periodic import PeriodicFunction, wrap
from .quadrature import QuadratureError, adaptive_integrate

__all__ = [
    "CounterexampleParams",
    "DEFAULT_H_SCHEDULE",
    "PointClassification",
    "classify_point",
    "counterexample_pair",
    "oscillating_witness",
]

DEFAULT_H_SCHEDULE = tuple(10.0 ** -j for j in range(1, 10))


@dataclass(frozen=True)
class PointClassification:
    """Outcome of :func:`classify_point`.

    ``d_residuals`` holds ``(h, q)`` with ``q = (1/h) int_0^h f(x+t) dt`` for
    both signs of ``h``; ``l_residuals`` holds ``(h, r)`` with ``r`` the
    larger of the two one-sided means of ``|f(x+t) - d|``.
    """

    x: float
    d_estimate: Optional[complex]
    d_residuals: tuple
    l_residuals: tuple
    verdict_d: str
    verdict_l: str


def _spread(values):
    v = np.asarray(values)
    return float(max(abs(a - b) for a in v for b in v)) if v.size else 0.0


def classify_point(f, x, h_schedule=DEFAULT_H_SCHEDULE, tol=1e-3, quad_tol=1e-12):
    """Decide numerically whether ``x`` is a d-point and an l-point of ``f``.

    The two-sided difference quotients of the primitive are evaluated along a
    decreasing ``h_schedule``. The verdict is ``yes`` when the last three
    quotients of both signs agree within ``tol``, ``no`` when they spread by
    more than ``10 tol`` without shrinking relative to the start of the
    schedule, and ``inconclusive`` otherwise.
    """
    h = np.asarray(h_schedule, dtype=float)
    if h.size < 5:
        raise ValueError("h_schedule needs at least 5 values")
    if np.any(h <= 0) or np.any(np.diff(h) >= 0):
        raise ValueError("h_schedule must be positive and strictly decreasing")
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = float(x)
    signed = np.concatenate([h, -h])
    q = np.asarray(f.integral_from(x, signed, quad_tol)) / signed
    q_plus, q_minus = q[:h.size], q[h.size:]
    d_res = tuple((float(s), _scalar(v)) for s, v in zip(signed, q))

    recent = np.concatenate([q_plus[-3:], q_minus[-3:]])
    early = np.concatenate([q_plus[:3], q_minus[:3]])
    spread_recent, spread_early = _spread(recent), _spread(early)
    d = None
    if spread_recent <= tol:
        verdict_d = "yes"
        d = _scalar(np.mean(recent))
    elif spread_recent > 10 * tol and spread_recent >= 0.5 * spread_early:
        verdict_d = "no"
    else:
        verdict_d = "inconclusive"

    l_res = ()
    if d is not None:
        l_res = tuple((float(s), _l_residual(f, x, s, d, 1e-3 * tol)) for s in h)
    if verdict_d == "no":
        verdict_l = "no"
    elif verdict_d == "inconclusive":
        verdict_l = "inconclusive"
    else:
        r = np.array([v for _, v in l_res])
        if r[-1] <= tol and r[-1] <= r[0]:
            verdict_l = "yes"
        elif np.min(r[-3:]) > 10 * tol:
            verdict_l = "no"
        else:
            verdict_l = "inconclusive"
    return PointClassification(x, d, d_res, l_res, verdict_d, verdict_l)


def _scalar(v):
    v = complex(v)
    return v.real if v.imag == 0 else v


def _l_residual(f, x, h, d, rel_tol):
    # only needed to a fraction of the verdict tolerance; infinitely many
    # jumps below the listed breaks may stop refinement, then the carried
    # estimate is used
    def integrand(t):
        return np.abs(np.asarray(f.evaluator(wrap(x + t))) - d).astype(complex)

    out = []
    for s in (h, -h):
        lo, hi = min(0.0, s), max(0.0, s)
        inner = [float(wrap(p - x)) for p in (*f.piece_breaks, *f.singular_points)]
        inner = sorted({p for p in inner if lo < p < hi})
        edges = np.array([lo, *inner, hi])
        try:
            val, _ = adaptive_integrate(integrand, edges, tol=rel_tol * h)
        except QuadratureError as exc:
            val = exc.estimate
        out.append(abs(val) / h)
    return float(max(out))


# -- oscillating witness --

def _harmonic_tail(m):
    # T(m) = sum_{s>=m} (-1)^s pi/((s+1)(s+2))
    z = np.asarray(m, dtype=float) + 1.0
    beta = 0.5 * (digamma(0.5 * (z + 1.0)) - digamma(0.5 * z))
    sign = np.where(np.asarray(m) % 2 == 0, 1.0, -1.0)
    return math.pi * sign * (2.0 * beta - 1.0 / z)


def oscillating_witness(scheme="harmonic", floor=1e-4, label=None):
    """Step function g = (-1)^s on (x_{s+1}, x_s], zero on [-pi, 0].

    ``scheme`` is ``"harmonic"`` (``x_s = pi/(s+1)``), ``"dyadic"``
    (``x_s = pi 2^-s``) or a callable ``s -> x_s`` with ``x_0 = pi``. For the
    named schemes both g and its primitive are exact at every scale; the
    ``floor`` only limits which jumps are listed as quadrature breaks. A
    callable sequence is truncated: g is set to 0 below the first ``x_s``
    under ``floor``.
    """
    if scheme == "harmonic":
        def index(t):
            return np.floor(math.pi / t) - 1.0

        def xs(s):
            return math.pi / (np.asarray(s, dtype=float) + 1.0)

        tail = _harmonic_tail
        name = "harmonic"
    elif scheme == "dyadic":
        def index(t):
            s = np.floor(np.log2(math.pi / t))
            # guard the floor against rounding at the jump points
            s = np.where(math.pi * 2.0 ** -s < t, s - 1, s)
            return np.where(math.pi * 2.0 ** -(s + 1) >= t, s + 1, s)

        def xs(s):
            return math.pi * 2.0 ** -np.asarray(s, dtype=float)

        def tail(m):
            m = np.asarray(m, dtype=float)
            return np.where(m % 2 == 0, 1.0, -1.0) * xs(m) / 3.0

        name = "dyadic"
    elif callable(scheme):
        return _witness_from_sequence(scheme, floor, label)
    else:
        raise ValueError(f"unknown witness scheme {scheme!r}")

    def evaluator(t):
        t = np.asarray(t, dtype=float)
        pos = t > 0
        s = index(np.where(pos, t, 1.0))
        return np.where(pos, np.where(s % 2 == 0, 1.0, -1.0), 0.0)

    def primitive(t):
        t = np.asarray(t, dtype=float)
        pos = t > 0
        tt = np.where(pos, t, 1.0)
        s = index(tt)
        val = tail(s + 1) + np.where(s % 2 == 0, 1.0, -1.0) * (tt - xs(s + 1))
        return np.where(pos, val, 0.0)

    count = 0
    breaks = []
    while True:
        p = float(xs(count))
        if p < floor:
            break
        breaks.append(p)
        count += 1
    breaks = [0.0] + breaks
    pieces = _pieces(breaks, floor)
    return PeriodicFunction(
        evaluator, piece_breaks=tuple(breaks), label=label or f"oscillating_g[{name}]",
        primitive=primitive,
        metadata={"scheme": name, "pieces": pieces, "floor": floor,
                  "tail_below_floor": float(tail(len(breaks) - 2))},
    )


def _pieces(breaks, floor):
    # (a, b, value) for g on (x_{s+1}, x_s], listed from x_0 = pi downwards
    xs_desc = sorted((b for b in breaks if b > 0), reverse=True)
    return tuple((xs_desc[s + 1], xs_desc[s], (-1.0) ** s) for s in range(len(xs_desc) - 1))


def _witness_from_sequence(seq, floor, label):
    points = []
    s = 0
    while True:
        p = float(seq(s))
        if s == 0 and abs(p - math.pi) > 1e-12:
            raise ValueError("x_0 must equal pi")
        if points and not p < points[-1]:
            raise ValueError(f"x_s must be strictly decreasing (s={s})")
        if p <= 0:
            raise ValueError("x_s must stay positive")
        points.append(p)
        if p < floor:
            break
        s += 1
    desc = np.array(points)
    lengths = desc[:-1] - desc[1:]
    signs = np.where(np.arange(lengths.size) % 2 == 0, 1.0, -1.0)
    # cumulative integral from the bottom point upwards
    cum_from_bottom = np.concatenate([np.cumsum((signs * lengths)[::-1])[::-1], [0.0]])

    def locate(t):
        # s with t in (x_{s+1}, x_s]; -1 below the truncation point
        idx = np.searchsorted(-desc, -t, side="right") - 1
        return np.where(t <= desc[-1], -1, np.clip(idx, 0, lengths.size - 1))

    def evaluator(t):
        t = np.asarray(t, dtype=float)
        s = locate(np.where(t > 0, t, 0.0))
        return np.where((t > 0) & (s >= 0), signs[np.maximum(s, 0)], 0.0)

    def primitive(t):
        t = np.asarray(t, dtype=float)
        tt = np.where(t > 0, t, 0.0)
        s = locate(tt)
        sp = np.maximum(s, 0)
        val = cum_from_bottom[sp + 1] + signs[sp] * (tt - desc[sp + 1])
        return np.where((t > 0) & (s >= 0), val, 0.0)

    breaks = [0.0, *points]
    pieces = tuple((desc[s + 1], desc[s], signs[s]) for s in range(lengths.size))
    return PeriodicFunction(
        evaluator, piece_breaks=tuple(breaks), label=label or "oscillating_g[custom]",
        primitive=primitive,
        metadata={"scheme": "custom", "pieces": pieces, "floor": floor,
                  "tail_below_floor": 0.0},
    )


# -- counterexample --

@dataclass(frozen=True)
class CounterexampleParams:
    """Levels ``n_k = q^(k^p)``, amplitudes ``a_k = k^-amplitude``, k = 1..K."""

    q: int = 3
    p: int = 2
    K: int = 3
    amplitude: float = 1.5

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 2:
            raise ValueError("q must be an integer >= 2")
        if int(self.p) != self.p or self.p < 2:
            raise ValueError("p must be an integer >= 2")
        if int(self.K) != self.K or self.K < 0:
            raise ValueError("K must be a nonnegative integer")
        if self.amplitude <= 0:
            raise ValueError("amplitude exponent must be positive")

    @property
    def frequencies(self):
        """``n_0, ..., n_K`` (``n_0 = 1``)."""
        return [int(self.q) ** (k ** int(self.p)) for k in range(int(self.K) + 1)]

    @property
    def amplitudes(self):
        return [0.0] + [k ** -self.amplitude for k in range(1, int(self.K) + 1)]

    def driver(self):
        """``a_k ln(n_k / n_{k-1})`` for k = 1..K."""
        q, p = int(self.q), int(self.p)
        a = self.amplitudes
        # ln(n_k / n_{k-1}) = (k^p - (k-1)^p) ln q, exact for any size
        return [a[k] * (k ** p - (k - 1) ** p) * math.log(q) for k in range(1, int(self.K) + 1)]


def counterexample_pair(params=CounterexampleParams(), cap=20_000, inner="zero"):
    """Build ``(F0, f0)`` with ``F0(t) = a_k sin(n_k |t|)`` on the k-th level.

    Level k occupies ``pi/n_k <= |t| <= pi/n_{k-1}``. Inside ``|t| < pi/n_K``
    the construction is truncated: ``inner="continue"`` keeps the last
    level's formula down to 0, ``inner="zero"`` sets F0 to 0. Either way F0
    is continuous and vanishes at 0. ``f0 = F0 + t F0'`` has the exact
    primitive ``t F0(t)``, so its averaged primitive at 0 is F0.
    """
    if inner not in ("continue", "zero"):
        raise ValueError("inner must be 'continue' or 'zero'")
    n = params.frequencies
    a = params.amplitudes
    K = int(params.K)
    if n[-1] > cap:
        raise ValueError(f"degree n_K = {n[-1]} exceeds the cap {cap}")
    lo = [0.0] + [math.pi / n[k] for k in range(1, K + 1)]
    hi = [0.0] + [math.pi / n[k - 1] for k in range(1, K + 1)]
    if K and inner == "continue":
        lo[K] = 0.0
    levels = list(range(1, K + 1))
    na = np.array(n, dtype=float)
    aa = np.array(a)

    def level_of(u):
        lv = np.zeros(u.shape, dtype=int)
        for k in levels:
            lv = np.where((u >= lo[k]) & (u <= hi[k]) & (lv == 0), k, lv)
        return lv

    def F0(t):
        u = np.abs(np.asarray(t, dtype=float))
        lv = level_of(u)
        return np.where(lv > 0, aa[lv] * np.sin(na[lv] * u), 0.0)

    def f0(t):
        u = np.abs(np.asarray(t, dtype=float))
        lv = level_of(u)
        nu = na[lv] * u
        return np.where(lv > 0, aa[lv] * (np.sin(nu) + nu * np.cos(nu)), 0.0)

    def F0_primitive(t):
        t = np.asarray(t, dtype=float)
        u = np.abs(t)
        total = np.zeros(u.shape)
        for k in levels:
            c = np.clip(u, lo[k], hi[k])
            total = total + aa[k] * (math.cos(n[k] * lo[k]) - np.cos(n[k] * c)) / n[k]
        return np.sign(t) * total

    def f0_primitive(t):
        t = np.asarray(t, dtype=float)
        return t * F0(t)

    breaks = sorted({s * math.pi / n[k] for k in range(1, K + 1) for s in (1.0, -1.0)}
                    | {0.0})
    if inner == "continue" and K:
        breaks = [b for b in breaks if abs(abs(b) - math.pi / n[K]) > 0]
    tag = f"q={params.q},p={params.p},K={K},amp={params.amplitude:g},inner={inner}"
    meta = {"params": params, "inner": inner, "truncated": True,
            "frequencies": n, "amplitudes": a}
    F = PeriodicFunction(F0, piece_breaks=tuple(breaks), label=f"counterexample_F0[{tag}]",
                         primitive=F0_primitive, max_frequency=float(n[-1]), metadata=meta)
    f = PeriodicFunction(f0, piece_breaks=tuple(breaks), label=f"counterexample_f0[{tag}]",
                         primitive=f0_primitive, max_frequency=float(n[-1]), metadata=meta)
    return F, f
