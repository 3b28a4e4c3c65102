"""Convergence experiments: records of value, reference, error and bound."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .multipliers import catalog_family, kernel_of, linear_means
from .periodic import (
    PeriodicFunction,
    averaged_primitive,
    fourier_coefficients,
    modulus_of_continuity,
    partial_sum,
)
from .points import CounterexampleParams, classify_point, counterexample_pair
from .quadrature import adaptive_integrate

__all__ = [
    "STATUSES",
    "ExperimentRecord",
    "converges_over",
    "l_point_settling",
    "convergence_equivalence",
    "divergence_experiment",
    "fejer_mean",
    "fejer_rate_check",
    "lebesgue_method_identity",
    "method_comparison",
    "necessary_condition_experiment",
    "records_to_csv",
    "records_to_json",
    "salem_checks",
    "theorem1_constant",
    "theorem1_experiment",
]

STATUSES = ("within_bound", "trend_ok", "diverging", "failed")
CSV_COLUMNS = ("experiment", "n", "value_re", "value_im", "ref_re", "ref_im",
               "error", "bound", "status")

# relative slack when comparing a computed error to a bound fitted from it
_FIT_SLACK = 1e-9


@dataclass(frozen=True)
class ExperimentRecord:
    experiment: str
    n: int
    value: complex
    reference: complex
    error: float
    bound: Optional[float]
    status: str

    def __post_init__(self):
        if self.status not in STATUSES and self.status != "partial":
            raise ValueError(f"unknown status {self.status!r}")

    def row(self):
        v, r = complex(self.value), complex(self.reference)
        return {
            "experiment": self.experiment,
            "n": int(self.n),
            "value_re": _fmt(v.real),
            "value_im": _fmt(v.imag),
            "ref_re": _fmt(r.real),
            "ref_im": _fmt(r.imag),
            "error": _fmt(self.error),
            "bound": "" if self.bound is None else _fmt(self.bound),
            "status": self.status,
        }


def _fmt(x):
    # repr round-trips doubles and is stable across runs
    x = float(x)
    if x == 0:
        return "0.0"
    return repr(x)


def records_to_csv(records):
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def records_to_json(records):
    rows = []
    for rec in records:
        row = rec.row()
        rows.append({k: (row[k] if k in ("experiment", "status", "n")
                         else (None if row[k] == "" else float(row[k]))) for k in CSV_COLUMNS})
    return json.dumps(rows, indent=1) + "\n"


def _record(name, n, value, reference, bound=None, status=None, error=None):
    value, reference = complex(value), complex(reference)
    err = abs(value - reference) if error is None else float(error)
    if status is None:
        status = "within_bound" if bound is not None and err <= bound else "failed"
    return ExperimentRecord(name, int(n), value, reference, err, bound, status)


_FEJER = catalog_family("fejer")


def fejer_mean(f, n, x, tol=1e-10):
    """``sigma_n(f; x)``."""
    return linear_means(f, _FEJER, n, x, tol)


def _d_value(f, x, d):
    if d is not None:
        return d
    c = classify_point(f, x)
    if c.verdict_d != "yes":
        raise ValueError(f"x={x!r} is not a d-point of {f.label} (verdict {c.verdict_d})")
    return c.d_estimate


def _theorem1_rows(f, x, n_list, d, tol, omega_grid):
    Fx = averaged_primitive(f, x, value_at_zero=d)
    fourier_coefficients(Fx, n_list[-1], tol)
    fourier_coefficients(f, n_list[-1] + 1, tol)
    rows = []
    for n in n_list:
        value = fejer_mean(f, n, x, tol) + partial_sum(Fx, n, 0.0, tol)
        term = modulus_of_continuity(Fx, math.log(n) / n, omega_grid) + 1.0 / n
        rows.append((n, value, term))
    return rows


def theorem1_constant(f, x, n, d=None, tol=1e-10, omega_grid=1 << 14):
    """``C = |sigma_n + s_n(F_x;0) - 2d| / (omega(F_x; ln n/n) + 1/n)`` at one n."""
    d = _d_value(f, x, d)
    (_, value, term), = _theorem1_rows(f, x, [int(n)], d, tol, omega_grid)
    return abs(value - 2 * complex(d)) / term


def theorem1_experiment(f, x, n_list, d=None, tol=1e-10, omega_grid=1 << 14, constant=None):
    """``sigma_n(f;x) + s_n(F_x;0)`` against ``2d`` for each ``n``.

    The bound is ``C (omega(F_x; ln n/n) + 1/n)`` with ``C`` fitted at the
    smallest ``n`` (or supplied as ``constant``) and then held fixed.
    """
    n_list = sorted(int(n) for n in n_list)
    if not n_list or n_list[0] < 2:
        raise ValueError("n_list needs values >= 2")
    d = _d_value(f, x, d)
    rows = _theorem1_rows(f, x, n_list, d, tol, omega_grid)
    ref = 2 * complex(d)
    C = constant
    if C is None:
        n0, v0, t0 = rows[0]
        C = abs(v0 - ref) / t0
    return [_record("theorem1", n, value, ref, C * term * (1 + _FIT_SLACK))
            for n, value, term in rows]


def fejer_rate_check(F, n_list, tol=1e-10, omega=None, omega_grid=1 << 16, constant=None):
    """``|F(0) - sigma_n(F;0)|`` against ``c omega(F; ln(n+1)/(n+1))``."""
    n_list = sorted(int(n) for n in n_list)
    fourier_coefficients(F, n_list[-1] + 1, tol)
    F0 = complex(F(np.array(0.0)))
    rows = []
    for n in n_list:
        value = fejer_mean(F, n, 0.0, tol)
        h = math.log(n + 1) / (n + 1)
        w = omega(h) if omega is not None else modulus_of_continuity(F, h, omega_grid)
        rows.append((n, value, w))
    c = constant
    if c is None:
        n0, v0, w0 = rows[0]
        c = abs(v0 - F0) / w0 if w0 > 0 else 0.0
    return [_record("fejer_rate", n, v, F0, c * w * (1 + _FIT_SLACK) + 1e-12)
            for n, v, w in rows]


def divergence_experiment(params=CounterexampleParams(), inner="zero", margin=0.01,
                          constant=None, tol=1e-10, omega_grid=1 << 16, cap=20_000):
    """Partial sums of F0 and Fejer means of f0 at 0 along ``n_k``.

    Records ``divergence_s`` hold ``s_{n_k}(F0;0)`` with the previous level
    as reference; they are ``diverging`` when every increment exceeds
    ``margin`` and the Fejer means drift the opposite way. Records
    ``divergence_sum`` hold ``sigma + s`` against ``2d = 0`` with the
    bound ``C (omega(F0; ln n/n) + 1/n)``; ``constant`` is that
    ``C`` (fitted elsewhere), without it the bound is left undefined.
    """
    F0, f0 = counterexample_pair(params, cap=cap, inner=inner)
    K = int(params.K)
    n = params.frequencies
    levels = list(range(1, K + 1)) if K else [0]
    top = n[levels[-1]]
    fourier_coefficients(F0, top + 1, tol)
    fourier_coefficients(f0, top + 1, tol)
    s = [partial_sum(F0, n[k], 0.0, tol).real for k in levels]
    sig = [fejer_mean(f0, n[k], 0.0, tol).real for k in levels]
    ds = np.diff([0.0] + s)
    dsig = np.diff([0.0] + sig)
    if K >= 2:
        rising = bool(np.all(ds[1:] > margin)) and s[0] > 0
        opposite = bool(np.all(dsig[1:] < 0))
        status_s = "diverging" if rising and opposite else "failed"
    else:
        status_s = "trend_ok" if all(abs(v) <= tol for v in s) else "failed"
    out = []
    prev = 0.0
    for k, sv in zip(levels, s):
        out.append(_record("divergence_s", n[k], sv, prev, None, status_s, error=sv - prev))
        prev = sv
    for k, sv, gv in zip(levels, s, sig):
        total = sv + gv
        if constant is None:
            bound = None
            status = "trend_ok"
        else:
            h = math.log(n[k]) / n[k] if n[k] > 1 else math.pi
            w = modulus_of_continuity(F0, h, omega_grid) if K else 0.0
            bound = constant * (w + 1.0 / n[k])
            status = None
        out.append(_record("divergence_sum", n[k], total, 0.0, bound, status))
    for k, gv in zip(levels, sig):
        out.append(_record("divergence_sigma", n[k], gv, 0.0, None, status_s))
    return out


def _pieces_integral(kernel, g, delta):
    pieces = g.metadata.get("pieces")
    a = np.array([p[0] for p in pieces])
    b = np.array([p[1] for p in pieces])
    v = np.array([p[2] for p in pieces])
    keep = a < delta
    a, b, v = a[keep], np.minimum(b[keep], delta), v[keep]
    prim = np.asarray(kernel.antiderivative(np.concatenate([a, b])))
    body = np.sum(v * (prim[a.size:] - prim[:a.size]))
    # below the lowest listed jump: K is flat on that scale, use K(0) * int g
    bottom = min(p[0] for p in pieces) if pieces else 0.0
    tail = g.metadata.get("tail_below_floor", 0.0) if bottom < delta else 0.0
    return body + np.sum(kernel.coefficients) * tail


def _kernel_integral(kernel, g, delta, tol):
    if g.metadata.get("pieces"):
        return complex(_pieces_integral(kernel, g, delta))
    n = kernel.degree
    width = math.pi / (4.0 * max(n, 1))
    inner = sorted({p for p in (*g.piece_breaks, *g.singular_points) if 0 < p < delta})
    edges = [0.0, *inner, delta]
    parts = []
    for p, q in zip(edges[:-1], edges[1:]):
        m = max(1, int(math.ceil((q - p) / width)))
        parts.append(np.linspace(p, q, m + 1)[:-1])
    parts.append([delta])
    val, _ = adaptive_integrate(
        lambda t: np.asarray(g.evaluator(t), dtype=complex) * kernel(t), np.concatenate(parts),
        tol=tol)
    return complex(val)


def necessary_condition_experiment(fam, g, delta, n_list, tol=0.05, quad_tol=1e-10):
    """``int_0^delta g K_n`` for each ``n``.

    For a witness with listed pieces the integral is exact through the
    kernel's antiderivative. Status is ``trend_ok`` when the magnitudes end
    below ``tol`` and do not grow from the first to the last ``n``.
    """
    if not 0 < delta <= math.pi:
        raise ValueError("delta must lie in (0, pi]")
    n_list = sorted(int(n) for n in n_list)
    values = [_kernel_integral(kernel_of(fam, n), g, delta, quad_tol) for n in n_list]
    mags = np.abs(values)
    ok = mags[-1] <= tol and mags[-1] <= mags[0] + 1e-15
    status = "trend_ok" if ok else "failed"
    return [_record(f"necessary[{fam.label}]", n, v, 0.0, None, status)
            for n, v in zip(n_list, values)]


def lebesgue_method_identity(f, x, eps, window=None, max_window=200_000, bound=1e-3,
                             tol=1e-12):
    """Lebesgue-method mean against the symmetric difference quotient of F.

    ``value = sum_{|k|<=N} sinc(k eps) f_k e^{ikx}`` and
    ``reference = (F(x+eps) - F(x-eps)) / (2 eps)``.
    """
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    N = int(math.ceil(200.0 / eps)) if window is None else int(window)
    if N > max_window:
        raise ValueError(f"truncation window {N} exceeds the limit {max_window}")
    fam = catalog_family("lebesgue", {"eps": eps, "cutoff": N * eps * (1 - 1e-12)})
    value = linear_means(f, fam, 0, x, tol)
    reference = f.integral(x - eps, x + eps) / (2 * eps)
    return _record("lebesgue_identity", N, value, reference, bound)


def salem_checks(f, x, n_list, grid=512, tol=1e-11, mean_tol=1e-9):
    """Bohr-Bernstein inequality and the Salem-type residual for mean-zero f.

    ``bohr_bernstein`` records compare ``sup|F - s_n F|`` (value) with
    ``pi/(2n+2) sup|f - s_n f|`` (bound) on a ``grid``-point mesh.
    ``salem_residual`` records carry ``r_n`` as value and ``n |r_n|`` as
    error, with status ``trend_ok`` when ``n |r_n|`` is non-increasing.
    """
    c0 = fourier_coefficients(f, 0, tol)[0]
    if abs(c0) > mean_tol:
        raise ValueError(f"f has nonzero mean {c0!r}; its primitive is not periodic")
    n_list = sorted(int(n) for n in n_list)
    F = PeriodicFunction(lambda t: f.integral_from(0.0, t, tol), piece_breaks=f.piece_breaks,
                         label=f"primitive[{f.label}]", real=f.real,
                         max_frequency=f.max_frequency)
    top = max(n_list) + 1
    fourier_coefficients(f, top, tol)
    fourier_coefficients(F, top, tol)
    t = np.linspace(-math.pi, math.pi, grid, endpoint=False)
    ft, Ft = f(t), F(t)
    out = []
    for n in n_list:
        lhs = float(np.max(np.abs(Ft - partial_sum(F, n, t, tol))))
        rhs = math.pi / (2 * n + 2) * float(np.max(np.abs(ft - partial_sum(f, n, t, tol))))
        status = "within_bound" if lhs <= rhs + 1e-9 else "failed"
        out.append(ExperimentRecord("bohr_bernstein", n, lhs, 0.0, lhs, rhs, status))
    residuals = []
    for n in n_list:
        if n < 1:
            continue
        shift = x + math.pi / (2 * n)
        r = ((complex(F(np.array(shift))) - partial_sum(F, n, shift, tol))
             - (complex(f(np.array(x))) - partial_sum(f, n, x, tol)) / n)
        residuals.append((n, r))
    scaled = [n * abs(r) for n, r in residuals]
    trend = all(b <= a + 1e-10 for a, b in zip(scaled, scaled[1:]))
    status = "trend_ok" if trend else "failed"
    for (n, r), e in zip(residuals, scaled):
        out.append(ExperimentRecord("salem_residual", n, r, 0.0, e, None, status))
    return out


# -- convergence proxies --

def converges_over(values, tol):
    """Finite proxy for convergence along an n-list.

    The last three values are pairwise within ``tol`` and the successive
    differences do not grow.
    """
    v = np.asarray(values, dtype=complex)
    if v.size < 3:
        raise ValueError("need at least three values")
    last = v[-3:]
    close = max(abs(a - b) for a in last for b in last) <= tol
    steps = np.abs(np.diff(v))
    # steps at roundoff level count as settled
    settling = bool(steps[-1] <= steps[-2] + 1e-12)
    return bool(close and settling)


def convergence_equivalence(f, x, n_list, tol=1e-2, d=None, qtol=1e-10):
    """``(sigma converges, s_n(F_x;0) converges)`` over ``n_list``."""
    d = _d_value(f, x, d)
    Fx = averaged_primitive(f, x, value_at_zero=d)
    n_list = sorted(int(n) for n in n_list)
    sig = [fejer_mean(f, n, x, qtol) for n in n_list]
    s = [partial_sum(Fx, n, 0.0, qtol) for n in n_list]
    return converges_over(sig, tol), converges_over(s, tol)


def l_point_settling(f, x, n_list, tol=1e-2, qtol=1e-10):
    """At an l-point, ``s_n(F_x;0)`` settles; returns (is l-point, settles)."""
    c = classify_point(f, x)
    if c.verdict_d != "yes":
        return False, False
    Fx = averaged_primitive(f, x, value_at_zero=c.d_estimate)
    s = [partial_sum(Fx, n, 0.0, qtol) for n in sorted(n_list)]
    return c.verdict_l == "yes", converges_over(s, tol)


def method_comparison(f, x, families, n_list, reference=0.0, tol=1e-10):
    """Means of several families at ``x``; records against ``reference``."""
    out = []
    for fam in families:
        for n in sorted(n_list):
            v = linear_means(f, fam, n, x, tol)
            out.append(_record(f"means[{fam.label}]", n, v, reference, None, "trend_ok"))
    return out
