"""Wiener-algebra diagnostics for multiplier functions.

``phi`` is in A(R) when ``phi(x) = int g(y) exp(-ixy) dy`` with ``g`` in L1;
the norm is ``||g||_1``. Everything here is numerical evidence with
three-valued verdicts, not a certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .kernels import TrigPolynomial, _evaluate, _next_pow2, l1_norm
from .lab import ExperimentRecord
from .multipliers import MultiplierFunction, kernel_of
from .quadrature import exp_sum_to_grid, panel_rule

__all__ = [
    "ADensityReport",
    "Theorem2Report",
    "a_density",
    "lemma_quantities",
    "phi_n_family_norms",
    "theorem2_report",
]

TWO_PI = 2.0 * math.pi
_DAMPING_WIDTH = 15.0


@dataclass(frozen=True)
class ADensityReport:
    """Sampled density ``g`` with ``phi(x) = int g(y) e^{-ixy} dy``.

    ``l1_norm_estimate`` is the grid integral of ``|g|`` plus ``tail_mass``,
    the extrapolated mass outside the grid (``inf`` when the tail does not
    look integrable). ``in_A`` is ``"yes"``, ``"no"`` or ``"inconclusive"``.
    """

    y: np.ndarray
    density: np.ndarray
    l1_norm_estimate: float
    grid_l1: float
    tail_mass: float
    tail_method: str
    tail_exponent: float
    reconstruction_error: float
    in_A: str
    damped: bool = False

    @property
    def status(self):
        return "ok" if self.in_A == "yes" else self.in_A


def _support_cutoff(phi, rel=1e-17):
    if math.isfinite(phi.support_radius):
        return phi.support_radius
    probe0 = np.linspace(-4.0, 4.0, 801)
    scale = max(float(np.max(np.abs(phi(probe0)))), 1e-300)
    x = 1.0
    while x < 1e5:
        probe = x * np.linspace(1.0, 2.0, 65)
        tail = max(np.max(np.abs(phi(probe))), np.max(np.abs(phi(-probe))))
        if tail < rel * scale:
            return x
        x *= 1.2
    raise ValueError(f"{phi.label}: no cutoff found; phi does not decay fast enough")


def _damped(phi):
    X = _DAMPING_WIDTH

    def ev(x):
        x = np.asarray(x, dtype=float)
        return np.asarray(phi.evaluator(x)) * np.exp(-(x / X) ** 2)

    return MultiplierFunction(ev, phi.support_radius, phi.value_at_zero, None,
                              phi.nonsmooth_points, f"damped[{phi.label}]", True, phi.real)


def _x_nodes(phi, half_width):
    R = _support_cutoff(phi)
    breaks = {-R, R, 0.0}
    breaks |= {p for p in phi.nonsmooth_points if -R < p < R}
    width = min(0.25, 3.0 * math.pi / half_width)
    graded = [p for p in phi.nonsmooth_points if -R <= p <= R]
    x, w = panel_rule(sorted(breaks), width, order=20, graded=graded, grade_floor=1e-12)
    return x, w


def _simpson_pieces(y_parts, g_parts):
    return sum(float(simpson(np.abs(g), x=y)) for y, g in zip(y_parts, g_parts))


def a_density(phi, grid_half_width=200.0, grid_step=0.01, refine=4, refine_radius=10.0,
              n_test=16, threshold=1e-2):
    """Density of ``phi`` in the Wiener algebra and its L1 norm.

    ``g(y) = (1/2pi) int phi(x) e^{ixy} dx`` is sampled on ``[-Y, Y]``
    (``Y = grid_half_width``) with step ``grid_step``, refined ``refine``
    times on ``|y| <= refine_radius``. A phi that is not absolutely
    integrable (sinc) is multiplied by a wide Gaussian first, which keeps
    ``||g||_1`` unchanged whenever ``g >= 0``.

    The tail mass outside the grid is exact when ``g`` keeps one sign on the
    outer decade, through ``int_{|y|>Y} g = phi(0) - (1/pi) int phi(x)
    sin(Yx)/x dx``. Otherwise it is extrapolated from a power law fitted to
    log-binned masses of ``|g|`` on the outer decade; a fitted decay no
    faster than ``|y|^-1.1`` marks the tail as divergent.
    """
    if grid_half_width <= 0 or grid_step <= 0 or refine < 1:
        raise ValueError("grid parameters must be positive")
    damped = not phi.integrable
    work = _damped(phi) if damped else phi
    Y = float(grid_half_width)
    x, w = _x_nodes(work, Y)
    vals = np.asarray(work(x), dtype=complex) * w / TWO_PI

    y0 = min(refine_radius, Y)
    n_coarse = int(round(Y / grid_step))
    n_fine = int(round(y0 / grid_step)) * refine
    fine_step = y0 / n_fine
    g_fine = exp_sum_to_grid(x, vals, -y0, fine_step, 2 * n_fine + 1)
    y_fine = -y0 + fine_step * np.arange(2 * n_fine + 1)
    g_coarse = exp_sum_to_grid(x, vals, -Y, grid_step, 2 * n_coarse + 1)
    y_coarse = -Y + grid_step * np.arange(2 * n_coarse + 1)
    m = int(round((Y - y0) / grid_step))
    left = slice(0, m + 1)
    right = slice(2 * n_coarse - m, 2 * n_coarse + 1)
    y_parts = [y_coarse[left], y_fine, y_coarse[right]]
    g_parts = [g_coarse[left], g_fine, g_coarse[right]]
    if m == 0:
        y_parts, g_parts = [y_fine], [g_fine]
    grid_l1 = _simpson_pieces(y_parts, g_parts)

    y = np.concatenate([y_parts[0][:-1], y_parts[1], y_parts[2][1:]] if m else y_parts)
    g = np.concatenate([g_parts[0][:-1], g_parts[1], g_parts[2][1:]] if m else g_parts)
    real_g = bool(np.max(np.abs(g.imag)) <= 1e-12 * max(np.max(np.abs(g)), 1e-300))
    g_out = g.real if real_g and work.real else g

    tail, method, expo = _tail(work, x, w, y, g, Y, real_g, grid_l1)
    recon = _reconstruction(work, y_parts, g_parts, n_test)
    l1 = grid_l1 + tail
    if not math.isfinite(tail):
        in_A = "no"
    elif recon > threshold:
        in_A = "inconclusive"
    else:
        in_A = "yes"
    return ADensityReport(y, g_out, l1, grid_l1, tail, method, expo, recon, in_A, damped)


def _tail(phi, x, w, y, g, Y, real_g, grid_l1):
    outer = np.abs(y) >= Y / 10
    mass_outer = float(simpson(np.abs(g[outer & (y > 0)]), x=y[outer & (y > 0)])
                       + simpson(np.abs(g[outer & (y < 0)]), x=y[outer & (y < 0)]))
    if mass_outer <= 1e-10 * max(grid_l1, 1e-300):
        return 0.0, "negligible", -math.inf
    gr = g.real[outer]
    scale = float(np.max(np.abs(g)))
    if real_g and phi.real and (np.all(gr >= -1e-13 * scale) or np.all(gr <= 1e-13 * scale)):
        phi0 = float(np.real(phi(np.array(0.0))))
        inside = float(np.sum(np.real(phi(x)) * w * np.sin(Y * x) / x)) / math.pi
        sgn = 1.0 if np.all(gr >= -1e-13 * scale) else -1.0
        return max(sgn * (phi0 - inside), 0.0), "signed_identity", math.nan
    # power law on log-binned masses over the outer decade
    edges = np.geomspace(Y / 10, Y, 11)
    masses = []
    centers = []
    for a, b in zip(edges[:-1], edges[1:]):
        mass = 0.0
        for sgn in (1.0, -1.0):
            sel = (sgn * y >= a) & (sgn * y <= b)
            ys, gs = sgn * y[sel], np.abs(g[sel])
            order = np.argsort(ys)
            mass += float(simpson(gs[order], x=ys[order]))
        masses.append(mass)
        centers.append(math.sqrt(a * b))
    masses = np.array(masses)
    if np.any(masses <= 0):
        return 0.0, "negligible", -math.inf
    slope, intercept = np.polyfit(np.log(centers), np.log(masses), 1)
    ratio = edges[1] / edges[0]
    if slope >= -0.1:
        return math.inf, "power_law", float(slope - 1)
    # masses in successive log-bins beyond Y form a geometric series
    first = math.exp(intercept) * (Y * math.sqrt(ratio)) ** slope
    tail = first / (1 - ratio ** slope)
    return float(tail), "power_law", float(slope - 1)


def _reconstruction(phi, y_parts, g_parts, n_test):
    xs = np.linspace(-2.0, 2.0, n_test)
    approx = np.zeros(n_test, dtype=complex)
    for y, g in zip(y_parts, g_parts):
        wts = _simpson_weights(y)
        approx += np.exp(-1j * np.outer(xs, y)) @ (wts * g)
    exact = np.asarray(phi(xs), dtype=complex)
    return float(np.max(np.abs(approx - exact)))


def _simpson_weights(y):
    n = y.size
    h = (y[-1] - y[0]) / (n - 1)
    w = np.ones(n)
    if n % 2 == 1 and n >= 3:
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w * h / 3.0
    w[0] = w[-1] = 0.5
    return w * h


# -- sufficient-condition hypotheses --

@dataclass(frozen=True)
class Theorem2Report:
    phi0_is_one: bool
    bv_near_zero: tuple
    x_phi_in_L1: tuple
    phi_in_A: ADensityReport
    x_phi_prime_in_A_and_L1: tuple
    decay_o_over_x: tuple
    overall: str
    reasons: tuple = field(default_factory=tuple)

    def to_dict(self):
        a = self.phi_in_A
        b, l1 = self.x_phi_prime_in_A_and_L1
        return {
            "overall": self.overall,
            "reasons": list(self.reasons),
            "phi0_is_one": self.phi0_is_one,
            "bv_near_zero": {"delta": self.bv_near_zero[0], "variation": self.bv_near_zero[1],
                             "finite": self.bv_near_zero[2]},
            "x_phi_in_L1": {"integral": self.x_phi_in_L1[0], "converged": self.x_phi_in_L1[1]},
            "phi_in_A": _density_summary(a),
            "x_phi_prime_in_A": _density_summary(b),
            "x_phi_prime_L1": {"integral": l1[0], "converged": l1[1]},
            "decay_o_over_x": [[x, v] for x, v in self.decay_o_over_x],
        }


def _density_summary(r):
    return {"l1_norm_estimate": r.l1_norm_estimate, "grid_l1": r.grid_l1,
            "tail_mass": r.tail_mass, "tail_method": r.tail_method,
            "tail_exponent": r.tail_exponent, "reconstruction_error": r.reconstruction_error,
            "in_A": r.in_A, "damped": r.damped}


def _total_variation(phi, delta):
    inner = sorted({p for p in phi.nonsmooth_points if -delta < p < delta})
    tv = []
    for j in range(4, 17):
        t = np.unique(np.concatenate([np.linspace(-delta, delta, 2 ** j + 1), inner]))
        tv.append(float(np.sum(np.abs(np.diff(np.asarray(phi(t), dtype=complex))))))
    finite = abs(tv[-1] - tv[-2]) <= 1e-6 * max(1.0, tv[-1])
    return delta, tv[-1], bool(finite)


def _abs_integral(func, phi, start=None):
    """``int_R |func|`` with doubling cutoffs; returns (value, converged)."""
    if math.isfinite(phi.support_radius):
        R = phi.support_radius
        breaks = sorted({-R, R, 0.0, *[p for p in phi.nonsmooth_points if -R < p < R]})
        x, w = panel_rule(breaks, 0.05, order=20, graded=phi.nonsmooth_points,
                          grade_floor=1e-12)
        return float(np.sum(np.abs(func(x)) * w)), True
    X = start or 8.0
    prev = None
    for _ in range(14):
        breaks = sorted({-X, X, 0.0, *[p for p in phi.nonsmooth_points if -X < p < X]})
        x, w = panel_rule(breaks, 0.05, order=20, graded=phi.nonsmooth_points,
                          grade_floor=1e-12)
        val = float(np.sum(np.abs(func(x)) * w))
        if prev is not None and abs(val - prev) <= 1e-9 * max(1.0, val):
            return val, True
        prev = val
        X *= 2
    return prev, False


def _x_phi_prime(phi):
    def ev(x):
        x = np.asarray(x, dtype=float)
        return x * np.asarray(phi.prime(x))

    return MultiplierFunction(ev, phi.support_radius, 0.0, None,
                              tuple(sorted({*phi.nonsmooth_points, 0.0})),
                              f"x*d[{phi.label}]", phi.integrable, phi.real)


def theorem2_report(phi, delta=0.5, **density_kw):
    """Check the hypotheses of the d-point sufficient condition for ``phi``.

    Runs: ``phi(0) = 1``; bounded variation on ``[-delta, delta]``;
    ``x phi`` in L1; ``phi`` in A(R); ``x phi'`` in A(R) and L1; and the
    decay profile ``x |phi(x)|`` on a geometric x-grid.
    """
    if phi.derivative is None:
        raise ValueError(f"{phi.label} needs a derivative evaluator")
    reasons = []
    inconclusive = []
    phi0 = complex(phi(np.array(0.0)))
    one = abs(phi0 - 1) <= 1e-12
    if not one:
        reasons.append(f"phi(0) = {phi0} != 1")
    bv = _total_variation(phi, delta)
    if not bv[2]:
        reasons.append("phi has unbounded variation near 0")
    xphi = _abs_integral(lambda x: x * np.asarray(phi(x), dtype=complex), phi)
    if not xphi[1]:
        reasons.append("x phi(x) not in L1(R)")
    dens = a_density(phi, **density_kw)
    if dens.in_A == "no":
        reasons.append("phi not in A(R)")
    elif dens.in_A == "inconclusive":
        inconclusive.append("phi in A(R)")
    xp = _x_phi_prime(phi)
    dens_xp = a_density(xp, **density_kw)
    if dens_xp.in_A == "no":
        reasons.append("x phi'(x) not in A(R)")
    elif dens_xp.in_A == "inconclusive":
        inconclusive.append("x phi'(x) in A(R)")
    xp_l1 = _abs_integral(lambda x: np.asarray(xp(x), dtype=complex), xp)
    if not xp_l1[1]:
        reasons.append("x phi'(x) not in L1(R)")
    xs = 2.0 ** np.arange(0, 7)
    decay = tuple((float(a), float(a * abs(complex(phi(np.array(a)))))) for a in xs)
    tail_vals = [v for _, v in decay]
    if not (tail_vals[-1] <= 1e-12 or tail_vals[-1] < max(tail_vals[:3])):
        inconclusive.append("x phi(x) = o(1) profile")
    if reasons:
        overall = "violated"
    elif inconclusive:
        overall = "inconclusive"
        reasons = [f"undecided: {r}" for r in inconclusive]
    else:
        overall = "satisfied"
    return Theorem2Report(one, bv, xphi, dens, (dens_xp, xp_l1), decay, overall,
                          tuple(reasons))


# -- lemma_quantities --

def _t_kprime_integral(K, lo, hi):
    """``int_lo^hi |t K'(t)| dt`` for a real kernel, exact between sign changes.

    On an interval where ``t K'`` keeps its sign, ``int t K' = t K - P`` with
    ``P`` the antiderivative of ``K``.
    """
    dK = K.derivative()
    n = K.degree
    size = _next_pow2(16 * (n + 1))
    step = TWO_PI / size
    t = -math.pi + step * np.arange(size + 1)
    v = np.append(dK.samples(size).real, dK.samples(size).real[0])
    sel = (t >= lo) & (t <= hi)
    ts, vs = t[sel], v[sel]
    change = np.nonzero(np.sign(vs[:-1]) * np.sign(vs[1:]) < 0)[0]
    a, b = ts[change], ts[change + 1]
    z = a + (b - a) * vs[change] / (vs[change] - vs[change + 1])
    ddc = 1j * dK.frequencies * dK.coefficients
    for _ in range(4):
        if not z.size:
            break
        val = _evaluate(dK.coefficients, n, z).real
        der = _evaluate(ddc, n, z).real
        ok = np.abs(der) > 0
        z = np.clip(z - np.where(ok, val / np.where(ok, der, 1.0), 0.0), a, b)
    pts = np.unique(np.concatenate([[lo, hi, 0.0] if lo < 0 < hi else [lo, hi], z,
                                    ts[1:-1][vs[1:-1] == 0]]))
    prim = pts * np.asarray(K(pts), dtype=float) - np.asarray(K.antiderivative(pts), dtype=float)
    return float(np.sum(np.abs(np.diff(prim))))


def _t_kprime_integral_complex(K, lo, hi):
    dK = K.derivative()
    n = K.degree
    width = math.pi / (8.0 * (n + 1))
    breaks = [lo, 0.0, hi] if lo < 0 < hi else [lo, hi]
    x, w = panel_rule(breaks, width, order=20)
    return float(np.sum(np.abs(x * dK(x)) * w))


def lemma_quantities(fam, n_list, delta=math.pi):
    """Per-n multiplier and kernel quantities behind the sufficient conditions.

    Records ``delta_variation`` (``sum_k |lambda_k - lambda_{k+1}|``),
    ``t_kprime`` (``int_{-delta}^{delta} |t K_n'|``) and ``lemma3`` with
    value ``int_{-pi}^{pi} |t K_n'|`` and bound
    ``pi/2 int |K_n| + pi/2 int |sum_k k (lambda_k - lambda_{k+1}) e^{ikt}|``.
    """
    if not 0 < delta <= math.pi:
        raise ValueError("delta must lie in (0, pi]")
    out = []
    for n in sorted(int(v) for v in n_list):
        K = kernel_of(fam, n)
        lam = K.coefficients
        N = K.degree
        padded = np.concatenate([[0.0], lam, [0.0]])
        dlam = padded[1:-1] - padded[2:]          # lambda_k - lambda_{k+1}, k = -N..N
        dlam_full = np.concatenate([[padded[0] - padded[1]], dlam])  # k = -N-1..N
        var = float(np.sum(np.abs(padded[:-1] - padded[1:])))
        real = K.is_real()
        tk = (_t_kprime_integral if real else _t_kprime_integral_complex)
        local = tk(K, -delta, delta)
        lhs = local if delta == math.pi else tk(K, -math.pi, math.pi)
        k = np.arange(-N - 1, N + 1)
        kd = k * dlam_full
        # pad to a symmetric window -(N+1)..(N+1)
        poly = TrigPolynomial(np.concatenate([kd, [0.0]]), f"kdelta[{fam.label}]_{n}")
        rhs = 0.5 * math.pi * TWO_PI * (l1_norm(K) + l1_norm(poly))
        out.append(ExperimentRecord(f"delta_variation[{fam.label}]", n, var, 0.0, var, None,
                                    "trend_ok"))
        out.append(ExperimentRecord(f"t_kprime[{fam.label}]", n, local, 0.0, local, None,
                                    "trend_ok"))
        status = "within_bound" if lhs <= rhs * (1 + 1e-12) else "failed"
        out.append(ExperimentRecord(f"lemma3[{fam.label}]", n, lhs, rhs, abs(lhs - rhs), rhs,
                                    status))
    return out


# -- phi_n family --

def _density_derivative_bound(phi, **density_kw):
    """``int |y g'(y)| + int |g|`` with g' from centred differences.

    The derivative is checked against the same difference taken with twice
    the step (Richardson); a large disagreement makes the bound unreliable.
    """
    rep = a_density(phi, **density_kw)
    y, g = rep.y, rep.density
    h = np.diff(y)
    dg = np.gradient(g, y)
    # coarser difference on every other node
    y2, g2 = y[::2], g[::2]
    dg2 = np.interp(y, y2, np.gradient(g2, y2).real) + 1j * np.interp(
        y, y2, np.gradient(g2, y2).imag)
    rich = float(np.max(np.abs(dg - dg2))) / max(float(np.max(np.abs(dg))), 1e-300)
    del h
    wts = np.zeros(y.size)
    wts[1:] += 0.5 * np.diff(y)
    wts[:-1] += 0.5 * np.diff(y)
    bound = float(np.sum(np.abs(y * dg) * wts)) + rep.l1_norm_estimate
    return bound, rich, rep


def phi_n_family_norms(phi, n_list, tol=1e-3, check=True, **density_kw):
    """A-norms of ``phi_n(x) = n x (phi(x) - phi(x + 1/n))`` against the
    n-independent bound ``int |y g'| + int |g|``.
    """
    if check:
        rep = theorem2_report(phi, **density_kw)
        if rep.overall == "violated":
            raise ValueError(f"{phi.label} fails the hypotheses: {', '.join(rep.reasons)}")
    bound, rich, _ = _density_derivative_bound(phi, **density_kw)
    status_default = "within_bound" if rich <= 0.05 else "failed"
    out = []
    for n in sorted(int(v) for v in n_list):
        shift = 1.0 / n

        def ev(x, shift=shift, n=n):
            x = np.asarray(x, dtype=float)
            return n * x * (np.asarray(phi(x), dtype=complex) - np.asarray(phi(x + shift),
                                                                           dtype=complex))

        radius = phi.support_radius + shift if math.isfinite(phi.support_radius) else math.inf
        pts = {*phi.nonsmooth_points, *[p - shift for p in phi.nonsmooth_points]}
        if math.isfinite(phi.support_radius):
            pts |= {phi.support_radius, -phi.support_radius,
                    phi.support_radius - shift, -phi.support_radius - shift}
        phin = MultiplierFunction(ev, radius, 0.0, None, tuple(sorted(pts)),
                                  f"phi_{n}[{phi.label}]", phi.integrable, phi.real)
        norm = a_density(phin, **density_kw).l1_norm_estimate
        lim = bound * (1 + tol)
        status = status_default if norm <= lim else "failed"
        out.append(ExperimentRecord(f"phi_n_norm[{phi.label}]", n, norm, 0.0, norm, lim, status))
    return out
