"""Regenerate the frozen oracle values in ``tests/oracle_values.py``.

Independent of the package: mpmath quadrature between the zeros of the
Dirichlet kernel, and closed-form piecewise integrals for the Fourier
coefficients of the truncated counterexample F0.

    python3 tests/oracles/make_oracles.py
"""

import mpmath as mp

mp.mp.dps = 30


def dirichlet_l1(n):
    # zeros of sin((n+1/2)t) on (0, pi]
    pts = [mp.mpf(0)] + [2 * mp.pi * j / (2 * n + 1) for j in range(1, n + 1)] + [mp.pi]
    d = lambda t: mp.sin((n + mp.mpf(1) / 2) * t) / (2 * mp.sin(t / 2)) if t else n + mp.mpf(1) / 2
    total = mp.fsum(abs(mp.quad(d, [a, b])) for a, b in zip(pts[:-1], pts[1:]))
    return 2 * total / (2 * mp.pi)


def f0_levels(q, p, K):
    n = [q ** (k ** p) for k in range(K + 1)]
    a = [0] + [mp.mpf(k) ** mp.mpf(-1.5) for k in range(1, K + 1)]
    return n, a


def sin_cos_integral(m, k, lo, hi):
    """int_lo^hi sin(m u) cos(k u) du."""
    def prim(u):
        out = -mp.cos((m + k) * u) / (2 * (m + k))
        if m != k:
            out -= mp.cos((m - k) * u) / (2 * (m - k))
        else:
            out += 0  # sin(mu)cos(mu) = sin(2mu)/2 handled by the first term
        return out
    return prim(hi) - prim(lo)


def partial_sum_F0_at_zero(q, p, K, N):
    """s_N(F0; 0) for the zero-inside truncation (F0 even)."""
    n, a = f0_levels(q, p, K)
    mp.mp.dps = 20
    total = mp.mpf(0)
    for k in range(0, N + 1):
        ck = mp.mpf(0)
        for lv in range(1, K + 1):
            ck += a[lv] * sin_cos_integral(n[lv], k, mp.pi / n[lv], mp.pi / n[lv - 1])
        ck /= mp.pi  # hat F_k = (1/pi) int_0^pi F0 cos(ku) du
        total += ck if k == 0 else 2 * ck
    mp.mp.dps = 30
    return total


def theorem1_cos_sin2(n):
    """sigma_n(f;0) + s_n(F_0;0) for f = cos t + sin 2t.

    sigma_n(f;0) = n/(n+1); the odd part (1 - cos 2t)/(2t) of F_0 adds
    nothing at 0, and the even part sin(t)/t is summed against 2 D_n.
    """
    kern = lambda t: mp.sin(t) / t * mp.sin((n + mp.mpf(1) / 2) * t) / mp.sin(t / 2) if t else 2 * n + 1
    pts = [mp.pi * j / (2 * n + 1) for j in range(0, 2 * n + 2)]
    s = mp.quad(kern, pts) / mp.pi
    return mp.mpf(n) / (n + 1) + s


def fejer_abs_at_zero(n):
    """sigma_n(|t|; 0) = pi/2 - (4/pi) sum_{odd k<=n} (1 - k/(n+1)) / k^2."""
    return mp.pi / 2 - 4 / mp.pi * mp.fsum((1 - mp.mpf(k) / (n + 1)) / k ** 2
                                           for k in range(1, n + 1, 2))


if __name__ == "__main__":
    print("DIRICHLET_HALF_L1 = {")
    for n in (1, 4, 16, 32, 64, 128):
        print(f"    {n}: {mp.nstr(dirichlet_l1(n), 17)},")
    print("}")
    print("F0_PARTIAL_SUMS = {")
    for (q, p, K) in ((3, 2, 3), (3, 3, 2)):
        n, _ = f0_levels(q, p, K)
        vals = [mp.nstr(partial_sum_F0_at_zero(q, p, K, n[k]), 15) for k in range(1, K + 1)]
        print(f"    ({q}, {p}, {K}): ({', '.join(vals)}),")
    print("}")
    print("THEOREM1_COS_SIN2 = {")
    for n in (8, 64, 256):
        print(f"    {n}: {mp.nstr(theorem1_cos_sin2(n), 17)},")
    print("}")
    print("FEJER_ABS_AT_ZERO = {")
    for n in (8, 64, 512):
        print(f"    {n}: {mp.nstr(fejer_abs_at_zero(n), 17)},")
    print("}")
