"""Descriptor strings for catalog functions, methods and multiplier functions.

Grammar: ``term[+term...]`` for functions, each term ``[coef*]name[:k=v,...]``;
``name[:k=v,...]`` for methods and multipliers. Examples::

    cos+0.5*sin:k=2
    oscillating_g:scheme=dyadic
    counterexample_f0:q=3,p=2,K=2
    riesz:alpha=2,beta=2
    corrected:rogosinski
"""

from __future__ import annotations

import math

import numpy as np

from .multipliers import (
    FAMILY_NAMES,
    MULTIPLIER_NAMES,
    catalog_family,
    endpoint_corrected,
    multiplier_function,
)
from .periodic import PeriodicFunction
from .points import CounterexampleParams, counterexample_pair, oscillating_witness

__all__ = [
    "DescriptorError",
    "FUNCTION_NAMES",
    "parse_function",
    "parse_method",
    "parse_multiplier",
]


class DescriptorError(ValueError):
    """Bad descriptor; ``key`` names the offending name or parameter."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


def _split(desc):
    desc = desc.strip()
    if not desc:
        raise DescriptorError("<empty>", "empty descriptor")
    name, _, rest = desc.partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        if not eq or not key.strip():
            raise DescriptorError(item, "expected key=value")
        params[key.strip()] = value.strip()
    return name.strip(), params


def _number(name, params, key, default, kind=float):
    if key not in params:
        return default
    raw = params.pop(key)
    try:
        v = float(raw)
    except ValueError:
        raise DescriptorError(key, f"{name}: expected a number, got {raw!r}") from None
    if kind is int:
        if v != int(v):
            raise DescriptorError(key, f"{name}: expected an integer, got {raw!r}")
        return int(v)
    return v


def _no_leftovers(name, params):
    if params:
        key = sorted(params)[0]
        raise DescriptorError(key, f"unknown parameter for {name}")


# -- functions --

def _harmonic(kind, k, amp):
    if kind == "cos":
        ev = lambda t: amp * np.cos(k * t)  # noqa: E731
        prim = (lambda t: amp * np.sin(k * t) / k) if k else (lambda t: amp * t)
    else:
        ev = lambda t: amp * np.sin(k * t)  # noqa: E731
        prim = (lambda t: amp * (1 - np.cos(k * t)) / k) if k else (lambda t: 0 * t)
    return ev, prim


def _const(c):
    return PeriodicFunction(lambda t: np.full(np.shape(t), c), label=f"const({c:g})",
                            primitive=lambda t: c * np.asarray(t, dtype=float))


def _build_term(name, params):
    p = dict(params)
    if name == "const":
        f = _const(_number(name, p, "c", 1.0))
    elif name in ("cos", "sin"):
        k = _number(name, p, "k", 1, int)
        amp = _number(name, p, "a", 1.0)
        ev, prim = _harmonic(name, k, amp)
        f = PeriodicFunction(ev, label=f"{name}({k}t)" if amp == 1 else f"{amp:g}{name}({k}t)",
                             primitive=prim, max_frequency=abs(k))
    elif name == "harmonic":
        k = _number(name, p, "k", 1, int)
        prim = ((lambda t: (np.exp(1j * k * np.asarray(t)) - 1) / (1j * k)) if k
                else (lambda t: np.asarray(t, dtype=complex)))
        f = PeriodicFunction(lambda t: np.exp(1j * k * np.asarray(t)), label=f"exp({k}it)",
                             real=False, primitive=prim, max_frequency=abs(k))
    elif name == "sawtooth":
        f = PeriodicFunction(lambda t: np.asarray(t, dtype=float), piece_breaks=(math.pi,),
                             label="sawtooth", primitive=lambda t: np.asarray(t) ** 2 / 2)
    elif name == "square":
        f = PeriodicFunction(np.sign, piece_breaks=(0.0, math.pi), label="square",
                             primitive=lambda t: np.abs(t))
    elif name == "abs":
        f = PeriodicFunction(np.abs, piece_breaks=(0.0,), label="abs",
                             primitive=lambda t: np.asarray(t) * np.abs(t) / 2)
    elif name == "inv_sqrt":
        def ev(t):
            a = np.abs(np.asarray(t, dtype=float))
            with np.errstate(divide="ignore"):
                return np.where(a > 0, 1.0 / np.sqrt(np.where(a > 0, a, 1.0)), np.inf)

        f = PeriodicFunction(ev, singular_points=(0.0,), label="inv_sqrt",
                             primitive=lambda t: 2 * np.sign(t) * np.sqrt(np.abs(t)))
    elif name == "oscillating_g":
        scheme = p.pop("scheme", "harmonic")
        if scheme not in ("harmonic", "dyadic"):
            raise DescriptorError("scheme", f"expected harmonic or dyadic, got {scheme!r}")
        floor = _number(name, p, "floor", 1e-4)
        f = oscillating_witness(scheme, floor=floor)
    elif name in ("counterexample_F0", "counterexample_f0", "counterexample"):
        q = _number(name, p, "q", 3, int)
        pp = _number(name, p, "p", 2, int)
        K = _number(name, p, "K", 3, int)
        amp = _number(name, p, "amplitude", 1.5)
        inner = p.pop("inner", "zero")
        try:
            params_ = CounterexampleParams(q, pp, K, amp)
            F0, f0 = counterexample_pair(params_, inner=inner)
        except ValueError as exc:
            raise DescriptorError(name, str(exc)) from None
        f = F0 if name == "counterexample_F0" else f0
    else:
        raise DescriptorError(name, f"unknown function; expected one of {FUNCTION_NAMES}")
    _no_leftovers(name, p)
    return f


FUNCTION_NAMES = ("const", "cos", "sin", "harmonic", "sawtooth", "square", "abs", "inv_sqrt",
                  "oscillating_g", "counterexample_F0", "counterexample_f0", "counterexample")


def parse_function(desc):
    """Build a :class:`PeriodicFunction` from a descriptor such as ``cos+sin:k=2``."""
    total = None
    for term in desc.split("+"):
        term = term.strip()
        coef = 1.0
        head, star, tail = term.partition("*")
        if star:
            try:
                coef = float(head)
            except ValueError:
                raise DescriptorError(head, "expected a numeric coefficient before '*'") from None
            term = tail
        f = _build_term(*_split(term))
        if coef != 1.0:
            f = f.scaled(coef)
        total = f if total is None else total + f
    return PeriodicFunction(total.evaluator, total.singular_points, total.piece_breaks,
                            desc.strip(), total.real, total.primitive, total.max_frequency,
                            dict(total.metadata))


# -- methods and multipliers --

def _typed(params):
    out = {}
    for key, raw in params.items():
        try:
            out[key] = float(raw)
        except ValueError:
            raise DescriptorError(key, f"expected a number, got {raw!r}") from None
    return out


def parse_method(desc):
    """Build a multiplier family, e.g. ``riesz:alpha=2,beta=2``."""
    name, params = _split(desc)
    if name not in FAMILY_NAMES:
        raise DescriptorError(name, f"unknown method; expected one of {FAMILY_NAMES}")
    allowed = {
        "dirichlet": set(), "fejer": set(), "rogosinski": set(), "bernstein": set(),
        "cesaro": {"alpha"}, "riesz": {"alpha", "beta"}, "exp": {"alpha"},
        "vallee_poussin": {"m"}, "fejer_jackson": {"s"},
        "lebesgue": {"eps", "c", "cutoff"}, "rb_measure": {"gamma"},
    }[name] | {"tail_tol"}
    for key in sorted(params):
        if key not in allowed:
            raise DescriptorError(key, f"unknown parameter for {name}")
    try:
        return catalog_family(name, _typed(params))
    except DescriptorError:
        raise
    except ValueError as exc:
        raise DescriptorError(name, str(exc)) from None


def parse_multiplier(desc):
    """Build a :class:`MultiplierFunction`; ``corrected:<desc>`` applies the
    endpoint correction to the inner multiplier."""
    desc = desc.strip()
    if desc.startswith("corrected:"):
        return endpoint_corrected(parse_multiplier(desc[len("corrected:"):]))
    name, params = _split(desc)
    if name not in MULTIPLIER_NAMES:
        raise DescriptorError(name, f"unknown multiplier; expected one of {MULTIPLIER_NAMES}")
    allowed = {"exp": {"alpha"}, "riesz": {"alpha", "beta"}, "rb_measure": {"gamma"}}.get(name, set())
    for key in sorted(params):
        if key not in allowed:
            raise DescriptorError(key, f"unknown parameter for {name}")
    try:
        return multiplier_function(name, **_typed(params))
    except TypeError as exc:
        raise DescriptorError(name, f"bad parameters: {exc}") from None
    except ValueError as exc:
        raise DescriptorError(name, str(exc)) from None
