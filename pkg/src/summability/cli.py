"""Command-line experiment runner.

Usage::

    summability run --suite theorem1 --function "cos+sin:k=2" --n-list 8,16,32
    summability run --config experiments.ini --out results.csv
    summability wiener --phi "riesz:alpha=2,beta=2" --delta 0.5 --report json

Exit codes: 0 when no record failed, 1 when a check failed or a suite
stopped early, 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from dataclasses import dataclass, field, replace

import numpy as np

from .catalog import DescriptorError, parse_function, parse_method, parse_multiplier
from .kernels import IDENTITIES, identity_residual, l1_norm, sidon_bound_check
from .lab import (
    ExperimentRecord,
    divergence_experiment,
    records_to_csv,
    records_to_json,
    salem_checks,
    theorem1_constant,
    theorem1_experiment,
)
from .multipliers import kernel_of, linear_means
from .points import CounterexampleParams, classify_point
from .wiener import lemma_quantities, theorem2_report

__all__ = ["ConfigError", "RunConfig", "main", "run_suite"]

SUITES = ("kernels", "means", "classify", "theorem1", "counterexample", "wiener", "bounds",
          "salem", "all")
_ORDER = SUITES[:-1]


class ConfigError(ValueError):
    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration. Empty lists mean "suite defaults"."""

    suite: str = "all"
    methods: tuple = ()
    functions: tuple = ()
    n_list: tuple = ()
    x_list: tuple = ()
    delta: float = 0.5
    tol: float = 1e-10
    fmt: str = "csv"
    out: str = "-"
    deterministic: bool = field(default=True, init=False)

    def validate(self):
        if self.suite not in SUITES:
            raise ConfigError("suite", f"unknown suite {self.suite!r}; expected one of {SUITES}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError("format", f"expected csv or json, got {self.fmt!r}")
        if list(self.n_list) != sorted(self.n_list) or any(n < 0 for n in self.n_list):
            raise ConfigError("n_list", "must be nonnegative and sorted ascending")
        if not 0 < self.delta <= math.pi:
            raise ConfigError("delta", "must lie in (0, pi]")
        if not self.tol > 0:
            raise ConfigError("tol", "must be positive")
        for d in self.methods:
            try:
                parse_method(d)
            except DescriptorError as exc:
                raise ConfigError(f"method.{exc.key}", str(exc)) from None
        for d in self.functions:
            try:
                parse_function(d)
            except DescriptorError as exc:
                raise ConfigError(f"function.{exc.key}", str(exc)) from None
        return self


def _ints(text, key):
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(key, f"expected comma-separated integers, got {text!r}") from None


def _floats(text, key):
    try:
        return tuple(_pi_float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(key, f"expected comma-separated numbers, got {text!r}") from None


def _pi_float(text):
    """Float with optional ``pi`` factor: ``pi/2``, ``0.5pi``, ``-pi``."""
    t = text.strip().replace(" ", "")
    if "pi" not in t:
        return float(t)
    head, _, tail = t.partition("pi")
    coef = {"": 1.0, "-": -1.0, "+": 1.0}.get(head.rstrip("*"), None)
    if coef is None:
        coef = float(head.rstrip("*"))
    if tail.startswith("/"):
        coef /= float(tail[1:])
    elif tail:
        raise ValueError(text)
    return coef * math.pi


def _scalar(text, key, conv=float):
    try:
        return conv(text)
    except ValueError:
        raise ConfigError(key, f"expected a number, got {text!r}") from None


_CONFIG_KEYS = ("suite", "method", "function", "n_list", "x", "delta", "tol", "format", "out")


def load_config(path):
    """Read ``key = value`` pairs from the ``[run]`` section of an ini file.

    ``method`` and ``function`` hold ``;``-separated descriptor lists.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    except configparser.Error as exc:
        raise ConfigError("config", str(exc).splitlines()[0]) from None
    for section in parser.sections():
        if section != "run":
            raise ConfigError(section, "unknown section; expected [run]")
    values = dict(parser["run"]) if parser.has_section("run") else {}
    for key in values:
        if key not in _CONFIG_KEYS:
            raise ConfigError(key, "unknown configuration key")
    return values


def _build_config(args):
    values = load_config(args.config) if args.config else {}
    cfg = {}
    if "suite" in values:
        cfg["suite"] = values["suite"].strip()
    if "method" in values:
        cfg["methods"] = tuple(s.strip() for s in values["method"].split(";") if s.strip())
    if "function" in values:
        cfg["functions"] = tuple(s.strip() for s in values["function"].split(";") if s.strip())
    if "n_list" in values:
        cfg["n_list"] = _ints(values["n_list"], "n_list")
    if "x" in values:
        cfg["x_list"] = _floats(values["x"], "x")
    if "delta" in values:
        cfg["delta"] = _scalar(values["delta"], "delta", _pi_float)
    if "tol" in values:
        cfg["tol"] = _scalar(values["tol"], "tol")
    if "format" in values:
        cfg["fmt"] = values["format"].strip()
    if "out" in values:
        cfg["out"] = values["out"].strip()
    # command-line flags override the file
    if args.suite is not None:
        cfg["suite"] = args.suite
    if args.method:
        cfg["methods"] = tuple(args.method)
    if args.function:
        cfg["functions"] = tuple(args.function)
    if args.n_list is not None:
        cfg["n_list"] = _ints(args.n_list, "n_list")
    if args.x is not None:
        cfg["x_list"] = _floats(args.x, "x")
    if args.delta is not None:
        cfg["delta"] = _scalar(args.delta, "delta", _pi_float)
    if args.tol is not None:
        cfg["tol"] = args.tol
    if args.format is not None:
        cfg["fmt"] = args.format
    if args.out is not None:
        cfg["out"] = args.out
    return RunConfig(**cfg).validate()


# -- suites --

def _pick(values, default):
    return tuple(values) if values else tuple(default)


def _suite_kernels(cfg):
    out = []
    n_list = _pick(cfg.n_list, (8, 16, 32, 64))
    for tag in IDENTITIES:
        for n in n_list:
            if n < 1:
                continue
            r = identity_residual(tag, n)
            status = "within_bound" if r <= 1e-10 else "failed"
            out.append(ExperimentRecord(f"identity[{tag}]", n, r, 0.0, r, 1e-10, status))
    for desc in _pick(cfg.methods, ("dirichlet", "fejer")):
        fam = parse_method(desc)
        for n in n_list:
            v = l1_norm(kernel_of(fam, n))
            out.append(ExperimentRecord(f"kernel_l1[{fam.label}]", n, v, 0.0, v, None,
                                        "trend_ok"))
    return out


def _suite_means(cfg):
    out = []
    n_list = _pick(cfg.n_list, (8, 16, 32, 64))
    xs = _pick(cfg.x_list, (0.0,))
    for fdesc in _pick(cfg.functions, ("const:c=2", "cos", "square")):
        f = parse_function(fdesc)
        for x in xs:
            c = classify_point(f, x)
            ref = c.d_estimate if c.verdict_d == "yes" else complex(math.nan)
            for mdesc in _pick(cfg.methods, ("fejer", "riesz:alpha=1,beta=2")):
                fam = parse_method(mdesc)
                vals = [linear_means(f, fam, n, x, cfg.tol) for n in n_list]
                errs = [abs(v - ref) for v in vals]
                if not math.isfinite(errs[0]):
                    status = "trend_ok"
                else:
                    status = "trend_ok" if errs[-1] <= errs[0] + 1e-9 else "failed"
                name = f"means[{f.label};{fam.label};x={x!r}]"
                out += [ExperimentRecord(name, n, v, ref, e, None, status)
                        for n, v, e in zip(n_list, vals, errs)]
    return out


def _suite_classify(cfg):
    out = []
    xs = _pick(cfg.x_list, (0.0,))
    default = ("square", "oscillating_g:scheme=harmonic", "oscillating_g:scheme=dyadic",
               "counterexample_f0:K=2")
    for fdesc in _pick(cfg.functions, default):
        f = parse_function(fdesc)
        for x in xs:
            c = classify_point(f, x)
            d = c.d_estimate if c.d_estimate is not None else complex(math.nan)
            err = c.l_residuals[-1][1] if c.l_residuals else math.nan
            name = f"classify[{f.label};x={x!r};d={c.verdict_d};l={c.verdict_l}]"
            out.append(ExperimentRecord(name, 0, d, 0.0, err, None, "trend_ok"))
    return out


_T1_FUNCTION = "cos+sin:k=2"


def _suite_theorem1(cfg):
    out = []
    n_list = _pick(cfg.n_list, (8, 16, 32, 64, 128, 256))
    for fdesc in _pick(cfg.functions, (_T1_FUNCTION,)):
        f = parse_function(fdesc)
        for x in _pick(cfg.x_list, (0.0,)):
            recs = theorem1_experiment(f, x, n_list, tol=cfg.tol)
            out += [replace(r, experiment=f"{r.experiment}[{f.label};x={x!r}]") for r in recs]
    return out


def _suite_counterexample(cfg):
    f1 = parse_function(_T1_FUNCTION)
    constant = theorem1_constant(f1, 0.0, 8)
    out = []
    for fdesc in _pick(cfg.functions, ("counterexample_f0:q=3,p=2,K=2",)):
        f = parse_function(fdesc)
        if "params" not in f.metadata:
            raise ConfigError("function", f"{fdesc!r} is not a counterexample descriptor")
        p = f.metadata["params"]
        recs = divergence_experiment(CounterexampleParams(p.q, p.p, p.K, p.amplitude),
                                     inner=f.metadata["inner"], constant=constant, tol=cfg.tol)
        out += [replace(r, experiment=f"{r.experiment}[q={p.q},p={p.p},K={p.K}]")
                for r in recs]
    return out


def _suite_wiener(cfg):
    out = []
    for desc in ("gaussian", "riesz:alpha=2,beta=2", "fejer"):
        phi = parse_multiplier(desc)
        rep = theorem2_report(phi, cfg.delta)
        a = rep.phi_in_A
        name = f"theorem2[{phi.label};{rep.overall}]"
        out.append(ExperimentRecord(name, 0, a.l1_norm_estimate, 1.0,
                                    abs(a.l1_norm_estimate - 1.0), None, "trend_ok"))
    n_list = _pick(cfg.n_list, (8, 16, 32))
    for desc in _pick(cfg.methods, ("fejer", "riesz:alpha=1,beta=2", "rogosinski")):
        out += lemma_quantities(parse_method(desc), [n for n in n_list if n >= 1], cfg.delta)
    return out


def _suite_bounds(cfg):
    out = []
    n_list = _pick(cfg.n_list, (4, 16, 64))
    for desc in _pick(cfg.methods, ("dirichlet", "fejer")):
        fam = parse_method(desc)
        for variant in ("sidon", "dyadic"):
            reports = [(n, sidon_bound_check(kernel_of(fam, n), variant)) for n in n_list]
            c = min(r.fitted_constant for _, r in reports)
            for n, r in reports:
                chk = sidon_bound_check(kernel_of(fam, n), variant, constant=c)
                bound = c * chk.rhs_sum
                status = "within_bound" if chk.verdict else "failed"
                out.append(ExperimentRecord(f"{variant}_bound[{fam.label}]", n, chk.lhs, bound,
                                            chk.lhs - bound, bound, status))
    return out


def _suite_salem(cfg):
    out = []
    n_list = _pick(cfg.n_list, (8, 16, 32, 64))
    for fdesc in _pick(cfg.functions, ("cos+cos:k=3",)):
        f = parse_function(fdesc)
        for x in _pick(cfg.x_list, (0.0,)):
            recs = salem_checks(f, x, n_list)
            out += [replace(r, experiment=f"{r.experiment}[{f.label};x={x!r}]") for r in recs]
    return out


_SUITES = {
    "kernels": _suite_kernels,
    "means": _suite_means,
    "classify": _suite_classify,
    "theorem1": _suite_theorem1,
    "counterexample": _suite_counterexample,
    "wiener": _suite_wiener,
    "bounds": _suite_bounds,
    "salem": _suite_salem,
}


def run_suite(config):
    """Run the configured suite; returns ``(records, partial_error)``.

    Records are ordered by ``(experiment, n)``. When a suite raises, the
    records collected so far are returned with a trailing ``partial``
    marker and the error message.
    """
    names = _ORDER if config.suite == "all" else (config.suite,)
    records = []
    error = None
    for name in names:
        try:
            records += _SUITES[name](config)
        except ConfigError:
            raise
        except Exception as exc:  # noqa: BLE001 - reported through the partial marker
            error = f"{name}: {type(exc).__name__}: {exc}"
            break
    records.sort(key=lambda r: (r.experiment, r.n))
    if error is not None:
        records.append(ExperimentRecord(f"partial[{error}]", 0, complex(math.nan),
                                        complex(math.nan), math.nan, None, "partial"))
    return records, error


def _write(text, path):
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _run(args):
    try:
        cfg = _build_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    try:
        records, error = run_suite(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    text = records_to_csv(records) if cfg.fmt == "csv" else records_to_json(records)
    _write(text, cfg.out)
    if error is not None:
        print(f"suite stopped early: {error}", file=sys.stderr)
        return 1
    return 1 if any(r.status == "failed" for r in records) else 0


def _wiener(args):
    try:
        phi = parse_multiplier(args.phi)
        delta = _scalar(args.delta, "delta", _pi_float)
        if not delta > 0:
            raise ConfigError("delta", "must be positive")
    except (DescriptorError, ConfigError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    if phi.derivative is None:
        print(f"configuration error: phi: {phi.label} has no derivative", file=sys.stderr)
        return 2
    rep = theorem2_report(phi, delta)
    payload = {"phi": phi.label, "delta": delta, **rep.to_dict()}
    text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    _write(text, args.out or "-")
    return 0


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else repr(v)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def build_parser():
    parser = argparse.ArgumentParser(prog="summability",
                                     description="Summability-means experiment runner.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment suite")
    run.add_argument("--suite", choices=None, help=f"one of {', '.join(SUITES)}")
    run.add_argument("--method", action="append", help="method descriptor (repeatable)")
    run.add_argument("--function", action="append", help="function descriptor (repeatable)")
    run.add_argument("--n-list", dest="n_list", help="comma-separated degrees")
    run.add_argument("--x", help="comma-separated points (pi allowed, e.g. pi/2)")
    run.add_argument("--delta", help="neighbourhood radius for the Wiener checks")
    run.add_argument("--tol", type=float, help="quadrature tolerance")
    run.add_argument("--out", help="output path (default stdout)")
    run.add_argument("--format", choices=("csv", "json"))
    run.add_argument("--config", help="ini file with a [run] section")
    run.set_defaults(handler=_run)

    wien = sub.add_parser("wiener", help="check the Wiener-algebra hypotheses for phi")
    wien.add_argument("--phi", required=True, help="multiplier descriptor")
    wien.add_argument("--delta", default="0.5")
    wien.add_argument("--report", choices=("json",), default="json")
    wien.add_argument("--out", help="output path (default stdout)")
    wien.set_defaults(handler=_wiener)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and argv[0].startswith("-") and argv[0] not in ("-h", "--help"):
        argv.insert(0, "run")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
