"""Command-line front end.

Exit codes: 0 success, 1 unbounded/violated verdict under ``--strict``,
2 invalid configuration, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .conditions import (global_condition_sup, hardy_condition, l2_condition_sup, local_condition_sup,
                         necessary_condition_sup, region_membership_polyexp)
from .config import RunConfig, deep_merge, load_config_file, profile_from_dict, weight_from_dict
from .errors import CalibrationError, DomainError, InvalidConfigError, NumericalFailure, UnsupportedShapeError
from .geometry import ball_volume
from .harish_chandra import c_function, make_model, plancherel_density
from .lab import (calderon_domination_check, paley_ratio, pitt_ratio_sweep, standard_family, transform_sampler,
                  unboundedness_witness)
from .profiles import Indicator, PolyExpSpatial, PowerSpectral
from .rearrangement import default_t_grid, rearrange
from .reports import csv_text, dumps, envelope, write_atomic
from .spherical import default_evaluator, evaluate_phi

EXIT_OK, EXIT_VIOLATED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class _Result:
    """What a command hands back: payload, optional CSV table, summary lines, verdict flag."""

    def __init__(self, kind, payload, summary, header=None, rows=None, violated=False):
        self.kind = kind
        self.payload = payload
        self.summary = summary
        self.header = header
        self.rows = rows
        self.violated = violated


def _num(x) -> str:
    if isinstance(x, complex):
        return f"{_num(x.real)}{'+' if x.imag >= 0 else '-'}{_num(abs(x.imag))}i" if x.imag else _num(x.real)
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".12g")
    return str(x)


# ---------------------------------------------------------------- argument parsing


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("common")
    g.add_argument("--m1", type=int, help="root multiplicity m1 (default 2)")
    g.add_argument("--m2", type=int, help="root multiplicity m2 (default 0)")
    g.add_argument("--config", help="JSON run config; its values override flags")
    g.add_argument("--output", help="write the report to this path")
    g.add_argument("--format", choices=("json", "csv"), help="report format (default from extension, else json)")
    g.add_argument("--strict", action="store_true", help="exit 1 when a verdict is unbounded or violated")


def _exponents(parser, need_weights=True) -> None:
    g = parser.add_argument_group("exponents and weights")
    g.add_argument("--p", help='exponent p, e.g. "4/3" or "inf"')
    g.add_argument("--q", help="exponent q")
    g.add_argument("--q0", help="strip exponent q0 (default 2)")
    g.add_argument("--theta0", type=float, help="localization threshold (default 1.5)")
    if need_weights:
        g.add_argument("--u", help="spectral weight as JSON, e.g. '{\"kind\": \"power\", \"sigma\": 0.75}'")
        g.add_argument("--v", help="spatial weight as JSON")
        g.add_argument("--sigma", type=float, help="shorthand for u = |lambda|^-sigma")
        g.add_argument("--kappa", type=float, help="shorthand for v = t^kappa e^(2 rho delta t) (with --delta)")
        g.add_argument("--delta", type=float, help="see --kappa")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pittlab", description="Weighted Fourier inequality toolkit")
    parser.add_argument("--version", action="version", version=f"pittlab {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    sp = sub.add_parser("space", help="space data")
    sp.add_argument("action", choices=("info",))
    _common(sp)

    ph = sub.add_parser("phi", help="spherical function value")
    ph.add_argument("--lambda", dest="lam", type=float, default=0.0, help="real part of lambda")
    ph.add_argument("--lambda-im", dest="lam_im", type=float, default=0.0, help="imaginary part of lambda")
    ph.add_argument("--t", type=float, required=True, help="radius")
    _common(ph)

    cf = sub.add_parser("cfun", help="c-function value")
    cf.add_argument("--lambda", dest="lam", type=float, default=0.0)
    cf.add_argument("--lambda-im", dest="lam_im", type=float, default=0.0)
    _common(cf)

    tr = sub.add_parser("transform", help="spherical transform of a profile")
    tr.add_argument("--profile", help="profile as JSON (default indicator of radius 1)")
    tr.add_argument("--lambdas", default="0,1,2,4,8", help="comma-separated real frequencies")
    tr.add_argument("--gamma", type=float, default=0.0, help="imaginary shift")
    _common(tr)

    ra = sub.add_parser("rearrange", help="non-increasing rearrangement of a weight")
    ra.add_argument("--weight", required=True, help="weight as JSON")
    ra.add_argument("--side", choices=("spectral", "spatial"), default="spectral")
    ra.add_argument("--t-range", default="1e-3,1e3,10", help="lo,hi,points_per_decade")
    _common(ra)

    ck = sub.add_parser("check", help="sufficiency/necessity functionals and region algebra")
    ck.add_argument("which", choices=("local", "global", "l2", "hardy", "necessary", "region"))
    ck.add_argument("--variant", choices=("forward", "dual"), default="forward", help="hardy only")
    ck.add_argument("--extremal-kappa", type=float, help="necessary only; default 1/(p-1)")
    _exponents(ck)
    _common(ck)

    ve = sub.add_parser("verify", help="end-to-end inequality checks")
    ve.add_argument("which", choices=("pitt", "paley", "calderon"))
    ve.add_argument("--profile", action="append", help="profile as JSON (repeatable)")
    _exponents(ve)
    _common(ve)

    wi = sub.add_parser("witness", help="divergence witness along extremal profiles")
    wi.add_argument("--s-sequence", default="0.5,1,2,3,4,6,8,10", help="comma-separated radii (<= 10)")
    _exponents(wi)
    _common(wi)

    sw = sub.add_parser("sweep", help="Pitt ratios over the standard family")
    _exponents(sw)
    _common(sw)
    return parser


def _floats(text: str, name: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InvalidConfigError(f"{name}: expected comma-separated numbers") from exc


def _flag_dict(args) -> dict:
    d: dict = {}
    if args.m1 is not None or args.m2 is not None:
        d["space"] = {"m1": 2 if args.m1 is None else args.m1, "m2": 0 if args.m2 is None else args.m2}
    ex = {k: getattr(args, k, None) for k in ("p", "q", "q0", "theta0")}
    ex = {k: v for k, v in ex.items() if v is not None}
    if ex:
        d["exponents"] = ex
    w = {}
    sigma = getattr(args, "sigma", None)
    kappa, delta = getattr(args, "kappa", None), getattr(args, "delta", None)
    if sigma is not None:
        w["u"] = PowerSpectral(sigma).as_dict()
    if kappa is not None or delta is not None:
        w["v"] = PolyExpSpatial(kappa or 0.0, delta or 0.0).as_dict()
    for key in ("u", "v"):
        if getattr(args, key, None) is not None:
            w[key] = args.__dict__[key]
    if w:
        d["weights"] = w
    profiles = getattr(args, "profile", None)
    if profiles:
        d["family"] = profiles if isinstance(profiles, list) else [profiles]
    out = {}
    if args.output:
        out["path"] = args.output
        out["format"] = args.format or ("csv" if args.output.endswith(".csv") else "json")
    elif args.format:
        out["format"] = args.format
    if out:
        d["output"] = out
    return d


def resolve_config(args) -> RunConfig:
    d = _flag_dict(args)
    if args.config:
        d = deep_merge(d, load_config_file(args.config))
    return RunConfig.from_dict(d)


# ---------------------------------------------------------------- commands


def _space_info(cfg: RunConfig, args) -> _Result:
    s = cfg.space
    data = {"m1": s.m1, "m2": s.m2, "n": s.n, "rho": s.rho, "ball_volume_at_1": float(ball_volume(s, 1.0))}
    return _Result("space_info", data, [f"{k} = {_num(v)}" for k, v in data.items()])


def _phi(cfg: RunConfig, args) -> _Result:
    lam = complex(args.lam, args.lam_im)
    value = evaluate_phi(default_evaluator(cfg.space), lam, args.t)
    data = {"lambda": lam, "t": args.t, "phi": value}
    return _Result("phi", data, [f"phi = {_num(value)}"])


def _cfun(cfg: RunConfig, args) -> _Result:
    lam = complex(args.lam, args.lam_im)
    model = make_model(cfg.space)
    value = complex(c_function(model, lam))
    data = {"lambda": lam, "c": value}
    lines = [f"c = {_num(value)}"]
    if lam.imag == 0:
        data["plancherel_density"] = float(plancherel_density(model, lam.real))
        lines.append(f"|c|^-2 = {_num(data['plancherel_density'])}")
    return _Result("cfun", data, lines)


def _family_or(cfg: RunConfig, default):
    return list(cfg.family) if cfg.family else list(default)


def _transform(cfg: RunConfig, args) -> _Result:
    f = profile_from_dict(cfg.space, args.profile, "profile") if args.profile else Indicator(1.0)
    lams = np.asarray(_floats(args.lambdas, "lambdas"))
    if lams.size == 0:
        raise InvalidConfigError("lambdas: at least one frequency is required")
    top = max(16.0, float(np.max(np.abs(lams))) * 1.01)
    vals = transform_sampler(default_evaluator(cfg.space), f, top)(lams + 1j * args.gamma)
    rows = [(float(l), float(v.real), float(v.imag)) for l, v in zip(lams, np.atleast_1d(vals))]
    data = {"profile": f.as_dict(), "gamma": args.gamma, "values": [list(r) for r in rows]}
    lines = [f"f^({_num(l)} + {_num(args.gamma)}i) = {_num(complex(a, b))}" for l, a, b in rows]
    return _Result("transform", data, lines, ("lambda", "re", "im"), rows)


def _rearrange(cfg: RunConfig, args) -> _Result:
    lo, hi, per = _floats(args.t_range, "t-range")
    if not (0 < lo < hi) or per < 1:
        raise InvalidConfigError("t-range: need 0 < lo < hi and points_per_decade >= 1")
    w = weight_from_dict(args.weight, "weight")
    star = rearrange(w, args.side, make_model(cfg.space), default_t_grid(int(per), lo, hi))
    t = np.asarray(star.breakpoints)
    rows = [(float(a), float(b)) for a, b in zip(t, np.atleast_1d(star(t)))]
    lines = [f"{_num(a)}  {_num(b)}" for a, b in rows[:: max(1, len(rows) // 10)]]
    data = {"weight": w.as_dict(), "side": args.side, "profile": star.as_dict()}
    return _Result("rearrange", data, lines, ("t", "value"), rows)


def _condition_result(kind: str, report, extra=None) -> _Result:
    data = report.as_dict()
    if extra:
        data.update(extra)
    lines = [f"sup = {_num(report.sup_value)}", f"argmax_s = {_num(report.argmax_s)}", f"verdict = {report.verdict}"]
    return _Result(kind, data, lines, ("s", "factor1", "factor2", "product"), report.csv_rows(),
                   violated=report.verdict != "finite")


def _check(cfg: RunConfig, args) -> _Result:
    which = args.which
    if which == "region":
        ec = cfg.exponents()
        sigma = args.sigma if args.sigma is not None else 0.0
        res = region_membership_polyexp(cfg.space, ec, sigma, args.kappa or 0.0, args.delta or 0.0)
        lines = [f"sufficient = {str(res['sufficient']).lower()}",
                 f"necessary = {'unresolved' if res['necessary'] is None else str(res['necessary']).lower()}",
                 f"violated = {', '.join(res['violated']) or '-'}"]
        return _Result("check_region", res, lines, violated=bool(res["violated"]) or not res["sufficient"])
    ec = cfg.exponents()
    model = make_model(cfg.space)
    s_grid = np.asarray(cfg.s_grid)
    if which == "necessary":
        rep = necessary_condition_sup(cfg.u, cfg.v, ec, args.extremal_kappa, model, None, s_grid)
        return _condition_result("check_necessary", rep)
    if which == "hardy":
        rho = cfg.space.rho
        rep = hardy_condition(lambda t: cfg.u.eval(t, rho), lambda t: cfg.v.eval(t, rho), ec, args.variant, s_grid,
                              tuple(set(cfg.u.breakpoints) | set(cfg.v.breakpoints)))
        return _condition_result("check_hardy", rep)
    U = rearrange(cfg.u, "spectral", model)
    Vinv = rearrange(cfg.v, "spatial", model)
    if which == "local":
        rep = local_condition_sup(U, Vinv, ec, s_grid)
    elif which == "global":
        rep = global_condition_sup(U, Vinv, ec, s_grid)
    else:
        rep = l2_condition_sup(U, Vinv, s_grid)
    return _condition_result(f"check_{which}", rep)


def _report_result(kind: str, rep) -> _Result:
    lines = [f"[{i}] {d['kind']}: lhs = {_num(l)}  rhs = {_num(r)}  ratio = {_num(q)}"
             for i, (d, l, r, q) in enumerate(zip(rep.family, rep.lhs, rep.rhs, rep.ratios))]
    lines += [f"empirical_constant = {_num(rep.empirical_constant)}", f"verdict = {rep.verdict}"]
    if rep.localization_bounds is not None:
        lines.append(f"localization ratio range = [{_num(rep.localization_bounds[0])}, {_num(rep.localization_bounds[1])}]")
    return _Result(kind, rep.as_dict(), lines, ("index", "kind", "size", "lhs", "rhs", "ratio"), rep.csv_rows(),
                   violated=rep.verdict == "unbounded")


def _verify(cfg: RunConfig, args) -> _Result:
    space, ev, model = cfg.space, default_evaluator(cfg.space), make_model(cfg.space)
    family = _family_or(cfg, [Indicator(1.0)])
    if args.which == "pitt":
        ec = cfg.exponents()
        ec.require_sufficiency_range()
        rep = pitt_ratio_sweep(space, ev, model, cfg.u, cfg.v, ec, family)
        return _report_result("verify_pitt", rep)
    if args.which == "paley":
        if cfg.p is None:
            raise InvalidConfigError("exponents.p: required for this command")
        rows = []
        for f in family:
            rows.append((f.as_dict()["kind"], paley_ratio(space, ev, model, f, cfg.u, cfg.p)))
        lines = [f"[{i}] {k}: ratio = {_num(r)}" for i, (k, r) in enumerate(rows)]
        data = {"ratios": [r for _, r in rows], "family": [f.as_dict() for f in family]}
        return _Result("verify_paley", data, lines, ("kind", "ratio"), rows,
                       violated=any(not math.isfinite(r) for _, r in rows))
    rows = []
    for f in family:
        rows.append((f.as_dict()["kind"], calderon_domination_check(space, ev, model, f, cfg.q0)))
    lines = [f"[{i}] {k}: max ratio = {_num(r)}" for i, (k, r) in enumerate(rows)]
    data = {"max_ratios": [r for _, r in rows], "family": [f.as_dict() for f in family]}
    return _Result("verify_calderon", data, lines, ("kind", "max_ratio"), rows,
                   violated=any(not math.isfinite(r) for _, r in rows))


def _witness(cfg: RunConfig, args) -> _Result:
    space = cfg.space
    rep = unboundedness_witness(space, default_evaluator(space), make_model(space), cfg.u, cfg.v, cfg.exponents(),
                                _floats(args.s_sequence, "s-sequence"))
    return _report_result("witness", rep)


def _sweep(cfg: RunConfig, args) -> _Result:
    space = cfg.space
    ec = cfg.exponents()
    family = _family_or(cfg, standard_family(space, cfg.v, ec))
    rep = pitt_ratio_sweep(space, default_evaluator(space), make_model(space), cfg.u, cfg.v, ec, family)
    return _report_result("sweep", rep)


COMMANDS = {"space": _space_info, "phi": _phi, "cfun": _cfun, "transform": _transform, "rearrange": _rearrange,
            "check": _check, "verify": _verify, "witness": _witness, "sweep": _sweep}


def _emit(cfg: RunConfig, result: _Result, args) -> None:
    for line in result.summary:
        print(line)
    if not cfg.output_path:
        return
    if cfg.output_format == "csv":
        if result.header is None:
            raise InvalidConfigError(f"output.format: '{result.kind}' has no tabular form; use json")
        text = csv_text(result.header, result.rows)
    else:
        text = dumps(envelope(result.kind, {**cfg.as_dict(), "argv": _argv_record(args)}, result.payload))
    write_atomic(cfg.output_path, text)
    print(f"report written to {cfg.output_path}")


def _argv_record(args) -> dict:
    skip = {"config", "output", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    try:
        cfg = resolve_config(args)
        result = COMMANDS[args.command](cfg, args)
        _emit(cfg, result, args)
    except (InvalidConfigError, DomainError, UnsupportedShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, CalibrationError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.strict and result.violated:
        return EXIT_VIOLATED
    return EXIT_OK


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
