"""Run configuration: parsing weight/profile descriptors and validating resolved settings."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .conditions import DEFAULT_THETA0, ExponentConfig, default_s_grid
from .errors import InvalidConfigError, PittLabError
from .geometry import SpaceParams, make_space, parse_exponent
from .profiles import (Bump, Cutoff, Extremal, Indicator, One, PolyDecay, PolyExpSpatial, PowerSpectral, Product,
                       RadialProfile, Reciprocal, Sampled, Scaled, Tabulated, WeightSpec)


def _need(d: dict, key: str, where: str):
    if key not in d:
        raise InvalidConfigError(f"{where}: missing field '{key}'")
    return d[key]


def _parse_json(text: str, where: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"{where}: not valid JSON ({exc.msg})") from exc


def weight_from_dict(d, where: str = "weight") -> WeightSpec:
    """Inverse of ``WeightSpec.as_dict``."""
    if isinstance(d, str):
        d = _parse_json(d, where)
    if not isinstance(d, dict):
        raise InvalidConfigError(f"{where}: expected an object")
    kind = _need(d, "kind", where)
    try:
        if kind == "one":
            return One()
        if kind == "power":
            return PowerSpectral(float(_need(d, "sigma", where)))
        if kind == "polyexp":
            return PolyExpSpatial(float(_need(d, "kappa", where)), float(_need(d, "delta", where)))
        if kind == "tabulated":
            return Tabulated(tuple(_need(d, "grid", where)), tuple(_need(d, "values", where)))
        if kind == "product":
            return Product(tuple(weight_from_dict(f, f"{where}.factors") for f in _need(d, "factors", where)))
        if kind == "cutoff":
            return Cutoff(weight_from_dict(_need(d, "inner", where), f"{where}.inner"), float(_need(d, "radius", where)))
        if kind == "reciprocal":
            return Reciprocal(weight_from_dict(_need(d, "inner", where), f"{where}.inner"))
    except InvalidConfigError as exc:
        raise InvalidConfigError(f"{where}: {exc}") from exc
    raise InvalidConfigError(f"{where}: unknown weight kind '{kind}'")


def profile_from_dict(space: SpaceParams, d, where: str = "profile") -> RadialProfile:
    """Inverse of ``RadialProfile.as_dict``."""
    if isinstance(d, str):
        d = _parse_json(d, where)
    if not isinstance(d, dict):
        raise InvalidConfigError(f"{where}: expected an object")
    kind = _need(d, "kind", where)
    try:
        if kind == "indicator":
            return Indicator(float(_need(d, "radius", where)))
        if kind == "bump":
            return Bump(space, float(_need(d, "center", where)), float(_need(d, "width", where)),
                        float(d.get("mass", 1.0)))
        if kind == "polydecay":
            return PolyDecay(float(_need(d, "exponent", where)), float(_need(d, "radius", where)))
        if kind == "sampled":
            return Sampled(tuple(_need(d, "grid", where)), tuple(_need(d, "values", where)))
        if kind == "scaled":
            return Scaled(profile_from_dict(space, _need(d, "inner", where), f"{where}.inner"),
                          float(_need(d, "factor", where)))
        if kind == "extremal":
            p = d.get("p")
            return Extremal(space, weight_from_dict(_need(d, "weight", where), f"{where}.weight"),
                            parse_exponent(_need(d, "q0", where)), float(_need(d, "kappa", where)),
                            float(_need(d, "radius", where)), None if p is None else parse_exponent(p))
    except PittLabError as exc:
        raise InvalidConfigError(f"{where}: {exc}") from exc
    raise InvalidConfigError(f"{where}: unknown profile kind '{kind}'")


def deep_merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for k, v in override.items():
        out[k] = deep_merge(out[k], v) if isinstance(v, dict) and isinstance(out.get(k), dict) else v
    return out


def load_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InvalidConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidConfigError(f"config: {path} is not valid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise InvalidConfigError("config: top level must be an object")
    return data


def _exponent_field(d: dict, key: str, default):
    value = d.get(key, default)
    if value is None:
        return None
    try:
        return parse_exponent(value)
    except InvalidConfigError as exc:
        raise InvalidConfigError(f"exponents.{key}: {exc}") from exc


def _s_grid(spec) -> np.ndarray:
    if spec is None:
        return default_s_grid()
    if isinstance(spec, list):
        s = np.asarray(spec, dtype=float)
    elif isinstance(spec, dict):
        lo, hi = float(spec.get("lo", 1e-4)), float(spec.get("hi", 1e4))
        per = int(spec.get("per_decade", 20))
        if not (0 < lo < hi) or per < 1:
            raise InvalidConfigError("grids.s_grid: need 0 < lo < hi and per_decade >= 1")
        s = default_s_grid(per, lo, hi)
    else:
        raise InvalidConfigError("grids.s_grid: expected a list or {lo, hi, per_decade}")
    if s.size < 2 or np.any(s <= 0) or np.any(np.diff(s) <= 0):
        raise InvalidConfigError("grids.s_grid: must be positive and strictly increasing")
    return s


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings of one CLI invocation."""

    space: SpaceParams
    p: float | None = None
    q: float | None = None
    q0: float = 2.0
    theta0: float = DEFAULT_THETA0
    u: WeightSpec = field(default_factory=One)
    v: WeightSpec = field(default_factory=One)
    family: tuple = ()
    s_grid: tuple = ()
    lambda_max: float = 256.0
    t_max: float = 10.0
    tolerances: dict = field(default_factory=dict)
    output_format: str = "json"
    output_path: str | None = None

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        sp = d.get("space", {})
        try:
            space = make_space(int(sp.get("m1", 2)), int(sp.get("m2", 0)))
        except (InvalidConfigError, TypeError, ValueError) as exc:
            raise InvalidConfigError(f"space: {exc}") from exc
        ex = d.get("exponents", {})
        p = _exponent_field(ex, "p", None)
        q = _exponent_field(ex, "q", None)
        q0 = _exponent_field(ex, "q0", 2.0)
        theta0 = float(ex.get("theta0", DEFAULT_THETA0))
        if not (0 < theta0 < math.pi / 2):
            raise InvalidConfigError("exponents.theta0: must lie in (0, pi/2)")
        w = d.get("weights", {})
        u = weight_from_dict(w.get("u", {"kind": "one"}), "weights.u")
        v = weight_from_dict(w.get("v", {"kind": "one"}), "weights.v")
        family = tuple(profile_from_dict(space, f, f"family[{i}]") for i, f in enumerate(d.get("family", [])))
        g = d.get("grids", {})
        s_grid = tuple(_s_grid(g.get("s_grid")).tolist())
        lambda_max = float(g.get("lambda_max", 256.0))
        t_max = float(g.get("t_max", 10.0))
        if not lambda_max > 0:
            raise InvalidConfigError("grids.lambda_max: must be positive")
        if not (0 < t_max <= 10):
            raise InvalidConfigError("grids.t_max: must lie in (0, 10]")
        out = d.get("output", {})
        fmt = out.get("format", "json")
        if fmt not in ("json", "csv"):
            raise InvalidConfigError("output.format: must be 'json' or 'csv'")
        return cls(space, p, q, q0, theta0, u, v, family, s_grid, lambda_max, t_max,
                   dict(d.get("tolerances", {})), fmt, out.get("path"))

    def exponents(self) -> ExponentConfig:
        for name in ("p", "q"):
            if getattr(self, name) is None:
                raise InvalidConfigError(f"exponents.{name}: required for this command")
        try:
            return ExponentConfig(self.p, self.q, self.q0, self.theta0)
        except InvalidConfigError as exc:
            raise InvalidConfigError(f"exponents: {exc}") from exc

    def as_dict(self) -> dict:
        s = self.s_grid
        return {
            "space": {"m1": self.space.m1, "m2": self.space.m2},
            "exponents": {"p": self.p, "q": self.q, "q0": self.q0, "theta0": self.theta0},
            "weights": {"u": self.u.as_dict(), "v": self.v.as_dict()},
            "family": [f.as_dict() for f in self.family],
            "grids": {"s_grid": {"lo": s[0], "hi": s[-1], "points": len(s)} if s else None,
                      "lambda_max": self.lambda_max, "t_max": self.t_max},
            "tolerances": self.tolerances,
            "output": {"format": self.output_format, "path": self.output_path},
        }

