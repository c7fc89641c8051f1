"""Radial test functions, weights on both sides and weighted L^p norms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidConfigError
from .geometry import INF, SpaceParams, conjugate, density_delta, log_density_delta, rho_p
from .quadrature import graded_rule, panel_rule


def _as_array(t):
    return np.asarray(t, dtype=float)


def _scalar_or_array(out):
    return out if np.ndim(out) else float(out)


# ---------------------------------------------------------------- profiles


class RadialProfile:
    """Compactly supported radial function ``t -> f(a_t)``."""

    variant: str = "profile"

    @property
    def support_radius(self) -> float:
        raise NotImplementedError

    @property
    def breakpoints(self) -> tuple[float, ...]:
        """Interior radii where the profile is not smooth."""
        return ()

    @property
    def origin_exponent(self) -> float:
        """``e`` with ``f(a_t) ~ t^e`` as ``t -> 0``."""
        return 0.0

    @property
    def panel_hint(self) -> float:
        """Panel width on which the profile is well resolved by a 12-point rule."""
        return 0.5

    def _values(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def __call__(self, t):
        t = _as_array(t)
        out = np.zeros_like(t)
        inside = (t >= 0) & (t <= self.support_radius)
        if np.any(inside):
            out[inside] = self._values(t[inside])
        return _scalar_or_array(out)

    def scaled(self, factor: float) -> "Scaled":
        return Scaled(self, float(factor))

    def as_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Indicator(RadialProfile):
    radius: float
    variant = "indicator"

    def __post_init__(self):
        if not (0 < self.radius < INF):
            raise InvalidConfigError("indicator radius must be positive and finite")

    @property
    def support_radius(self):
        return self.radius

    def _values(self, t):
        return np.ones_like(t)

    def as_dict(self):
        return {"kind": "indicator", "radius": self.radius}


def _bump_shape(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - x[inside] ** 2))
    return out


@dataclass(frozen=True)
class Bump(RadialProfile):
    """Smooth bump around ``center`` of half-width ``width``, scaled so ``int f Delta = mass``."""

    space: SpaceParams
    center: float
    width: float
    mass: float = 1.0
    variant = "bump"

    def __post_init__(self):
        if not (self.width > 0 and self.center >= 0 and math.isfinite(self.center + self.width)):
            raise InvalidConfigError("bump needs center >= 0 and width > 0")

    @property
    def support_radius(self):
        return self.center + self.width

    @property
    def breakpoints(self):
        lo = self.center - self.width
        return (lo,) if lo > 0 else ()

    @property
    def panel_hint(self):
        return self.width / 10

    @cached_property
    def _scale(self) -> float:
        lo = max(0.0, self.center - self.width)
        x, w = graded_rule(0.0, 0.0, 0, 0, order=20, interior_panels=40)
        t = lo + (self.support_radius - lo) * x
        shape = _bump_shape((t - self.center) / self.width)
        total = (self.support_radius - lo) * np.sum(w * shape * density_delta(self.space, t))
        return self.mass / total

    def _values(self, t):
        return self._scale * _bump_shape((t - self.center) / self.width)

    def as_dict(self):
        return {"kind": "bump", "center": self.center, "width": self.width, "mass": self.mass}


@dataclass(frozen=True)
class PolyDecay(RadialProfile):
    """``(1 + t)^(-exponent)`` on ``[0, radius]``."""

    exponent: float
    radius: float
    variant = "polydecay"

    def __post_init__(self):
        if not (0 < self.radius < INF):
            raise InvalidConfigError("polydecay support must be positive and finite")

    @property
    def support_radius(self):
        return self.radius

    def _values(self, t):
        return (1 + t) ** (-self.exponent)

    def as_dict(self):
        return {"kind": "polydecay", "exponent": self.exponent, "radius": self.radius}


@dataclass(frozen=True)
class Sampled(RadialProfile):
    """Piecewise-linear interpolation of ``values`` on ``grid``; zero outside."""

    grid: tuple
    values: tuple
    variant = "sampled"

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or g.size < 2:
            raise InvalidConfigError("sampled profile needs matching 1-d grid and values (>= 2 points)")
        if np.any(np.diff(g) <= 0) or g[0] < 0 or not np.all(np.isfinite(g)) or not np.all(np.isfinite(v)):
            raise InvalidConfigError("sampled grid must be finite, nonnegative and increasing")
        object.__setattr__(self, "grid", tuple(g.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))

    @property
    def support_radius(self):
        return self.grid[-1]

    @property
    def breakpoints(self):
        return tuple(self.grid[:-1]) if self.grid[0] > 0 else tuple(self.grid[1:-1])

    def __call__(self, t):
        t = _as_array(t)
        out = np.interp(t, self.grid, self.values, left=0.0, right=0.0)
        return _scalar_or_array(out)

    def as_dict(self):
        return {"kind": "sampled", "grid": list(self.grid), "values": list(self.values)}


@dataclass(frozen=True)
class Scaled(RadialProfile):
    inner: RadialProfile
    factor: float
    variant = "scaled"

    @property
    def support_radius(self):
        return self.inner.support_radius

    @property
    def breakpoints(self):
        return self.inner.breakpoints

    @property
    def origin_exponent(self):
        return self.inner.origin_exponent

    @property
    def panel_hint(self):
        return self.inner.panel_hint

    def __call__(self, t):
        return self.factor * self.inner(t)

    def as_dict(self):
        return {"kind": "scaled", "factor": self.factor, "inner": self.inner.as_dict()}


@dataclass(frozen=True)
class Extremal(RadialProfile):
    """``v^(-p') phi_{i rho_q0}^kappa`` on ``[0, radius]``."""

    space: SpaceParams
    weight: "WeightSpec"
    q0: float
    kappa: float
    radius: float
    p: float | None = None
    variant = "extremal"

    def __post_init__(self):
        if not (0 < self.radius <= 10):
            raise DomainError("extremal profiles are supported on [0, s] with 0 < s <= 10")

    @property
    def support_radius(self):
        return self.radius

    @property
    def breakpoints(self):
        return tuple(b for b in self.weight.breakpoints if 0 < b < self.radius)

    def _pp(self) -> float:
        if self.p is None:
            raise InvalidConfigError("the extremal profile needs p to be supplied")
        if self.p <= 1 or self.p == INF:
            raise InvalidConfigError("the extremal profile needs 1 < p < inf")
        return conjugate(self.p)

    @property
    def origin_exponent(self):
        return -self._pp() * self.weight.origin_exponent

    def with_p(self, p: float) -> "Extremal":
        return Extremal(self.space, self.weight, self.q0, self.kappa, self.radius, p)

    @cached_property
    def _phi_table(self):
        from .spherical import PhiImagTable, default_evaluator

        return PhiImagTable(default_evaluator(self.space), rho_p(self.space, self.q0), self.radius)

    def _values(self, t):
        pp = self._pp()
        log_v = np.asarray(self.weight.log_eval(t, self.space.rho), dtype=float)
        return np.exp(-pp * log_v + self.kappa * self._phi_table.log(t))

    def as_dict(self):
        return {"kind": "extremal", "weight": self.weight.as_dict(), "q0": self.q0, "kappa": self.kappa,
                "radius": self.radius, "p": self.p}


# ---------------------------------------------------------------- weights


class WeightSpec:
    """Nonnegative weight on the space side (radius) or the spectral side (frequency)."""

    kind: str = "weight"

    def eval(self, x, rho: float | None = None):
        with np.errstate(divide="ignore", over="ignore"):
            return _scalar_or_array(np.exp(self.log_eval(_as_array(x), rho)))

    def log_eval(self, x: np.ndarray, rho: float | None = None) -> np.ndarray:
        raise NotImplementedError

    @property
    def origin_exponent(self) -> float:
        """``e`` with ``w(x) ~ |x|^e`` as ``x -> 0``."""
        return 0.0

    @property
    def monotone(self) -> str | None:
        """``'const'``, ``'dec'``, ``'inc'`` (in ``|x|``) or ``None`` if unknown."""
        return None

    @property
    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def as_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class One(WeightSpec):
    kind = "one"

    def log_eval(self, x, rho=None):
        return np.zeros_like(_as_array(x))

    @property
    def monotone(self):
        return "const"

    def as_dict(self):
        return {"kind": "one"}


@dataclass(frozen=True)
class PowerSpectral(WeightSpec):
    """``|lambda|^(-sigma)``."""

    sigma: float
    kind = "power"

    def __post_init__(self):
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise InvalidConfigError("sigma must be finite and >= 0")

    def log_eval(self, x, rho=None):
        with np.errstate(divide="ignore"):
            return -self.sigma * np.log(np.abs(_as_array(x)))

    @property
    def origin_exponent(self):
        return -self.sigma

    @property
    def monotone(self):
        return "dec" if self.sigma > 0 else "const"

    def as_dict(self):
        return {"kind": "power", "sigma": self.sigma}


@dataclass(frozen=True)
class PolyExpSpatial(WeightSpec):
    """``t^kappa exp(2 rho delta t)``."""

    kappa: float
    delta: float
    kind = "polyexp"

    def __post_init__(self):
        if not (self.kappa >= 0 and self.delta >= 0 and math.isfinite(self.kappa + self.delta)):
            raise InvalidConfigError("kappa and delta must be finite and >= 0")

    def log_eval(self, x, rho=None):
        if rho is None:
            if self.delta != 0:
                raise InvalidConfigError("evaluating an exponential weight needs rho")
            rho = 0.0
        x = np.abs(_as_array(x))
        with np.errstate(divide="ignore", invalid="ignore"):
            lt = np.where(self.kappa == 0, 0.0, self.kappa * np.log(x))
        return lt + 2 * rho * self.delta * x

    @property
    def origin_exponent(self):
        return self.kappa

    @property
    def monotone(self):
        return "const" if self.kappa == 0 and self.delta == 0 else "inc"

    def as_dict(self):
        return {"kind": "polyexp", "kappa": self.kappa, "delta": self.delta}


@dataclass(frozen=True)
class Tabulated(WeightSpec):
    """Linear interpolation of positive samples in ``|x|``, constant beyond the grid."""

    grid: tuple
    values: tuple
    kind = "tabulated"

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or g.size < 2:
            raise InvalidConfigError("tabulated weight needs matching 1-d grid and values (>= 2 points)")
        if np.any(np.diff(g) <= 0) or g[0] < 0 or np.any(v < 0) or not np.all(np.isfinite(v)):
            raise InvalidConfigError("tabulated weight needs an increasing grid and nonnegative values")
        object.__setattr__(self, "grid", tuple(g.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))

    def log_eval(self, x, rho=None):
        with np.errstate(divide="ignore"):
            return np.log(np.interp(np.abs(_as_array(x)), self.grid, self.values))

    @property
    def monotone(self):
        d = np.diff(self.values)
        if np.all(d == 0):
            return "const"
        if np.all(d <= 0):
            return "dec"
        if np.all(d >= 0):
            return "inc"
        return None

    @property
    def breakpoints(self):
        return tuple(g for g in self.grid if g > 0)

    def as_dict(self):
        return {"kind": "tabulated", "grid": list(self.grid), "values": list(self.values)}


@dataclass(frozen=True)
class Product(WeightSpec):
    factors: tuple
    kind = "product"

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.factors:
            raise InvalidConfigError("product weight needs at least one factor")

    def log_eval(self, x, rho=None):
        x = _as_array(x)
        with np.errstate(invalid="ignore"):
            out = sum(f.log_eval(x, rho) for f in self.factors)
        # 0 * inf conventions: a vanishing factor wins
        return np.nan_to_num(out, nan=-np.inf, posinf=np.inf, neginf=-np.inf)

    @property
    def origin_exponent(self):
        return float(sum(f.origin_exponent for f in self.factors))

    @property
    def monotone(self):
        kinds = {f.monotone for f in self.factors} - {"const"}
        if None in kinds or len(kinds) > 1:
            return None
        return kinds.pop() if kinds else "const"

    @property
    def breakpoints(self):
        return tuple(sorted({b for f in self.factors for b in f.breakpoints}))

    def as_dict(self):
        return {"kind": "product", "factors": [f.as_dict() for f in self.factors]}


@dataclass(frozen=True)
class Cutoff(WeightSpec):
    """``inner`` restricted to ``|x| <= radius`` (zero beyond)."""

    inner: WeightSpec
    radius: float
    kind = "cutoff"

    def __post_init__(self):
        if not (self.radius > 0):
            raise InvalidConfigError("cutoff radius must be positive")

    def log_eval(self, x, rho=None):
        x = _as_array(x)
        out = np.asarray(self.inner.log_eval(x, rho), dtype=float)
        return np.where(np.abs(x) <= self.radius, out, -np.inf)

    @property
    def origin_exponent(self):
        return self.inner.origin_exponent

    @property
    def monotone(self):
        return "dec" if self.inner.monotone in ("dec", "const") else None

    @property
    def breakpoints(self):
        return tuple(sorted({*(b for b in self.inner.breakpoints if b < self.radius), self.radius}))

    def as_dict(self):
        return {"kind": "cutoff", "radius": self.radius, "inner": self.inner.as_dict()}


@dataclass(frozen=True)
class Reciprocal(WeightSpec):
    """``1 / inner``."""

    inner: WeightSpec
    kind = "reciprocal"

    def log_eval(self, x, rho=None):
        return -np.asarray(self.inner.log_eval(_as_array(x), rho), dtype=float)

    @property
    def origin_exponent(self):
        return -self.inner.origin_exponent

    @property
    def monotone(self):
        return {"inc": "dec", "dec": "inc", "const": "const"}.get(self.inner.monotone)

    @property
    def breakpoints(self):
        return self.inner.breakpoints

    def as_dict(self):
        return {"kind": "reciprocal", "inner": self.inner.as_dict()}


def eval_weight(w: WeightSpec, point, space: SpaceParams | None = None):
    """Pointwise weight value; ``inf`` where a power weight blows up."""
    return w.eval(point, rho=None if space is None else space.rho)


# ---------------------------------------------------------------- norms


def _radial_integral(space: SpaceParams, integrand, origin_exponent: float, upper: float,
                     breakpoints: Sequence[float] = (), panel_width: float = 0.5) -> float:
    """``int_0^upper integrand(t) dt`` where ``integrand ~ t^origin_exponent`` at 0."""
    if origin_exponent <= -1:
        return INF
    cuts = sorted({0.0, upper, *[b for b in breakpoints if 0 < b < upper]})
    total = 0.0
    first_hi = cuts[1]
    x, w = graded_rule(origin_exponent, 0.0, 16, 0)
    t = first_hi * x
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        g = integrand(t) / t ** origin_exponent
    total += first_hi ** (1 + origin_exponent) * np.sum(w * g)
    for a, b in zip(cuts[1:-1], cuts[2:]):
        k = max(1, int(math.ceil((b - a) / panel_width)))
        nodes, weights = panel_rule(np.linspace(a, b, k + 1), order=16)
        total += np.sum(weights * integrand(nodes))
    return float(total) if np.isfinite(total) else INF


def weighted_lp_norm(space: SpaceParams, f: RadialProfile, v: WeightSpec, p: float) -> float:
    """``(int |f v|^p Delta dt)^(1/p)``; ``inf`` signals divergence."""
    if not (p >= 1):
        raise InvalidConfigError("p must lie in [1, inf]")
    T = f.support_radius
    if not math.isfinite(T):
        raise DomainError("profile must be compactly supported")
    rho = space.rho
    if p == INF:
        grid = np.unique(np.concatenate([np.linspace(0, T, 4001)[1:], [b for b in f.breakpoints if b > 0]]))
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.abs(f(grid)) * v.eval(grid, rho=rho)
        return float(np.nanmax(vals))

    def integrand(t):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lf = np.log(np.abs(f(t)))
            lv = v.log_eval(t, rho)
            out = np.exp(p * (lf + lv) + log_density_delta(space, t))
        return np.where(np.isnan(out), 0.0, out)

    e = p * (f.origin_exponent + v.origin_exponent) + space.n - 1
    bps = set(f.breakpoints) | set(v.breakpoints)
    total = _radial_integral(space, integrand, e, T, sorted(bps))
    return total ** (1 / p)
