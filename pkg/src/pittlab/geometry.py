"""Rank-one symmetric spaces of noncompact type and their radial measure.

A space is fixed by the root multiplicities ``(m1, m2)``.  Radial functions
are profiles on ``[0, inf)`` integrated against ``Delta(t) dt`` with

    Delta(t) = (2 sinh t)^(m1 + m2) (2 cosh t)^m2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.special import comb, roots_legendre

from .errors import InvalidConfigError

INF = math.inf


@dataclass(frozen=True)
class SpaceParams:
    m1: int
    m2: int

    def __post_init__(self):
        for name in ("m1", "m2"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidConfigError(f"{name} must be an integer, got {value!r}")
        if self.m1 < 1:
            raise InvalidConfigError(f"m1 must be >= 1, got {self.m1}")
        if self.m2 < 0:
            raise InvalidConfigError(f"m2 must be >= 0, got {self.m2}")

    @property
    def n(self) -> int:
        return self.m1 + self.m2 + 1

    @property
    def rho(self) -> float:
        return (self.m1 + 2 * self.m2) / 2

    def __str__(self):
        return f"X(m1={self.m1}, m2={self.m2})"

    def as_dict(self) -> dict:
        return {"m1": self.m1, "m2": self.m2, "n": self.n, "rho": self.rho}

    @cached_property
    def _exp_expansion(self) -> tuple[np.ndarray, np.ndarray]:
        # Delta(t) = sum_k coef_k exp(rate_k t), exact for integer multiplicities
        a, b = self.m1 + self.m2, self.m2
        acc: dict[int, float] = {}
        for j in range(a + 1):
            for k in range(b + 1):
                rate = a - 2 * j + b - 2 * k
                acc[rate] = acc.get(rate, 0.0) + (-1) ** j * comb(a, j, exact=True) * comb(b, k, exact=True)
        rates = np.array(sorted(acc), dtype=float)
        coefs = np.array([acc[int(r)] for r in rates], dtype=float)
        return rates, coefs


def make_space(m1: int, m2: int) -> SpaceParams:
    return SpaceParams(m1, m2)


def density_delta(space: SpaceParams, t):
    """Radial density ``Delta(t)``; accepts scalars or arrays."""
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise InvalidConfigError("density_delta needs finite radii")
    out = (2 * np.sinh(np.abs(t))) ** (space.m1 + space.m2) * (2 * np.cosh(t)) ** space.m2
    return out if out.ndim else float(out)


def log_density_delta(space: SpaceParams, t):
    """``log Delta(t)`` without overflow for large ``t`` (``-inf`` at 0)."""
    t = np.abs(np.asarray(t, dtype=float))
    with np.errstate(divide="ignore"):
        # log(2 sinh t) = t + log(1 - e^{-2t}); log(2 cosh t) = t + log(1 + e^{-2t})
        ls = np.where(t > 0.5, t + np.log1p(-np.exp(-2 * t)), np.log(2 * np.sinh(t)))
        lc = t + np.log1p(np.exp(-2 * t))
    out = (space.m1 + space.m2) * ls + space.m2 * lc
    return out if out.ndim else float(out)


def density_log_derivative(space: SpaceParams, t):
    """``Delta'(t) / Delta(t)``, the drift of the radial Laplacian."""
    t = np.asarray(t, dtype=float)
    out = (space.m1 + space.m2) / np.tanh(t) + space.m2 * np.tanh(t)
    return out if out.ndim else float(out)


_GL_X, _GL_W = roots_legendre(40)


def ball_volume(space: SpaceParams, t):
    """Measure of the geodesic ball of radius ``t``: ``m(t) = int_0^t Delta``."""
    t = np.abs(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    small = t < 3.0
    if np.any(small):
        ts = t[small][..., None]
        nodes = ts * (_GL_X + 1) / 2
        out[small] = (ts[..., 0] / 2) * (density_delta(space, nodes) * _GL_W).sum(-1)
    big = ~small
    if np.any(big):
        with np.errstate(over="ignore"):
            out[big] = np.exp(log_ball_volume(space, t[big]))
    return out if out.ndim else float(out)


def log_ball_volume(space: SpaceParams, t):
    """``log m(t)``, finite for arbitrarily large ``t``."""
    t = np.abs(np.asarray(t, dtype=float))
    out = np.empty_like(t)
    small = t < 3.0
    if np.any(small):
        with np.errstate(divide="ignore"):
            out[small] = np.log(ball_volume(space, t[small]))
    big = ~small
    if np.any(big):
        rates, coefs = space._exp_expansion
        top = 2 * space.rho
        tb = t[big][..., None]
        # m(t) e^{-top t} = sum_k coef_k (e^{(r_k - top) t} - e^{-top t}) / r_k  (+ coef_0 t e^{-top t})
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(
                rates == 0,
                coefs * tb * np.exp(-top * tb),
                coefs * (np.exp((rates - top) * tb) - np.exp(-top * tb)) / np.where(rates == 0, 1.0, rates),
            )
        out[big] = top * t[big] + np.log(terms.sum(-1))
    return out if out.ndim else float(out)


def inverse_ball_volume(space: SpaceParams, volume):
    """Radius ``t`` with ``m(t) = volume`` (Newton in log variables)."""
    v = np.asarray(volume, dtype=float)
    if np.any(v < 0):
        raise InvalidConfigError("volumes must be nonnegative")
    out = np.zeros_like(v)
    pos = v > 0
    if np.any(pos):
        lv = np.log(v[pos])
        # initial guess from the two asymptotic regimes
        c0 = 2.0 ** (space.n - 1 + space.m2) / space.n
        small = np.exp((lv - math.log(c0)) / space.n)
        large = (lv + math.log(2 * space.rho)) / (2 * space.rho)
        t = np.where(small < 1.0, small, np.maximum(large, 1.0))
        for _ in range(60):
            lm = log_ball_volume(space, t)
            # d log m / dt = Delta / m
            slope = np.exp(log_density_delta(space, t) - lm)
            step = (lm - lv) / slope
            t_new = np.maximum(t - step, t / 4)
            if np.all(np.abs(t_new - t) <= 1e-15 * np.maximum(t_new, 1e-300)):
                t = t_new
                break
            t = t_new
        out[pos] = t
    return out if out.ndim else float(out)


def parse_exponent(value) -> float:
    """Lebesgue exponent from ``"4/3"``, ``"1.5"``, ``"inf"`` or a number."""
    if isinstance(value, (int, float, np.floating, np.integer)) and not isinstance(value, bool):
        p = float(value)
    else:
        text = str(value).strip().lower()
        if text in {"inf", "infinity", "oo", "+inf"}:
            p = INF
        else:
            try:
                p = float(Fraction(text))
            except (ValueError, ZeroDivisionError) as exc:
                raise InvalidConfigError(f"cannot parse exponent {value!r}") from exc
    if not (p >= 1.0):
        raise InvalidConfigError(f"exponent must lie in [1, inf], got {value!r}")
    return p


def conjugate(p: float) -> float:
    """Hölder conjugate with ``1' = inf`` and ``inf' = 1``."""
    if p == 1:
        return INF
    if p == INF:
        return 1.0
    if p < 1:
        raise InvalidConfigError(f"exponent must lie in [1, inf], got {p}")
    return p / (p - 1)


def reciprocal(p: float) -> float:
    """``1/p`` with ``1/inf = 0``."""
    return 0.0 if p == INF else 1.0 / p


def rho_p(space: SpaceParams, p: float) -> float:
    """Strip coordinate ``(2/p - 1) rho``; ``rho_inf = -rho``."""
    if not (p >= 1):
        raise InvalidConfigError(f"exponent must lie in [1, inf], got {p}")
    return (2 * reciprocal(p) - 1) * space.rho
