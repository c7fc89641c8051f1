"""Distribution functions, non-increasing rearrangements and their closed-form envelopes.

Two ambient measures are used: ``|c(lambda)|^-2 dlambda`` on the whole line
(spectral side) and ``Delta(t) dt`` on ``(0, inf)`` (spatial side).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidConfigError, UnsupportedShapeError
from .geometry import INF, SpaceParams, ball_volume, inverse_ball_volume, log_density_delta
from .harish_chandra import PlancherelModel, log_plancherel_density
from .profiles import Cutoff, Reciprocal, Tabulated, WeightSpec, _radial_integral
from .quadrature import gauss_legendre

SIDES = ("spectral", "spatial")


# ---------------------------------------------------------------- monotone profiles


@dataclass(frozen=True)
class MonotoneProfile:
    """Non-increasing function on ``(0, inf)`` given by samples and power-law pieces.

    Between breakpoints the profile is interpolated log-linearly (a power law);
    below the first breakpoint it behaves like ``t^head_exponent``; beyond the
    last one like ``t^tail_exponent``, or vanishes when ``tail_exponent`` is None.
    A zero sample ends the support: the previous value is held up to it.
    """

    breakpoints: tuple
    values: tuple
    tail_exponent: float | None = None
    head_exponent: float = 0.0
    notes: tuple = field(default=(), compare=False)

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if b.ndim != 1 or b.shape != v.shape or b.size == 0:
            raise InvalidConfigError("monotone profile needs matching 1-d breakpoints and values")
        if np.any(b <= 0) or np.any(np.diff(b) <= 0):
            raise InvalidConfigError("breakpoints must be positive and increasing")
        if np.any(v < 0) or np.any(np.isnan(v)):
            raise InvalidConfigError("values must be nonnegative")
        if np.any(np.diff(v) > 1e-12 * np.maximum(1.0, np.abs(v[:-1]))):
            raise InvalidConfigError("values must be non-increasing")
        if self.head_exponent > 0:
            raise InvalidConfigError("a non-increasing profile needs head_exponent <= 0")
        if self.tail_exponent is not None and self.tail_exponent > 0:
            raise InvalidConfigError("a non-increasing profile needs tail_exponent <= 0")
        v = np.minimum.accumulate(v)
        object.__setattr__(self, "breakpoints", tuple(b.tolist()))
        object.__setattr__(self, "values", tuple(v.tolist()))

    @classmethod
    def constant(cls, value: float = 1.0) -> "MonotoneProfile":
        return cls((1.0,), (float(value),), tail_exponent=0.0, head_exponent=0.0)

    @classmethod
    def power(cls, exponent: float, scale: float = 1.0) -> "MonotoneProfile":
        """``scale * t^exponent`` on all of ``(0, inf)``."""
        return cls((1.0,), (float(scale),), tail_exponent=exponent, head_exponent=exponent)

    @property
    def is_zero(self) -> bool:
        return self.values[0] == 0

    # segment data: on [b_i, b_{i+1}) value v_i (t / b_i)^k_i
    def _segments(self):
        b = np.asarray(self.breakpoints)
        v = np.asarray(self.values)
        with np.errstate(divide="ignore", invalid="ignore"):
            k = np.where((v[:-1] > 0) & (v[1:] > 0), np.log(v[1:] / v[:-1]) / np.log(b[1:] / b[:-1]), 0.0)
        return b, v, k

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        b, v, k = self._segments()
        out = np.zeros(flat.shape)
        head = flat < b[0]
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out[head] = v[0] * (flat[head] / b[0]) ** self.head_exponent if v[0] > 0 else 0.0
            idx = np.searchsorted(b, flat, side="right") - 1
            mid = (idx >= 0) & (idx < len(b) - 1)
            i = idx[mid]
            out[mid] = v[i] * (flat[mid] / b[i]) ** k[i]
            tail = flat >= b[-1]
            if self.tail_exponent is not None and v[-1] > 0:
                out[tail] = v[-1] * (flat[tail] / b[-1]) ** self.tail_exponent
            else:
                out[tail] = 0.0
                out[flat == b[-1]] = v[-1]
        out = np.where(np.isnan(out), 0.0, out).reshape(t.shape)
        return out if out.ndim else float(out)

    # -- exact integration of U(t)^p t^e ------------------------------------------------

    def _piece_integrals(self, p: float, e: float) -> tuple[float, np.ndarray, float]:
        """(head integral over (0, b_0), per-segment integrals, tail integral)."""
        b, v, k = self._segments()
        head = _power_integral_to_zero(v[0], b[0], self.head_exponent, p, e)
        seg = _power_segment(v[:-1], b[:-1], b[1:], k, p, e)
        if self.tail_exponent is None:
            tail = 0.0
        else:
            tail = _power_integral_to_inf(v[-1], b[-1], self.tail_exponent, p, e)
        return head, seg, tail

    def cumulative(self, p: float, e: float, x):
        """``int_0^x U(t)^p t^e dt`` for each ``x`` (``inf`` where divergent)."""
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        b, v, k = self._segments()
        head, seg, tail = self._piece_integrals(p, e)
        cum = np.concatenate([[head], head + np.cumsum(seg)])
        out = np.empty(flat.shape)
        for j, xx in enumerate(flat):
            if xx <= 0:
                out[j] = 0.0
            elif xx < b[0]:
                u0 = v[0] * (xx / b[0]) ** self.head_exponent if v[0] > 0 else 0.0
                out[j] = _power_integral_to_zero(u0, xx, self.head_exponent, p, e)
            elif xx >= b[-1]:
                if self.tail_exponent is None or v[-1] == 0:
                    out[j] = cum[-1]
                elif not math.isfinite(xx):
                    out[j] = cum[-1] + tail
                else:
                    out[j] = cum[-1] + float(_power_segment(v[-1], b[-1], xx, self.tail_exponent, p, e))
            else:
                i = int(np.searchsorted(b, xx, side="right") - 1)
                out[j] = cum[i] + float(_power_segment(v[i], b[i], xx, k[i], p, e))
        out = out.reshape(x.shape)
        return out if out.ndim else float(out)

    def tail_integral(self, p: float, e: float, x):
        """``int_x^inf U(t)^p t^e dt`` for each ``x``."""
        x = np.asarray(x, dtype=float)
        total = self.cumulative(p, e, np.inf)
        flat = x.ravel()
        out = np.empty(flat.shape)
        for j, xx in enumerate(flat):
            if not math.isfinite(total):
                # integrate the tail directly to avoid inf - inf
                out[j] = self._direct_tail(p, e, xx)
            else:
                out[j] = max(total - float(self.cumulative(p, e, xx)), 0.0)
                # guard cancellation for far tails
                if out[j] < 1e-8 * total:
                    out[j] = self._direct_tail(p, e, xx)
        out = out.reshape(x.shape)
        return out if out.ndim else float(out)

    def _direct_tail(self, p: float, e: float, x: float) -> float:
        b, v, k = self._segments()
        if x <= 0:
            return float(self.cumulative(p, e, np.inf))
        head, seg, tail = self._piece_integrals(p, e)
        total = tail
        if x < b[0]:
            u0 = v[0] * (x / b[0]) ** self.head_exponent if v[0] > 0 else 0.0
            total += float(_power_segment(u0, x, b[0], self.head_exponent, p, e)) + float(np.sum(seg))
            return total
        if x >= b[-1]:
            if self.tail_exponent is None or v[-1] == 0:
                return 0.0
            ux = v[-1] * (x / b[-1]) ** self.tail_exponent
            return _power_integral_to_inf(ux, x, self.tail_exponent, p, e)
        i = int(np.searchsorted(b, x, side="right") - 1)
        ux = v[i] * (x / b[i]) ** k[i] if v[i] > 0 else 0.0
        total += float(_power_segment(ux, x, b[i + 1], k[i], p, e)) + float(np.sum(seg[i + 1:]))
        return total

    def sup_weighted(self, c: float, lo: float, hi: float) -> float:
        """``sup_{lo < t < hi} U(t) t^c`` (power-law pieces peak at their ends)."""
        b = np.asarray(self.breakpoints)
        if lo <= 0 and (self.head_exponent + c < 0) and self.values[0] > 0:
            return INF
        if not math.isfinite(hi) and self.tail_exponent is not None and self.values[-1] > 0 \
                and self.tail_exponent + c > 0:
            return INF
        pts = [lo] if lo > 0 else [min(b[0], hi) if math.isfinite(hi) else b[0]]
        pts += [x for x in b if lo < x < hi]
        if math.isfinite(hi):
            pts.append(hi * (1 - 1e-15))
        pts = np.asarray(pts, dtype=float)
        pts = pts[pts > 0]
        with np.errstate(over="ignore"):
            vals = np.asarray(self(pts)) * pts ** c
        best = float(np.max(vals)) if vals.size else 0.0
        if lo <= 0 and self.head_exponent + c == 0:
            best = max(best, self.values[0] * b[0] ** c)
        return best

    def to_csv_rows(self):
        return [(b, v) for b, v in zip(self.breakpoints, self.values)]

    def as_dict(self) -> dict:
        return {"breakpoints": list(self.breakpoints), "values": list(self.values),
                "head_exponent": self.head_exponent, "tail_exponent": self.tail_exponent,
                "notes": list(self.notes)}


def _log_power_factor(L, K):
    """``log int_1^{e^L} y^K dy`` for ``L >= 0``."""
    s = (K + 1) * L
    if L == 0:
        return -INF
    if abs(s) < 1e-10:
        return math.log(L) + math.log1p(s / 2)
    if s > 0:
        return s + math.log(-math.expm1(-s)) - math.log(K + 1)
    return math.log(-math.expm1(s)) - math.log(-(K + 1))


def _power_segment(va, a, b, k, p, e):
    """``int_a^b (va (t/a)^k)^p t^e dt``, evaluated in log space."""
    va, a, b, k = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (va, a, b, k)))
    out = np.zeros(va.shape)
    for idx in np.ndindex(va.shape):
        if va[idx] <= 0 or b[idx] <= a[idx]:
            continue
        K = p * k[idx] + e
        log_value = p * math.log(va[idx]) + (e + 1) * math.log(a[idx]) + _log_power_factor(math.log(b[idx] / a[idx]), K)
        out[idx] = math.exp(log_value) if log_value < 709.0 else INF
    return out if out.ndim else float(out)


def _power_integral_to_zero(vx, x, h, p, e) -> float:
    """``int_0^x (vx (t/x)^h)^p t^e dt``; ``inf`` when the origin singularity is not integrable."""
    if vx == 0:
        return 0.0
    K = p * h + e
    if K <= -1:
        return INF
    return float(math.exp(p * math.log(vx) + (e + 1) * math.log(x)) / (K + 1))


def _power_integral_to_inf(vx, x, tau, p, e) -> float:
    """``int_x^inf (vx (t/x)^tau)^p t^e dt``; ``inf`` when the tail is not integrable."""
    if vx == 0:
        return 0.0
    K = p * tau + e
    if K >= -1:
        return INF
    return float(math.exp(p * math.log(vx) + (e + 1) * math.log(x)) / (-(K + 1)))


# ---------------------------------------------------------------- ambient measures


class SpectralVolume:
    """``M(lambda) = 2 int_0^lambda |c(s)|^-2 ds``, the measure of ``[-lambda, lambda]``, and its inverse."""

    def __init__(self, model: PlancherelModel, lo: float = 1e-6, hi: float = 1e9, per_decade: int = 40):
        self.model = model
        self.knots = np.logspace(math.log10(lo), math.log10(hi), int(round(per_decade * math.log10(hi / lo))) + 1)
        x, w = gauss_legendre(12)
        first = self._gl(0.0, self.knots[0], 20)
        u_lo, u_hi = np.log(self.knots[:-1]), np.log(self.knots[1:])
        half = (u_hi - u_lo)[:, None] / 2
        u = u_lo[:, None] + half * (1 + x)
        lam = np.exp(u)
        pieces = np.sum(w * half * 2 * lam * self._density(lam), axis=1)
        self.cum = np.concatenate([[first], first + np.cumsum(pieces)])
        self._log_cum = np.log(self.cum)
        self._log_knots = np.log(self.knots)

    def _density(self, lam):
        return np.exp(log_plancherel_density(self.model, lam))

    def _gl(self, a: float, b: float, order: int = 16) -> float:
        x, w = gauss_legendre(order)
        lam = a + (b - a) * (1 + x) / 2
        return float((b - a) / 2 * np.sum(w * 2 * self._density(lam)))

    def __call__(self, lam):
        lam = np.abs(np.asarray(lam, dtype=float))
        flat = lam.ravel()
        out = np.empty(flat.shape)
        n = self.model.space.n
        for j, x in enumerate(flat):
            if x == 0:
                out[j] = 0.0
            elif not math.isfinite(x):
                out[j] = INF
            elif x <= self.knots[0]:
                out[j] = self._gl(0.0, x, 20)
            elif x >= self.knots[-1]:
                top = self.knots[-1]
                out[j] = self.cum[-1] + 2 * self._density(top) * top / n * ((x / top) ** n - 1)
            else:
                i = int(np.searchsorted(self.knots, x, side="right") - 1)
                out[j] = self.cum[i] + self._gl(self.knots[i], x)
        out = out.reshape(lam.shape)
        return out if out.ndim else float(out)

    def inverse(self, volume):
        """The radius ``lambda`` with ``M(lambda) = volume``."""
        vol = np.asarray(volume, dtype=float)
        flat = vol.ravel()
        out = np.empty(flat.shape)
        for j, v in enumerate(flat):
            if v <= 0:
                out[j] = 0.0
                continue
            if not math.isfinite(v):
                out[j] = INF
                continue
            lv = math.log(v)
            if lv <= self._log_cum[0]:
                lam = self.knots[0] * math.exp((lv - self._log_cum[0]) / 3)
            elif lv >= self._log_cum[-1]:
                lam = self.knots[-1] * math.exp((lv - self._log_cum[-1]) / self.model.space.n)
            else:
                lam = math.exp(np.interp(lv, self._log_cum, self._log_knots))
            for _ in range(30):
                m = float(self(lam))
                step = (m - v) / (2 * float(self._density(lam)))
                lam_new = lam - step
                if lam_new <= 0:
                    lam_new = lam / 2
                if abs(lam_new - lam) <= 1e-15 * lam:
                    lam = lam_new
                    break
                lam = lam_new
            out[j] = lam
        out = out.reshape(vol.shape)
        return out if out.ndim else float(out)


@lru_cache(maxsize=32)
def spectral_volume(model_key: SpaceParams) -> SpectralVolume:
    return SpectralVolume(PlancherelModel(model_key))


def _check_side(side: str) -> None:
    if side not in SIDES:
        raise InvalidConfigError(f"side must be one of {SIDES}, got {side!r}")


def measure_of_ball(side: str, model: PlancherelModel, radius):
    """Measure of ``{|x| < radius}`` on either side."""
    _check_side(side)
    if side == "spatial":
        return ball_volume(model.space, radius)
    return spectral_volume(model.space)(radius)


def radius_of_measure(side: str, model: PlancherelModel, volume):
    _check_side(side)
    if side == "spatial":
        return inverse_ball_volume(model.space, volume)
    return spectral_volume(model.space).inverse(volume)


def _log_density(side: str, model: PlancherelModel, x):
    if side == "spatial":
        return log_density_delta(model.space, x)
    return log_plancherel_density(model, x) + math.log(2)


# ---------------------------------------------------------------- distribution functions


def _support_limit(w: WeightSpec) -> float:
    if isinstance(w, Cutoff):
        return w.radius
    if isinstance(w, Tabulated) and w.values[-1] == 0:
        return w.grid[-1]
    return INF


def distribution_function(w: WeightSpec, side: str, model: PlancherelModel, alpha: float) -> float:
    """Measure of ``{|w| > alpha}``; ``inf`` when the superlevel set has infinite measure."""
    _check_side(side)
    if not (alpha > 0):
        raise InvalidConfigError("alpha must be positive")
    rho = model.space.rho
    if isinstance(w, Tabulated):
        return _tabulated_distribution(w, side, model, alpha)
    kind = w.monotone
    if kind == "const":
        value = float(w.eval(1.0, rho))
        return INF if value > alpha else 0.0
    la = math.log(alpha)
    support = _support_limit(w)
    if kind == "dec":
        # {w > alpha} = ball of radius r_alpha
        if float(w.log_eval(np.array(1e-300), rho)) <= la:
            return 0.0
        r = _crossing(w, rho, la, decreasing=True, upper=support)
        return float(measure_of_ball(side, model, r))
    if kind == "inc":
        # complement of a ball
        r = _crossing(w, rho, la, decreasing=False, upper=INF)
        if r == INF:
            return 0.0
        return INF
    raise UnsupportedShapeError("distribution function needs a monotone or tabulated weight")


def _crossing(w: WeightSpec, rho: float, log_alpha: float, decreasing: bool, upper: float) -> float:
    """Boundary radius of ``{w > alpha}`` for a monotone weight."""
    sign = 1.0 if decreasing else -1.0

    def g(x):
        return sign * (float(w.log_eval(np.array(x), rho)) - log_alpha)

    # g > 0 inside the superlevel set (decreasing) / outside (increasing)
    hi = min(1.0, upper) if math.isfinite(upper) else 1.0
    if math.isfinite(upper):
        edge = upper * (1 - 1e-15)
        if g(edge) > 0:
            return upper
    while g(hi) > 0:
        hi *= 2
        if hi > 1e300:
            return INF
    lo = hi / 2
    while g(lo) <= 0:
        lo /= 2
        if lo < 1e-300:
            return 0.0
    return brentq(g, lo, hi, xtol=1e-300, rtol=1e-15)


def _tabulated_distribution(w: Tabulated, side: str, model: PlancherelModel, alpha: float) -> float:
    g = np.asarray(w.grid)
    v = np.asarray(w.values)
    if v[-1] > alpha:
        return INF
    total = 0.0
    # piecewise linear in |x|: exact crossing points on every cell
    if g[0] > 0 and v[0] > alpha:
        total += float(measure_of_ball(side, model, g[0]))
    for a, b, va, vb in zip(g[:-1], g[1:], v[:-1], v[1:]):
        if va <= alpha and vb <= alpha:
            continue
        if va > alpha and vb > alpha:
            lo, hi = a, b
        else:
            x = a + (alpha - va) / (vb - va) * (b - a)
            lo, hi = (a, x) if va > alpha else (x, b)
        total += float(measure_of_ball(side, model, hi)) - float(measure_of_ball(side, model, lo))
    return total


# ---------------------------------------------------------------- rearrangements


def default_t_grid(per_decade: int = 40, lo: float = 1e-12, hi: float = 1e12) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), int(round(per_decade * math.log10(hi / lo))) + 1)


def _origin_scaling(side: str, space: SpaceParams) -> float:
    """``k`` with ``measure of the ball of radius x ~ x^k`` as ``x -> 0``."""
    return 3.0 if side == "spectral" else float(space.n)


def rearrange(w: WeightSpec, side: str, model: PlancherelModel, t_grid=None,
              reciprocal: bool | None = None) -> MonotoneProfile:
    """Non-increasing rearrangement sampled on ``t_grid``.

    On the spatial side the reciprocal ``1/w`` is rearranged (the ``1/V`` convention)
    unless ``reciprocal`` says otherwise.
    """
    _check_side(side)
    if reciprocal is None:
        reciprocal = side == "spatial"
    target = Reciprocal(w) if reciprocal else w
    t = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float).ravel()
    if t.size == 0 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise InvalidConfigError("t_grid must be positive and increasing")
    kind = target.monotone
    if kind in ("dec", "const") and not isinstance(target, Tabulated):
        return _rearrange_monotone(target, side, model, t)
    if isinstance(target, Tabulated) or (isinstance(target, Reciprocal) and isinstance(target.inner, Tabulated)):
        return _rearrange_by_inversion(target, side, model, t)
    raise UnsupportedShapeError("rearrangement needs a radially non-increasing or tabulated weight")


def _rearrange_monotone(w: WeightSpec, side: str, model: PlancherelModel, t: np.ndarray) -> MonotoneProfile:
    rho = model.space.rho
    notes = []
    support = _support_limit(w)
    if math.isfinite(support):
        cap = float(measure_of_ball(side, model, support))
        t = t[t < cap]
        t = np.append(t, cap)
        tail = None
    else:
        tail = 0.0
    x = np.asarray(radius_of_measure(side, model, t), dtype=float)
    if math.isfinite(support):
        x[-1] = support * (1 - 1e-15)
    with np.errstate(over="ignore", divide="ignore"):
        values = np.exp(np.asarray(w.log_eval(x, rho), dtype=float))
    values = np.minimum.accumulate(values)
    head = w.origin_exponent / _origin_scaling(side, model.space)
    if not math.isfinite(values[0]):
        raise UnsupportedShapeError("rearranged weight is infinite on the whole grid")
    if tail is not None:
        if values.size >= 2 and values[-1] > 0 and values[-2] > 0:
            tail = float(np.log(values[-1] / values[-2]) / np.log(t[-1] / t[-2]))
            tail = min(tail, 0.0)
            notes.append("tail exponent estimated from the last grid cell")
        else:
            tail = None
    else:
        notes.append("compactly supported: zero beyond the last breakpoint")
    return MonotoneProfile(tuple(t), tuple(values), tail_exponent=tail, head_exponent=min(head, 0.0),
                           notes=tuple(notes))


def _rearrange_by_inversion(w: WeightSpec, side: str, model: PlancherelModel, t: np.ndarray) -> MonotoneProfile:
    """Generalized inverse of the distribution function sampled on a log grid of levels."""
    inner = w.inner if isinstance(w, Reciprocal) else w
    vals = np.asarray(inner.values, dtype=float)
    if isinstance(w, Reciprocal):
        if np.any(vals <= 0):
            raise UnsupportedShapeError("reciprocal of a weight with zeros has unbounded superlevel sets")
        vals = 1.0 / vals
    table = Tabulated(inner.grid, tuple(vals.tolist()))
    top = float(vals.max())
    floor = float(vals[-1])
    if floor > 0:
        levels = np.geomspace(floor, top, 2000)
    else:
        # linear interpolation down to zero passes through every small level
        levels = np.geomspace(top * 1e-12, top, 3000)
    levels = np.unique(np.concatenate([levels, vals[vals > 0]]))
    d = np.array([_tabulated_distribution(table, side, model, a) for a in levels])
    # f*(d(alpha)) = alpha exactly; keep those pairs as breakpoints
    keep = (d > 0) & np.isfinite(d)
    d, lv = d[keep][::-1], levels[keep][::-1]
    d, first = np.unique(d, return_index=True)
    lv = lv[first]
    below = t[t < d[0]]
    b = np.concatenate([below, d])
    v = np.concatenate([np.full(below.shape, top), lv])
    tail = 0.0 if floor > 0 else None
    if floor == 0:
        # the smallest level reached is ~1e-12 of the top; the support ends there
        b = np.append(b, b[-1] * (1 + 1e-12))
        v = np.append(v, 0.0)
    return MonotoneProfile(tuple(b), tuple(np.minimum.accumulate(v)), tail_exponent=tail, head_exponent=0.0,
                           notes=("distribution-function inversion on a log grid of levels",))


def discrete_rearrangement(values, measures) -> MonotoneProfile:
    """Rearrangement of a step function given by cell values and cell measures."""
    vals = np.abs(np.asarray(values, dtype=float)).ravel()
    mu = np.asarray(measures, dtype=float).ravel()
    if vals.shape != mu.shape or np.any(mu < 0):
        raise InvalidConfigError("values and nonnegative measures must match")
    order = np.argsort(-vals, kind="stable")
    v_sorted = vals[order]
    cum = np.cumsum(mu[order])
    keep = np.concatenate([np.diff(cum) > 0, [True]]) & (mu[order] > 0)
    cum, v_sorted = cum[keep], v_sorted[keep]
    # value v_k on (cum_{k-1}, cum_k]: sample at the right ends as a step profile
    return MonotoneProfile(tuple(cum), tuple(v_sorted), tail_exponent=None, head_exponent=0.0,
                           notes=("step rearrangement of sampled data",))


# ---------------------------------------------------------------- identities and envelopes


def layer_cake_check(w: WeightSpec, side: str, model: PlancherelModel, p: float,
                     t_grid=None) -> dict:
    """Compare ``int |w|^p dmu`` with ``int_0^inf (w^*)^p dt`` by independent quadratures."""
    _check_side(side)
    if not (p >= 1 and math.isfinite(p)):
        raise InvalidConfigError("layer-cake check needs finite p >= 1")
    support = _support_limit(w)
    if not math.isfinite(support):
        return {"lhs": INF, "rhs": INF, "relative_error": None, "divergent": True}
    rho = model.space.rho

    def integrand(x):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            out = np.exp(p * np.asarray(w.log_eval(x, rho), dtype=float) + _log_density(side, model, x))
        return np.where(np.isnan(out), 0.0, out)

    # |c|^-2 ~ lambda^2 and Delta ~ t^(n-1) at the origin
    e = p * w.origin_exponent + (2.0 if side == "spectral" else model.space.n - 1.0)
    lhs = _radial_integral(model.space, integrand, e, support, w.breakpoints, panel_width=0.05)
    prof = rearrange(w, side, model, t_grid, reciprocal=False)
    rhs = float(prof.cumulative(p, 0.0, INF))
    divergent = not (math.isfinite(lhs) and math.isfinite(rhs))
    rel = None if divergent or lhs == 0 else abs(lhs - rhs) / abs(lhs)
    return {"lhs": lhs, "rhs": rhs, "relative_error": rel, "divergent": divergent}


def envelope_polyexp(kappa: float, delta: float, t, space: SpaceParams):
    """Upper envelope for ``(1/v_{kappa,delta})^*``; switches branch at ``t = 2 e^{2 rho}``."""
    t = np.asarray(t, dtype=float)
    rho, n = space.rho, space.n
    switch = 2 * math.exp(2 * rho)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        near = t ** (-kappa / n) * math.exp(-2 * rho * delta)
        far = t ** (-delta) * np.log(t / 2) ** (-kappa) if kappa else t ** (-delta)
    out = np.where(t <= switch, near, far)
    return out if out.ndim else float(out)


def envelope_u_sigma(sigma: float, t, n: int):
    """Two-sided envelope for ``(|lambda|^-sigma)^*``: ``t^(-sigma/3)`` up to 1, ``t^(-sigma/n)`` beyond."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(t <= 1, t ** (-sigma / 3), t ** (-sigma / n))
    return out if out.ndim else float(out)
