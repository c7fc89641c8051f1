"""Sufficiency and necessity functionals for weighted Fourier inequalities.

Profiles for the space side are passed as ``Vinv = 1/V``, the non-increasing
rearrangement of ``1/v``; then ``V^(-p') = Vinv^(p')``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.optimize import minimize_scalar
from scipy.special import logsumexp

from .errors import InvalidConfigError
from .geometry import INF, SpaceParams, conjugate, log_density_delta, reciprocal, rho_p
from .harish_chandra import PlancherelModel, log_plancherel_density
from .profiles import WeightSpec
from .quadrature import graded_rule, panel_rule
from .rearrangement import MonotoneProfile

DEFAULT_THETA0 = 1.5
REGION_TOL = 1e-4
STABILITY_TOL = 0.05


def default_s_grid(per_decade: int = 20, lo: float = 1e-4, hi: float = 1e4) -> np.ndarray:
    return np.logspace(math.log10(lo), math.log10(hi), int(round(per_decade * math.log10(hi / lo))) + 1)


# ---------------------------------------------------------------- configuration


@dataclass(frozen=True)
class ExponentConfig:
    p: float
    q: float
    q0: float = 2.0
    theta0: float = DEFAULT_THETA0

    def __post_init__(self):
        for name in ("p", "q", "q0"):
            value = getattr(self, name)
            if not (1 <= value <= INF) or math.isnan(value):
                raise InvalidConfigError(f"{name} must lie in [1, inf], got {value}")
        if not (0 < self.theta0 < math.pi / 2):
            raise InvalidConfigError("theta0 must lie in (0, pi/2)")

    @property
    def p_conj(self) -> float:
        return conjugate(self.p)

    @property
    def q0_conj(self) -> float:
        return conjugate(self.q0)

    @property
    def q0_max(self) -> float:
        return max(self.q0, self.q0_conj)

    @property
    def q0_small(self) -> float:
        """``q0`` folded into ``[1, 2]``."""
        return min(self.q0, self.q0_conj)

    def rho_q0(self, space: SpaceParams) -> float:
        return rho_p(space, self.q0)

    def require_sufficiency_range(self) -> None:
        if not self.p <= self.q:
            raise InvalidConfigError("sufficiency checks need p <= q")
        if self.q0 in (1.0, INF):
            raise InvalidConfigError("sufficiency is only available for 1 < q0 < inf")

    def require_open_range(self) -> None:
        if not (1 < self.p < INF and 1 < self.q < INF):
            raise InvalidConfigError("necessity checks need 1 < p, q < inf")

    def as_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "q0": self.q0, "theta0": self.theta0}


@dataclass(frozen=True)
class ConditionReport:
    name: str
    sup_value: float
    argmax_s: float | None
    grid: tuple
    verdict: str
    branch_values: tuple
    factor1: tuple = ()
    factor2: tuple = ()
    notes: tuple = field(default=())

    @property
    def finite(self) -> bool:
        return self.verdict == "finite"

    def csv_rows(self):
        return [(s, a, b, v) for s, a, b, v in zip(self.grid, self.factor1, self.factor2, self.branch_values)]

    def as_dict(self) -> dict:
        return {"name": self.name, "sup_value": self.sup_value, "argmax_s": self.argmax_s,
                "verdict": self.verdict, "grid": list(self.grid), "branch_values": list(self.branch_values),
                "factor1": list(self.factor1), "factor2": list(self.factor2), "notes": list(self.notes)}


# ---------------------------------------------------------------- sup scanning


def _product(f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore", over="ignore"):
        out = f1 * f2
    # 0 * inf = 0
    return np.where((f1 == 0) | (f2 == 0), 0.0, out)


def _end_diverges(values: np.ndarray, s: np.ndarray, at_right: bool) -> bool:
    """Growth test over the last decade at one end of the grid."""
    if not at_right:
        values, s = values[::-1], s[::-1]
    ls = np.log10(s)
    dist = np.abs(ls - ls[-1])
    last = values[dist <= 1.0 + 1e-9]
    if np.any(np.isinf(last)):
        return True
    if last.size < 2 or last[0] <= 0:
        return False
    if not np.all(np.diff(last) >= -1e-12 * np.abs(last[1:])):
        return False
    growth = last[-1] / last[0]
    if growth > 10:
        return True
    # sustained algebraic or logarithmic growth: the log-slope does not collapse
    before = values[(dist >= 1.0 - 1e-9) & (dist <= 2.0 + 1e-9)]
    if before.size < 2 or before[0] <= 0 or before[-1] <= 0:
        return False
    slope_last = math.log10(growth)
    slope_prev = math.log10(before[-1] / before[0])
    return slope_last > 0.02 and slope_prev > 0 and slope_last >= 0.5 * slope_prev


def _far_growth(evaluate, s: np.ndarray) -> tuple[bool, float]:
    """Probe far beyond both grid ends; returns (divergent, largest probed value).

    Only meaningful when ``evaluate`` is exact at extreme ``s`` (power-law profile pieces).
    """
    best = 0.0
    for end, sign in ((s[-1], 1.0), (s[0], -1.0)):
        probe = end * 10.0 ** (sign * np.array([4.0, 8.0, 16.0, 32.0]))
        f1, f2 = (np.asarray(x, dtype=float) for x in evaluate(probe))
        vals = _product(f1, f2)
        if np.any(np.isnan(vals)):
            continue
        if np.any(np.isinf(vals)):
            return True, INF
        best = max(best, float(vals.max()))
        if np.all(vals > 0) and np.all(np.diff(vals) > 0):
            # outward log-slope over the last 16 decades
            if math.log10(vals[-1] / vals[-2]) / 16.0 > 1e-3:
                return True, best
    return False, best


def _scan(name: str, evaluate: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]], s_grid,
          notes=(), refine: bool = True, probe: bool = False) -> ConditionReport:
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float).ravel()
    if s.size < 3 or np.any(s <= 0) or np.any(np.diff(s) <= 0):
        raise InvalidConfigError("s_grid must be positive, increasing and hold at least 3 points")
    f1, f2 = (np.asarray(x, dtype=float) for x in evaluate(s))
    vals = _product(f1, f2)
    notes = list(notes)
    if np.any(np.isnan(vals)):
        raise InvalidConfigError(f"{name}: evaluation produced NaN")
    k = int(np.argmax(vals))
    sup = float(vals[k])
    argmax = float(s[k])
    if not math.isfinite(sup):
        verdict = "divergent"
        notes.append("infinite value on the grid")
    elif _end_diverges(vals, s, True) or _end_diverges(vals, s, False):
        verdict = "divergent"
        notes.append("growth at a grid end")
    else:
        verdict = "finite"
        if probe:
            far_div, far_max = _far_growth(evaluate, s)
            if far_div:
                verdict = "divergent"
                notes.append("power-law growth beyond the grid")
            elif far_max > (1 + STABILITY_TOL) * sup:
                verdict = "unresolved"
                notes.append("values beyond the grid exceed the grid sup")
    if verdict == "finite":
        if refine and sup > 0:
            sup, argmax = _golden_refine(evaluate, s, k, sup, argmax)
            # one grid refinement: midpoints in log s
            mids = np.sqrt(s[:-1] * s[1:])
            g1, g2 = (np.asarray(x, dtype=float) for x in evaluate(mids))
            finer = _product(g1, g2)
            fine_sup = float(np.max(finer))
            if not math.isfinite(fine_sup):
                verdict = "divergent"
                notes.append("infinite value on the refined grid")
            elif abs(max(fine_sup, sup) - sup) > STABILITY_TOL * sup:
                verdict = "unresolved"
                notes.append("sup moved by more than 5% under grid refinement")
                if fine_sup > sup:
                    sup = fine_sup
                    argmax = float(mids[int(np.argmax(finer))])
    if verdict != "divergent":
        notes.append(f"grid [{s[0]:.3g}, {s[-1]:.3g}] with {s.size} points")
    return ConditionReport(name, sup, argmax, tuple(s.tolist()), verdict, tuple(vals.tolist()),
                           tuple(f1.tolist()), tuple(f2.tolist()), tuple(notes))


def _golden_refine(evaluate, s, k, sup, argmax):
    lo = math.log(s[max(k - 1, 0)])
    hi = math.log(s[min(k + 1, len(s) - 1)])
    if hi <= lo:
        return sup, argmax

    def neg(x):
        a, b = evaluate(np.array([math.exp(x)]))
        v = float(_product(np.asarray(a, dtype=float), np.asarray(b, dtype=float))[0])
        return -v if math.isfinite(v) else -1e308

    res = minimize_scalar(neg, bounds=(lo, hi), method="bounded", options={"xatol": 1e-6})
    if -res.fun > sup:
        return float(-res.fun), float(math.exp(res.x))
    return sup, argmax


# ---------------------------------------------------------------- profile integrals


def lebesgue_factor(profile: MonotoneProfile, r: float, c: float, lo: float, hi: float) -> float:
    """``(int_lo^hi (U(t) t^c)^r dt)^(1/r)``; ``r = inf`` gives the essential sup."""
    if r == INF:
        return profile.sup_weighted(c, lo, hi)
    if hi <= lo:
        return 0.0
    e = c * r
    if lo <= 0:
        total = float(profile.cumulative(r, e, hi))
    elif not math.isfinite(hi):
        total = float(profile.tail_integral(r, e, lo))
    else:
        total = float(profile.cumulative(r, e, hi)) - float(profile.cumulative(r, e, lo))
        if not math.isfinite(total):
            total = INF
    if total < 0:
        total = 0.0
    return total ** (1.0 / r) if math.isfinite(total) else INF


def _profile_notes(*profiles: MonotoneProfile) -> list[str]:
    notes = []
    for prof in profiles:
        notes.extend(prof.notes)
    return sorted(set(notes))


def local_condition_sup(U: MonotoneProfile, Vinv: MonotoneProfile, cfg: ExponentConfig,
                        s_grid=None) -> ConditionReport:
    """``sup_s (int_0^{1/s} U^q)^(1/q) (int_0^s V^(-p'))^(1/p')``."""
    cfg.require_sufficiency_range()
    q, pp = cfg.q, cfg.p_conj

    def evaluate(s):
        f1 = np.array([lebesgue_factor(U, q, 0.0, 0.0, 1.0 / x) for x in s])
        f2 = np.array([lebesgue_factor(Vinv, pp, 0.0, 0.0, x) for x in s])
        return f1, f2

    return _scan("local", evaluate, s_grid, _profile_notes(U, Vinv), probe=True)


def global_condition_sup(U: MonotoneProfile, Vinv: MonotoneProfile, cfg: ExponentConfig,
                         s_grid=None) -> ConditionReport:
    """Tail condition with the extra factor ``t^(-1/max(q0, q0'))`` inside both integrals."""
    cfg.require_sufficiency_range()
    q, pp, c = cfg.q, cfg.p_conj, -1.0 / cfg.q0_max

    def evaluate(s):
        f1 = np.array([lebesgue_factor(U, q, c, 1.0 / x, INF) for x in s])
        f2 = np.array([lebesgue_factor(Vinv, pp, c, x, INF) for x in s])
        return f1, f2

    return _scan("global", evaluate, s_grid, _profile_notes(U, Vinv), probe=True)


def l2_condition_sup(U: MonotoneProfile, Vinv: MonotoneProfile, s_grid=None) -> ConditionReport:
    """``sup_s (int_{1/s}^inf U^2 / t)^(1/2) (int_s^inf V^(-2) / t)^(1/2)``."""

    def evaluate(s):
        f1 = np.array([lebesgue_factor(U, 2.0, -0.5, 1.0 / x, INF) for x in s])
        f2 = np.array([lebesgue_factor(Vinv, 2.0, -0.5, x, INF) for x in s])
        return f1, f2

    return _scan("l2", evaluate, s_grid, _profile_notes(U, Vinv), probe=True)


# ---------------------------------------------------------------- Hardy-type conditions


class _GenericPower:
    """``int g(t)^r`` over intervals for an arbitrary nonnegative callable ``g``."""

    def __init__(self, fn: Callable, r: float, breakpoints=()):
        self.fn = fn
        self.r = r
        self.breakpoints = tuple(sorted(b for b in breakpoints if b > 0))

    def _g(self, t):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            return np.asarray(self.fn(np.asarray(t, dtype=float)), dtype=float) ** self.r

    def _local_exponent(self, a: float, b: float) -> float:
        ga, gb = float(self._g(a)), float(self._g(b))
        if ga <= 0 or gb <= 0:
            return -INF if gb <= 0 < ga else INF
        return math.log(gb / ga) / math.log(b / a)

    def piece(self, lo: float, hi: float) -> float:
        """Integral over ``[lo, hi]`` with ``0 < lo < hi < inf``, split at breakpoints."""
        cuts = [lo, *[b for b in self.breakpoints if lo < b < hi], hi]
        total = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                val, _ = integrate.quad(lambda x: float(self._g(math.exp(x))) * math.exp(x),
                                        math.log(a), math.log(b), epsrel=1e-8, limit=200)
            total += val
        return total

    def head(self, x: float) -> float:
        """``int_0^x``; power-law extrapolation decides convergence."""
        lo = x * 1e-8
        k = self._local_exponent(lo, lo * 10)
        gl = float(self._g(lo))
        if gl == 0:
            return self.piece(lo, x)
        if k <= -1 + 1e-6:
            return INF
        return self.piece(lo, x) + gl * lo / (k + 1)

    def tail(self, x: float) -> float:
        hi = max(x, 1.0) * 1e8
        k = self._local_exponent(hi / 10, hi)
        gh = float(self._g(hi))
        if gh == 0:
            return self.piece(x, hi)
        if k >= -1 - 1e-6:
            return INF
        return self.piece(x, hi) + gh * hi / (-(k + 1))

    def sup(self, lo: float, hi: float) -> float:
        a = max(lo, 1e-12)
        b = min(hi, 1e12)
        t = np.geomspace(a, b, 2001)
        t = np.unique(np.concatenate([t, [x for x in self.breakpoints if a <= x <= b]]))
        return float(np.max(self.fn(t) if np.ndim(self.fn(t)) else np.full(t.shape, self.fn(t))))


def _factor_over(fn, r: float, lo: float, hi: float, breakpoints=()) -> float:
    if isinstance(fn, MonotoneProfile):
        return lebesgue_factor(fn, r, 0.0, lo, hi)
    if r == INF:
        return _GenericPower(fn, 1.0, breakpoints).sup(lo, hi)
    gp = _GenericPower(fn, r, breakpoints)
    if lo <= 0:
        total = gp.head(hi)
    elif not math.isfinite(hi):
        total = gp.tail(lo)
    else:
        total = gp.piece(lo, hi)
    return total ** (1 / r) if math.isfinite(total) else INF


def hardy_condition(u_fn, v_fn, cfg: ExponentConfig, variant: str = "forward", s_grid=None,
                    breakpoints=()) -> ConditionReport:
    """Muckenhoupt-Bradley constant of the Hardy operator (``forward``) or its dual.

    ``u_fn``/``v_fn`` are callables on ``(0, inf)`` or :class:`MonotoneProfile`.
    """
    if variant not in ("forward", "dual"):
        raise InvalidConfigError("variant must be 'forward' or 'dual'")
    if not (1 <= cfg.p <= cfg.q <= INF):
        raise InvalidConfigError("Hardy conditions need 1 <= p <= q <= inf")
    q, pp = cfg.q, cfg.p_conj

    def v_inv(t):
        with np.errstate(divide="ignore"):
            return 1.0 / np.asarray(v_fn(t), dtype=float)

    vinv = v_inv if not isinstance(v_fn, MonotoneProfile) else None
    if vinv is None:
        raise InvalidConfigError("pass v as a callable; profiles are accepted for u only")

    def evaluate(s):
        if variant == "forward":
            f1 = np.array([_factor_over(u_fn, q, x, INF, breakpoints) for x in s])
            f2 = np.array([_factor_over(vinv, pp, 0.0, x, breakpoints) for x in s])
        else:
            f1 = np.array([_factor_over(u_fn, q, 0.0, x, breakpoints) for x in s])
            f2 = np.array([_factor_over(vinv, pp, x, INF, breakpoints) for x in s])
        return f1, f2

    return _scan(f"hardy-{variant}", evaluate, s_grid)


# ---------------------------------------------------------------- Calderon majorant


@dataclass(frozen=True)
class CalderonSegment:
    alpha1: float
    beta1: float
    alpha2: float
    beta2: float

    def __post_init__(self):
        for v in (self.alpha1, self.beta1, self.alpha2, self.beta2):
            if not (0 <= v <= 1):
                raise InvalidConfigError("segment endpoints must lie in the unit square")
        if self.alpha1 == self.alpha2 or self.beta1 == self.beta2:
            raise InvalidConfigError("segment needs alpha1 != alpha2 and beta1 != beta2")

    @classmethod
    def pitt(cls, q0: float) -> "CalderonSegment":
        """Segment joining ``(1/q0, 1/q0')`` and ``(1, 0)``."""
        if not (1 < q0 < INF):
            raise InvalidConfigError("the Pitt segment needs 1 < q0 < inf")
        return cls(1.0 / q0, reciprocal(conjugate(q0)), 1.0, 0.0)

    @property
    def slope(self) -> float:
        return (self.beta2 - self.beta1) / (self.alpha2 - self.alpha1)

    def ordered(self) -> tuple[float, float, float, float]:
        """Endpoints with ``alpha1 < alpha2``."""
        if self.alpha1 < self.alpha2:
            return self.alpha1, self.beta1, self.alpha2, self.beta2
        return self.alpha2, self.beta2, self.alpha1, self.beta1

    def kernel(self, t: float, s):
        """``s d/ds min(s^a1 / t^b1, s^a2 / t^b2)``."""
        a1, b1, a2, b2 = self.ordered()
        s = np.asarray(s, dtype=float)
        cross = t ** self.slope
        out = np.where(s <= cross, a2 * s ** a2 / t ** b2, a1 * s ** a1 / t ** b1)
        return out if out.ndim else float(out)


def calderon_majorant(seg: CalderonSegment, fstar: MonotoneProfile, t: float) -> float:
    """``int_0^inf phi(t, s) f*(s) ds / s`` with the piecewise kernel of the segment."""
    if not (t > 0):
        raise InvalidConfigError("t must be positive")
    a1, b1, a2, b2 = seg.ordered()
    cross = t ** seg.slope
    near = float(fstar.cumulative(1.0, a2 - 1.0, cross))
    far = float(fstar.tail_integral(1.0, a1 - 1.0, cross)) if a1 > 0 else 0.0
    total = 0.0
    if near:
        total += a2 * t ** (-b2) * near
    if far:
        total += a1 * t ** (-b1) * far
    return total


# ---------------------------------------------------------------- necessity functional


def _spectral_cumulative(u: WeightSpec, model: PlancherelModel, q: float, lam: np.ndarray) -> np.ndarray:
    """``int_0^lam u^q |c|^-2`` for increasing ``lam`` (``inf`` if the origin is not integrable)."""
    e = q * u.origin_exponent + 2.0
    if e <= -1:
        return np.full(lam.shape, INF)

    def log_g(x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = q * np.asarray(u.log_eval(x), dtype=float) + log_plancherel_density(model, x)
        return np.where(np.isnan(out), -np.inf, out)

    xg, wg = graded_rule(e, 0.0, 16, 0)
    pieces = np.empty(lam.shape)
    x0 = lam[0]
    nodes = x0 * xg
    with np.errstate(divide="ignore"):
        vals = log_g(nodes) - e * np.log(nodes)
    pieces[0] = math.exp(logsumexp(vals, b=wg) + (1 + e) * math.log(x0))
    for i in range(1, lam.size):
        a, b = lam[i - 1], lam[i]
        k = max(1, int(math.ceil((b - a) / max(0.5, 0.1 * a))))
        nodes, weights = panel_rule(np.linspace(a, b, k + 1), order=16)
        pieces[i] = math.exp(logsumexp(log_g(nodes), b=weights))
    return np.cumsum(pieces)


def _log_spatial_cumulative(log_g: Callable, origin_exponent: float, s: np.ndarray,
                            panel: float = 0.25) -> np.ndarray:
    """``log int_0^s g`` for increasing ``s`` given ``log g``."""
    if origin_exponent <= -1:
        return np.full(s.shape, INF)
    xg, wg = graded_rule(origin_exponent, 0.0, 16, 0)
    out = np.empty(s.shape)
    nodes = s[0] * xg
    with np.errstate(divide="ignore"):
        vals = log_g(nodes) - origin_exponent * np.log(nodes)
    out[0] = logsumexp(vals, b=wg) + (1 + origin_exponent) * math.log(s[0])
    for i in range(1, s.size):
        a, b = s[i - 1], s[i]
        k = max(1, int(math.ceil((b - a) / panel)))
        nodes, weights = panel_rule(np.linspace(a, b, k + 1), order=16)
        out[i] = np.logaddexp(out[i - 1], logsumexp(log_g(nodes), b=weights))
    return out


def necessary_condition_sup(u: WeightSpec, v: WeightSpec, cfg: ExponentConfig, kappa: float | None,
                            model: PlancherelModel, ev=None, s_grid=None, refine: bool = False) -> ConditionReport:
    """Necessity functional built from ``phi_{i rho_q0}``; ``kappa = None`` means ``1/(p-1)``.

    ``ev`` is accepted for interface symmetry; ``phi`` is taken from the cached table of the space.
    """
    from .spherical import log_phi_imag_fast

    cfg.require_open_range()
    space = model.space
    p, q, pp = cfg.p, cfg.q, cfg.p_conj
    kappa = 1.0 / (p - 1.0) if kappa is None else float(kappa)
    gamma = abs(cfg.rho_q0(space))
    rho = space.rho
    s = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float).ravel()

    def log_base(t):
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            return -pp * np.asarray(v.log_eval(t, rho), dtype=float) + log_density_delta(space, t)

    def log_phi(t):
        return log_phi_imag_fast(space, gamma, t)

    origin = -pp * v.origin_exponent + space.n - 1

    def evaluate(sv):
        order = np.argsort(sv)
        srt = sv[order]
        lam = np.sort(cfg.theta0 / srt)
        A = _spectral_cumulative(u, model, q, lam)[::-1]   # aligned with srt
        logB = _log_spatial_cumulative(lambda t: log_base(t) + kappa * p * log_phi(t), origin, srt)
        logC = _log_spatial_cumulative(lambda t: log_base(t) + (kappa + 1) * log_phi(t), origin, srt)
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            f1 = np.where(A > 0, A ** (1.0 / q), 0.0)
            log_f2 = logC - logB / p
            f2 = np.exp(np.minimum(log_f2, 709.0))
            f2 = np.where(log_f2 > 709.0, INF, f2)
            f2 = np.where(np.isnan(f2), INF, f2)
        out1, out2 = np.empty_like(f1), np.empty_like(f2)
        out1[order], out2[order] = f1, f2
        return out1, out2

    notes = [f"theta0={cfg.theta0}", f"kappa={kappa:.17g}", "spectral integral over (0, theta0/s)"]
    return _scan("necessary", evaluate, s, notes, refine=refine)


# ---------------------------------------------------------------- region algebra


def _le(a: float, b: float) -> bool:
    return a <= b + REGION_TOL


def _lt(a: float, b: float) -> bool:
    return a < b - 1e-12


def region_membership_polyexp(space: SpaceParams, cfg: ExponentConfig, sigma: float, kappa: float,
                              delta: float) -> dict:
    """Closed-form sufficient and necessary regions for ``u = |lambda|^-sigma``, ``v = t^kappa e^{2 rho delta t}``."""
    n = space.n
    p, q, q0 = cfg.p, cfg.q, cfg.q0
    ip, iq = reciprocal(p), reciprocal(q)
    ipp = 1 - ip
    # fold q0 into [1, 2]
    Q = cfg.q0_small
    iQ = reciprocal(Q)
    iQc = 1 - iQ
    notes: list[str] = []

    # -- sufficiency
    suff_viol: list[str] = []
    sufficient: bool | None
    if not (1 < p <= q < INF):
        sufficient = False
        suff_viol.append("1<p≤q<∞")
    elif q0 in (1.0, INF):
        sufficient = False
        suff_viol.append("1<q0<∞")
    else:
        common = {
            "δ≥0": _le(0.0, delta),
            "0≤κ<n/p'": _le(0.0, kappa) and _lt(kappa, n * ipp),
            "0≤σ<3/q": _le(0.0, sigma) and _lt(sigma, 3 * iq),
            "κ−σ≤n(1−1/p−1/q)": _le(kappa - sigma, n * (1 - ip - iq)),
            "σ/3+1/p'≤δ+1/q": _le(sigma / 3 + ipp, delta + iq),
        }
        branch1_hyp = _lt(p, Q) or _lt(1 / iQc if iQc > 0 else INF, q)
        general = dict(common)
        general["σ>n(1/q−1/q0')"] = _lt(n * (iq - iQc), sigma)
        general["δ>1/q0−1/p"] = _lt(iQ - ip, delta)
        ok1 = branch1_hyp and all(common.values())
        ok2 = all(general.values())
        sufficient = ok1 or ok2
        if not sufficient:
            if branch1_hyp:
                suff_viol.extend(k for k, v in common.items() if not v)
            else:
                suff_viol.append("p<q0 or q>q0'")
                suff_viol.extend(k for k, v in general.items() if not v)
        notes.append("sufficient branch: " + ("p<q0 or q>q0'" if ok1 else "general" if ok2 else "none"))

    # -- necessity
    nec_viol: list[str] = []
    necessary: bool | None
    if not (1 < p < INF and 1 < q < INF):
        necessary = None
        notes.append("necessary region needs 1<p,q<∞")
    else:
        checks = {
            "σ<3/q": _lt(sigma, 3 * iq),
            "κ<n/p'": _lt(kappa, n * ipp),
            "δ≥1/p'−1/q0'": _le(ipp - iQc, delta),
            "κ−σ≤n(1−1/p−1/q)": _le(kappa - sigma, n * (1 - ip - iq)),
        }
        if abs(delta - (ipp - iQc)) <= REGION_TOL:
            if abs(Q - 2.0) <= 1e-12:
                checks["σ+2−1/p≤κ+3/q"] = _le(sigma + 2 - ip, kappa + 3 * iq)
            else:
                checks["σ+1−1/p≤κ+3/q"] = _le(sigma + 1 - ip, kappa + 3 * iq)
            notes.append("endpoint case δ=1/p'−1/q0'")
        nec_viol = [k for k, v in checks.items() if not v]
        necessary = not nec_viol
        if n == 2:
            notes.append("necessary region derived for n≥3")
            if abs(sigma - 2 * iq) <= REGION_TOL:
                necessary = None
                notes.append("unresolved: n=2 with σ=2/q")
    violated = list(dict.fromkeys(nec_viol + suff_viol))
    return {"sufficient": sufficient, "necessary": necessary, "violated": violated,
            "violated_sufficient": suff_viol, "violated_necessary": nec_viol, "notes": notes}


# ---------------------------------------------------------------- monotone implication


def monotone_implication_check(U: MonotoneProfile, Vinv: MonotoneProfile, cfg: ExponentConfig, N: int,
                               s_grid=None) -> dict:
    """Local condition with ``t^(N-1)`` weights versus the matching tail condition.

    ``Vinv`` is ``1/V`` (non-increasing) so ``V`` itself is non-decreasing.
    """
    if int(N) != N or N < 1:
        raise InvalidConfigError("N must be an integer >= 1")
    if not (1 < cfg.q0 < INF):
        raise InvalidConfigError("the implication needs 1 < q0 < inf")
    p, q, pp = cfg.p, cfg.q, cfg.p_conj
    q0c = cfg.q0_conj
    applicable = p < cfg.q0 or q > q0c

    def c_loc(r):
        return 0.0 if r == INF else (N - 1) / r

    def c_glo(r):
        return -N / q0c if r == INF else -N / q0c + (N - 1) / r

    def eval_loc(s):
        return (np.array([lebesgue_factor(U, q, c_loc(q), 0.0, 1 / x) for x in s]),
                np.array([lebesgue_factor(Vinv, pp, c_loc(pp), 0.0, x) for x in s]))

    def eval_glo(s):
        return (np.array([lebesgue_factor(U, q, c_glo(q), 1 / x, INF) for x in s]),
                np.array([lebesgue_factor(Vinv, pp, c_glo(pp), x, INF) for x in s]))

    local = _scan("implication-local", eval_loc, s_grid, _profile_notes(U, Vinv), probe=True)
    glob = _scan("implication-global", eval_glo, s_grid, _profile_notes(U, Vinv), probe=True)
    if not applicable:
        return {"local": local, "global": glob, "implication_holds": None, "applicable": False,
                "note": "implication inapplicable: needs p<q0 or q>q0'"}
    holds = (not local.finite) or glob.finite
    return {"local": local, "global": glob, "implication_holds": holds, "applicable": True, "note": ""}
