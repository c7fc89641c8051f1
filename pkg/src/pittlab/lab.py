"""End-to-end numerical checks of weighted transform inequalities on radial test families.

Spectral integrals ``2 int_0^inf |f^(lambda + i gamma)|^q w(lambda) |c(lambda)|^-2 dlambda``
are computed with a smooth cutoff ``chi(lambda / L)`` at dyadic ``L`` and extrapolated
geometrically in ``L``.  The smooth cutoff removes the oscillation that a sharp
truncation of a slowly decaying, oscillating integrand leaves in the partial sums.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .conditions import CalderonSegment, ExponentConfig, calderon_majorant
from .errors import CalibrationError, DomainError, InvalidConfigError
from .geometry import INF, SpaceParams, log_density_delta, rho_p
from .harish_chandra import PlancherelModel, log_plancherel_density
from .profiles import (Bump, Extremal, Indicator, One, RadialProfile, WeightSpec, _radial_integral,
                       weighted_lp_norm)
from .quadrature import graded_rule, oscillation_edges, panel_rule
from .rearrangement import discrete_rearrangement
from .spherical import SphericalEvaluator, T_MAX, TransformSampler, log_phi_imag_fast

STANDARD_FAMILY_VERSION = "1"
WINDOW_BASE = 16.0
COARSE_LEVELS = 3
FINE_LEVELS = 5
CONVERGED_TAIL = 1e-7
KAPPA_RTOL = 1e-3


def smooth_window(x):
    """``C^inf`` cutoff: 1 on ``[0, 1/2]``, 0 beyond 1."""
    y = np.clip((np.abs(np.asarray(x, dtype=float)) - 0.5) * 2.0, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(y < 1, np.exp(-1.0 / np.maximum(1.0 - y, 1e-300)), 0.0)
        b = np.where(y > 0, np.exp(-1.0 / np.maximum(y, 1e-300)), 0.0)
        return np.where(y <= 0, 1.0, np.where(y >= 1, 0.0, a / np.where(a + b > 0, a + b, 1.0)))


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("PITTLAB_THREADS", "1")))
    except ValueError:
        return 1


def _ordered_map(fn, items):
    items = list(items)
    workers = min(worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@lru_cache(maxsize=24)
def _cached_sampler(ev: SphericalEvaluator, f: RadialProfile, lam_max: float, s_order: int) -> TransformSampler:
    return TransformSampler(ev, f, lam_max=lam_max, s_order=s_order)


def transform_sampler(ev: SphericalEvaluator, f: RadialProfile, lam_max: float, s_order: int = 40):
    try:
        return _cached_sampler(ev, f, float(lam_max), int(s_order))
    except TypeError:  # unhashable profile
        return TransformSampler(ev, f, lam_max=lam_max, s_order=s_order)


# ---------------------------------------------------------------- spectral integrals


@dataclass(frozen=True)
class SpectralIntegral:
    """Extrapolated value plus the windowed partial integrals it came from."""

    value: float
    cutoffs: tuple = ()
    partials: tuple = ()

    @property
    def truncated(self) -> float:
        return self.partials[-1] if self.partials else self.value

    @property
    def tail(self) -> float:
        """Extrapolated contribution beyond the largest cutoff."""
        if not math.isfinite(self.value):
            return INF
        return self.value - self.truncated

    def as_dict(self) -> dict:
        return {"value": self.value, "tail": self.tail, "cutoffs": list(self.cutoffs),
                "partials": list(self.partials)}


def _spectral_rule(top: float, width: float, origin_exponent: float, breakpoints, order: int):
    """Nodes/weights on ``[0, top]``; the first panel absorbs ``x^origin_exponent``."""
    h = min(width, *[b for b in breakpoints if 0 < b < top], top)
    xg, wg = graded_rule(origin_exponent, 0.0, 16, 0, order=order)
    head_x = h * xg
    with np.errstate(divide="ignore"):
        head_w = h * wg * xg ** (-origin_exponent)
    edges = oscillation_edges(h, top, width, breakpoints=[b for b in breakpoints if h < b < top])
    x, w = panel_rule(edges, order=order)
    return np.concatenate([head_x, x]), np.concatenate([head_w, w])


def _extrapolate(partials: np.ndarray) -> float:
    """Geometric (Richardson) limit of partial integrals at dyadic cutoffs."""
    J = np.asarray(partials, dtype=float)
    scale = max(abs(J[-1]), 1e-300)
    d = np.diff(J)
    if abs(d[-1]) <= 1e-14 * scale or J.size < 3:
        return float(J[-1])

    def stage(seq):
        out = []
        dd = np.diff(seq)
        for k in range(len(seq) - 2):
            r = dd[k + 1] / dd[k] if dd[k] != 0 else 0.0
            out.append(seq[k + 2] + dd[k + 1] * r / (1 - r) if 0 < r < 1 else seq[k + 2])
        return np.asarray(out)

    first = stage(J)
    if first.size >= 3:
        second = stage(first)
        # a second pass helps only when the first-stage errors are themselves geometric
        if abs(second[-1] - first[-1]) < abs(first[-1] - J[-1]):
            return float(second[-1])
    return float(first[-1])


def spectral_power_integral(sampler: TransformSampler, model: PlancherelModel, log_weight, weight_origin: float,
                            q: float, gamma: float, breakpoints=(), levels: int = FINE_LEVELS,
                            order: int = 12, refinement: int = 1) -> SpectralIntegral:
    """``2 int_0^inf |f^(lambda + i gamma)|^q exp(log_weight(lambda)) |c(lambda)|^-2 dlambda``.

    ``weight_origin`` is the exponent ``e`` with ``exp(log_weight(x)) ~ x^e`` at 0.
    """
    if not (q >= 1):
        raise InvalidConfigError("integrability exponent must be >= 1")
    cutoffs = tuple(WINDOW_BASE * 2.0 ** k for k in range(levels))
    top = cutoffs[-1]
    if sampler.lam_max < top:
        raise InvalidConfigError("transform sampler does not resolve the requested cutoff")
    T = sampler.f.support_radius
    width = min(0.25, math.pi / (2 * T)) / refinement
    f_at_origin = abs(sampler(1j * gamma))
    e = weight_origin + 2.0
    if e <= -1:
        return SpectralIntegral(INF if f_at_origin > 0 else 0.0)
    x, w = _spectral_rule(top, width, e, breakpoints, order * refinement)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if q == INF:
            log_g = np.log(np.abs(sampler(x + 1j * gamma))) + np.asarray(log_weight(x), dtype=float)
            log_g = np.where(np.isnan(log_g), -np.inf, log_g)
            sup = float(np.exp(np.max(log_g)))
            return SpectralIntegral(sup, (top,), (sup,))
        log_g = (q * np.log(np.abs(sampler(x + 1j * gamma))) + np.asarray(log_weight(x), dtype=float)
                 + log_plancherel_density(model, x))
        g = np.exp(np.where(np.isnan(log_g), -np.inf, log_g)) * 2.0 * w
    if not np.all(np.isfinite(g)):
        return SpectralIntegral(INF)
    partials = np.array([np.sum(g * smooth_window(x / L)) for L in cutoffs])
    return SpectralIntegral(_extrapolate(partials), cutoffs, tuple(partials.tolist()))


def adaptive_spectral_integral(ev, model, f, log_weight, weight_origin, q, gamma, breakpoints=(),
                               refinement: int = 1) -> SpectralIntegral:
    """Coarse cutoffs first; escalate to the fine ladder unless the tail is negligible."""
    coarse_top = WINDOW_BASE * 2.0 ** (COARSE_LEVELS - 1)
    sampler = transform_sampler(ev, f, coarse_top, 40 * refinement)
    out = spectral_power_integral(sampler, model, log_weight, weight_origin, q, gamma, breakpoints,
                                  COARSE_LEVELS, refinement=refinement)
    if not math.isfinite(out.value) or out.value == 0:
        return out
    if q == INF or abs(out.tail) <= CONVERGED_TAIL * abs(out.value) and abs(
            out.partials[-1] - out.partials[-2]) <= CONVERGED_TAIL * abs(out.value):
        return out
    sampler = transform_sampler(ev, f, WINDOW_BASE * 2.0 ** (FINE_LEVELS - 1), 40 * refinement)
    return spectral_power_integral(sampler, model, log_weight, weight_origin, q, gamma, breakpoints,
                                   FINE_LEVELS, refinement=refinement)


def _power_of_weight(u: WeightSpec, power: float):
    def log_weight(x):
        if power == 0:
            return np.zeros_like(np.asarray(x, dtype=float))
        with np.errstate(invalid="ignore"):
            out = power * np.asarray(u.log_eval(np.asarray(x, dtype=float)), dtype=float)
        return np.where(np.isnan(out), -np.inf, out)

    return log_weight


# ---------------------------------------------------------------- Plancherel constant


def plancherel_ratio(space: SpaceParams, ev: SphericalEvaluator, model: PlancherelModel, f: RadialProfile) -> float:
    """``int |f|^2 Delta / int_R |f^|^2 |c|^-2`` for one profile."""
    norm_sq = weighted_lp_norm(space, f, One(), 2.0) ** 2
    spec = adaptive_spectral_integral(ev, model, f, _power_of_weight(One(), 0.0), 0.0, 2.0, 0.0)
    if not (spec.value > 0):
        raise CalibrationError("profile has a vanishing transform")
    return norm_sq / spec.value


def calibrate_plancherel_constant(space: SpaceParams, ev: SphericalEvaluator, profiles,
                                  model: PlancherelModel | None = None, rtol: float = KAPPA_RTOL) -> float:
    """Constant relating the two sides of the Plancherel identity, cross-checked over ``profiles``."""
    from .harish_chandra import make_model

    profiles = list(profiles)
    if len(profiles) < 2 or len(set(map(repr, profiles))) < 2:
        raise InvalidConfigError("calibration needs at least two distinct profiles")
    for f in profiles:
        if not math.isfinite(f.support_radius):
            raise DomainError("calibration profiles must be compactly supported")
    model = make_model(space) if model is None else model
    ratios = _ordered_map(lambda f: plancherel_ratio(space, ev, model, f), profiles)
    kappa = ratios[0]
    spread = max(abs(r / kappa - 1) for r in ratios)
    if spread > rtol:
        raise CalibrationError(f"Plancherel ratios disagree by {spread:.3g} (> {rtol:g}): {ratios}")
    return kappa


# ---------------------------------------------------------------- Pitt left side


def pitt_spectral_integral(space, ev, model, f: RadialProfile, u: WeightSpec, cfg: ExponentConfig,
                           refinement: int = 1) -> SpectralIntegral:
    q = cfg.q
    power = 1.0 if q == INF else q
    return adaptive_spectral_integral(ev, model, f, _power_of_weight(u, power), power * u.origin_exponent, q,
                                      cfg.rho_q0(space), u.breakpoints, refinement)


def pitt_lhs(space: SpaceParams, ev: SphericalEvaluator, model: PlancherelModel, f: RadialProfile,
             u: WeightSpec, cfg: ExponentConfig) -> float:
    """``(2 int_0^inf |f^(lambda + i rho_q0)|^q u^q |c|^-2 dlambda)^(1/q)`` (a sup for ``q = inf``)."""
    value = pitt_spectral_integral(space, ev, model, f, u, cfg).value
    if cfg.q == INF or not math.isfinite(value):
        return value
    return value ** (1.0 / cfg.q)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class WitnessRule:
    """Growth pattern that counts as numerical evidence of unboundedness."""

    growth: float = 10.0
    min_points: int = 5

    def __post_init__(self):
        if not (self.growth > 1) or self.min_points < 2:
            raise InvalidConfigError("witness rule needs growth > 1 and min_points >= 2")

    def fires(self, ratios) -> bool:
        r = np.asarray(ratios, dtype=float)
        if np.any(np.isinf(r)):
            return True
        if r.size < self.min_points or not (r[0] > 0):
            return False
        last = r[-self.min_points:]
        increasing = bool(np.all(np.diff(last) > 0))
        return increasing and r[-1] > self.growth * r[0]

    def as_dict(self) -> dict:
        return {"growth": self.growth, "min_points": self.min_points}


@dataclass(frozen=True)
class VerificationReport:
    kind: str
    config: dict
    family: tuple
    lhs: tuple
    rhs: tuple
    ratios: tuple
    verdict: str
    witness: tuple | None = None
    tolerances: dict = field(default_factory=dict)
    notes: tuple = ()
    localization_bounds: tuple | None = None

    def __post_init__(self):
        if (self.witness is not None) != (self.verdict == "unbounded"):
            raise InvalidConfigError("a witness accompanies exactly the unbounded verdict")

    @property
    def empirical_constant(self) -> float:
        return float(max(self.ratios)) if self.ratios else 0.0

    def csv_rows(self):
        return [(i, d.get("kind"), d.get("radius", d.get("center")), l, r, q)
                for i, (d, l, r, q) in enumerate(zip(self.family, self.lhs, self.rhs, self.ratios))]

    def as_dict(self) -> dict:
        return {"kind": self.kind, "config": self.config, "family": list(self.family), "lhs": list(self.lhs),
                "rhs": list(self.rhs), "ratios": list(self.ratios), "empirical_constant": self.empirical_constant,
                "verdict": self.verdict, "witness": None if self.witness is None else [list(w) for w in self.witness],
                "tolerances": self.tolerances, "notes": list(self.notes),
                "localization_bounds": None if self.localization_bounds is None else list(self.localization_bounds)}


def _tolerances() -> dict:
    return {"window_base": WINDOW_BASE, "fine_levels": FINE_LEVELS, "coarse_levels": COARSE_LEVELS,
            "converged_tail": CONVERGED_TAIL, "family_version": STANDARD_FAMILY_VERSION}


def _config_dict(space, u, v, cfg) -> dict:
    return {"space": {"m1": space.m1, "m2": space.m2}, "exponents": cfg.as_dict(), "u": u.as_dict(),
            "v": v.as_dict()}


def _ratio(lhs: float, rhs: float) -> float:
    if rhs == 0:
        if lhs > 0:
            raise InvalidConfigError("right-hand side vanishes while the left side does not")
        return 0.0
    if math.isinf(rhs):
        if math.isinf(lhs):
            raise DomainError("profile is not in the weighted Lebesgue space")
        return 0.0
    return lhs / rhs


def standard_family(space: SpaceParams, v: WeightSpec | None = None, cfg: ExponentConfig | None = None) -> list:
    """Fixed test family: three indicators, three bumps, and extremal profiles when ``v, cfg`` are given."""
    family: list[RadialProfile] = [Indicator(0.5), Indicator(1.0), Indicator(2.0),
                                   Bump(space, 0.5, 0.3, 1.0), Bump(space, 1.5, 0.5, 1.0), Bump(space, 3.0, 1.0, 1.0)]
    if v is not None and cfg is not None and 1 < cfg.p < INF:
        kappa = 1.0 / (cfg.p - 1.0)
        family += [Extremal(space, v, cfg.q0, kappa, s, cfg.p) for s in (1.0, 2.0, 4.0)]
    return family


def _pitt_pair(space, ev, model, u, v, cfg, f):
    lhs = pitt_lhs(space, ev, model, f, u, cfg)
    rhs = weighted_lp_norm(space, f, v, cfg.p)
    return lhs, rhs


def pitt_ratio_sweep(space: SpaceParams, ev: SphericalEvaluator, model: PlancherelModel, u: WeightSpec,
                     v: WeightSpec, cfg: ExponentConfig, family=None) -> VerificationReport:
    family = standard_family(space, v, cfg) if family is None else list(family)
    if not family:
        raise InvalidConfigError("test family is empty")
    for f in family:
        if not math.isfinite(f.support_radius):
            raise DomainError("test profiles must be compactly supported")
    pairs = _ordered_map(lambda f: _pitt_pair(space, ev, model, u, v, cfg, f), family)
    lhs = tuple(float(a) for a, _ in pairs)
    rhs = tuple(float(b) for _, b in pairs)
    ratios = tuple(_ratio(a, b) for a, b in pairs)
    unbounded = any(math.isinf(r) for r in ratios)
    witness = tuple((i, r) for i, r in enumerate(ratios) if math.isinf(r)) if unbounded else None
    return VerificationReport("pitt_sweep", _config_dict(space, u, v, cfg), tuple(f.as_dict() for f in family),
                              lhs, rhs, ratios, "unbounded" if unbounded else "bounded", witness, _tolerances())


# ---------------------------------------------------------------- localization


def transform_at_strip_edge(space: SpaceParams, ev: SphericalEvaluator, f: RadialProfile, gamma: float) -> float:
    """``int f phi_{i gamma} Delta dt`` by direct radial quadrature."""

    def integrand(t):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = f(t) * np.exp(log_phi_imag_fast(space, gamma, t) + log_density_delta(space, t))
        return np.where(np.isnan(out), 0.0, out)

    return _radial_integral(space, integrand, f.origin_exponent + space.n - 1, f.support_radius,
                            f.breakpoints, panel_width=min(0.25, f.panel_hint))


def localization_ratios(space: SpaceParams, ev: SphericalEvaluator, f: RadialProfile, p: float,
                        theta0: float = 1.5, num: int = 41) -> tuple[float, float]:
    """Extremes of ``|f^(lambda + i rho_p)| / int f phi_{i rho_p} Delta`` over ``|lambda| <= theta0 / radius``."""
    gamma = rho_p(space, p)
    alpha = f.support_radius
    lam = np.linspace(0.0, theta0 / alpha, num)
    sampler = transform_sampler(ev, f, max(WINDOW_BASE, 2 * theta0 / alpha))
    denom = transform_at_strip_edge(space, ev, f, gamma)
    if denom == 0:
        return 0.0, 0.0
    r = np.abs(sampler(lam + 1j * gamma)) / denom
    return float(r.min()), float(r.max())


# ---------------------------------------------------------------- divergence witness


def unboundedness_witness(space: SpaceParams, ev: SphericalEvaluator, model: PlancherelModel, u: WeightSpec,
                          v: WeightSpec, cfg: ExponentConfig, s_sequence=(0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0),
                          rule: WitnessRule = WitnessRule()) -> VerificationReport:
    """Pitt ratios of the extremal profiles ``v^(-p') phi_{i rho_q0}^kappa 1_[0, s]``, ``kappa = 1/(p-1)``."""
    cfg.require_open_range()
    s_values = [float(s) for s in s_sequence]
    if len(s_values) < 2:
        raise InvalidConfigError("witness needs at least two radii")
    d = np.diff(s_values)
    if not (np.all(d > 0) or np.all(d < 0)):
        raise InvalidConfigError("radii must be strictly monotone")
    if max(s_values) > T_MAX:
        raise DomainError(f"extremal profiles are supported only up to radius {T_MAX:g}")
    kappa = 1.0 / (cfg.p - 1.0)
    family = [Extremal(space, v, cfg.q0, kappa, s, cfg.p) for s in s_values]
    pairs = _ordered_map(lambda f: _pitt_pair(space, ev, model, u, v, cfg, f), family)
    localized = _ordered_map(lambda f: localization_ratios(space, ev, f, cfg.q0, cfg.theta0, 17), family)
    lhs = tuple(float(a) for a, _ in pairs)
    rhs = tuple(float(b) for _, b in pairs)
    ratios = tuple(_ratio(a, b) for a, b in pairs)
    fired = rule.fires(ratios)
    witness = tuple(zip(s_values, ratios)) if fired else None
    bounds = (min(b[0] for b in localized), max(b[1] for b in localized))
    tol = {**_tolerances(), "witness_rule": rule.as_dict()}
    return VerificationReport("witness", _config_dict(space, u, v, cfg), tuple(f.as_dict() for f in family),
                              lhs, rhs, ratios, "unbounded" if fired else "bounded", witness, tol,
                              localization_bounds=bounds)


# ---------------------------------------------------------------- Paley


def spectral_weight_mass(model: PlancherelModel, u: WeightSpec, upper: float = 1e4) -> float:
    """``int_R u |c|^-2 dlambda``; ``inf`` when the integral diverges at 0 or infinity."""
    e = u.origin_exponent + 2.0
    if e <= -1:
        return INF

    def g(x):
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.exp(np.asarray(u.log_eval(x), dtype=float) + log_plancherel_density(model, x))
        return np.where(np.isnan(out), 0.0, out)

    bps = [b for b in u.breakpoints if b > 0]
    support = upper
    if bps and float(np.max(g(np.array([2 * max(bps), 10 * max(bps), upper])))) == 0.0:
        support = max(bps)
    h = min([1.0, support, *bps])
    xg, wg = graded_rule(e, 0.0, 16, 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        head = h * np.sum(wg * g(h * xg) * xg ** (-e))
    edges = np.unique(np.concatenate([np.geomspace(h, support, max(2, int(60 * math.log10(support / h)) + 1)),
                                      [b for b in bps if h < b < support]]))
    x, w = panel_rule(edges, order=16)
    total = head + float(np.sum(w * g(x)))
    if support == upper:
        a, b = g(np.array([upper / 2, upper]))
        if b > 0:
            slope = math.log(b / a) / math.log(2.0) if a > 0 else -INF
            if slope >= -1.05:
                return INF
            total += b * upper / (-slope - 1)
    return 2.0 * total


def paley_ratio(space: SpaceParams, ev: SphericalEvaluator, model: PlancherelModel, f: RadialProfile,
                u: WeightSpec, p: float, refinement: int = 1) -> float:
    """``(int_R |f^(lambda + i rho_p)|^p u^(2-p) |c|^-2)^(1/p) / (||u||_1^(2/p-1) ||f||_p)``."""
    if space.n < 3:
        raise DomainError("the Paley bound is available only in dimension n >= 3")
    if not (1 <= p <= 2):
        raise InvalidConfigError("Paley exponent must lie in [1, 2]")
    mass = spectral_weight_mass(model, u)
    if not math.isfinite(mass):
        raise InvalidConfigError("u is not integrable against the Plancherel density")
    if mass == 0:
        raise InvalidConfigError("u vanishes identically")
    spec = adaptive_spectral_integral(ev, model, f, _power_of_weight(u, 2.0 - p), (2.0 - p) * u.origin_exponent,
                                      p, rho_p(space, p), u.breakpoints, refinement)
    norm = weighted_lp_norm(space, f, One(), p)
    if norm == 0:
        return 0.0
    return spec.value ** (1.0 / p) / (mass ** (2.0 / p - 1.0) * norm)


# ---------------------------------------------------------------- Calderon domination


def _spatial_rearrangement(space: SpaceParams, f: RadialProfile):
    T = f.support_radius
    edges = oscillation_edges(0.0, T, min(0.02, T / 50), breakpoints=f.breakpoints)
    t, w = panel_rule(edges, order=8)
    mu = w * np.exp(log_density_delta(space, t))
    return discrete_rearrangement(np.abs(f(t)), mu)


def _spectral_rearrangement(sampler: TransformSampler, model: PlancherelModel, gamma: float, top: float):
    edges = np.linspace(0.0, top, int(top / 0.01) + 1)
    lam, w = panel_rule(edges, order=8)
    mu = 2.0 * w * np.exp(log_plancherel_density(model, lam))
    return discrete_rearrangement(np.abs(sampler(lam + 1j * gamma)), mu)


def calderon_domination_check(space: SpaceParams, ev: SphericalEvaluator, model: PlancherelModel,
                              f: RadialProfile, q0: float, t_grid=None, top: float = 64.0) -> float:
    """``max_t (T f)^*(t) / S f^*(t)`` with ``T f = |f^(. + i rho_q0)|`` and the Pitt segment."""
    t_grid = np.logspace(-2, 2, 41) if t_grid is None else np.asarray(t_grid, dtype=float)
    fstar = _spatial_rearrangement(space, f)
    if fstar.is_zero:
        return 0.0
    sampler = transform_sampler(ev, f, top)
    tstar = _spectral_rearrangement(sampler, model, rho_p(space, q0), top)
    seg = CalderonSegment.pitt(q0)
    best = 0.0
    for t in t_grid:
        num = float(tstar(t))
        den = calderon_majorant(seg, fstar, float(t))
        if num == 0:
            continue
        best = max(best, INF if den == 0 else num / den)
    return best
