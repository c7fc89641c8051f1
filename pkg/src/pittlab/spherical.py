"""Spherical functions ``phi_lambda(a_t)`` and spherical transforms of radial profiles.

``Delta(t) phi_lambda(a_t)`` is computed from its integral representation as a
superposition of ``cos(lambda r)``.  For ``m2 >= 1`` this is a double integral
with algebraic endpoint factors ``(cosh 2t - cosh 2s)^b`` and
``(cosh s - cosh r)^a`` (``a = m1/2 - 1``, ``b = m2/2 - 1``); for ``m2 = 0`` it
collapses to a single integral.  Both factors are absorbed by Gauss-Jacobi
rules, the remaining smooth parts are written through ``sinh`` products so
nothing cancels near the diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import gammaln

from .errors import DomainError, InvalidConfigError, NumericalFailure
from .geometry import INF, SpaceParams, density_delta, log_density_delta, rho_p
from .quadrature import gauss_jacobi, graded_rule, oscillation_edges, panel_rule

T_MAX = 10.0
_EPS = np.finfo(float).eps
_SMALL_T = 1e-6


@dataclass(frozen=True)
class SpectralPoint:
    """Complex spectral parameter ``re + i im``."""

    re: float
    im: float = 0.0

    @classmethod
    def of(cls, value) -> "SpectralPoint":
        if isinstance(value, SpectralPoint):
            return value
        z = complex(value)
        return cls(z.real, z.imag)

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def in_strip(self, space: SpaceParams) -> bool:
        return abs(self.im) <= space.rho * (1 + 1e-12)

    def __complex__(self):
        return self.value


def _as_complex(lam) -> complex:
    return SpectralPoint.of(lam).value if not isinstance(lam, np.ndarray) else lam


def published_constant(space: SpaceParams) -> float:
    """Closed-form prefactor ``pi^(1/2) 2^(m2/2 - 2) Gamma((n-1)/2) / Gamma(n/2)``."""
    n = space.n
    return math.exp(0.5 * math.log(math.pi) + (space.m2 / 2 - 2) * math.log(2)
                    + gammaln((n - 1) / 2) - gammaln(n / 2))


def kernel_constant(space: SpaceParams) -> float:
    """Prefactor that makes the integral representation equal 1 at the origin."""
    a = space.m1 / 2 - 1
    if space.m2 == 0:
        return 2.0 ** (space.m1 + a + 1) / beta_fn(0.5, a + 1)
    b = space.m2 / 2 - 1
    inner = 2.0 ** (-a) * beta_fn(0.5, a + 1) / 2
    outer = 2.0 ** b * inner * beta_fn(a + 1.5, b + 1) / 2
    return 2.0 ** (space.m1 + 2 * space.m2 - 1) / outer


@lru_cache(maxsize=256)
def _end_weighted_rule(panels: int, order: int, alpha: float):
    """Composite rule on [0, 1] for ``(1 - x)^alpha g(x)``; the last panel is Gauss-Jacobi."""
    edges = np.linspace(0.0, 1.0, panels + 1)
    xg, wg = gauss_jacobi(order, 0.0, 0.0)
    a, b = edges[:-1, None], edges[1:, None]
    x = (a + (b - a) * (1 + xg) / 2)
    w = (b - a) / 2 * wg * (1 - x) ** alpha
    xj, wj = gauss_jacobi(order, alpha, 0.0)
    h = 1.0 / panels
    x[-1] = 1 - h + h * (1 + xj) / 2
    w[-1] = wj * (h / 2) ** (1 + alpha)
    x, w = x.ravel(), w.ravel()
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _sinh_quotient(y, d):
    """``(cosh(y + d) - cosh y) / d`` for ``d >= 0`` without cancellation."""
    with np.errstate(invalid="ignore", divide="ignore"):
        out = 2 * np.sinh(y + d / 2) * np.sinh(d / 2) / d
    return np.where(d > 0, out, np.sinh(y))


@dataclass(frozen=True)
class SphericalEvaluator:
    space: SpaceParams
    inner_order: int = 12
    outer_order: int = 12
    tol: float = 1e-10
    max_panels: int = 512

    def __post_init__(self):
        if self.inner_order < 8 or self.outer_order < 8:
            raise InvalidConfigError("quadrature orders must be >= 8")
        if not (0 < self.tol < 1):
            raise InvalidConfigError("tol must lie in (0, 1)")

    @property
    def c0(self) -> float:
        return published_constant(self.space)

    @property
    def kernel_constant(self) -> float:
        return kernel_constant(self.space)

    @property
    def a(self) -> float:
        return self.space.m1 / 2 - 1

    @property
    def b(self) -> float:
        return self.space.m2 / 2 - 1

    # -- core fixed-panel sums -------------------------------------------------

    def _nodes(self, t: np.ndarray, panels: int):
        """Frequency nodes ``r`` and weights ``W`` with ``phi = sum W cos(lambda r)``."""
        a, b = self.a, self.b
        space = self.space
        log_pref = math.log(self.kernel_constant) - log_density_delta(space, t)
        if space.m2 == 0:
            x, w = _end_weighted_rule(panels, self.outer_order, a)
            r = t[:, None] * x
            W = w * _sinh_quotient(r, t[:, None] * (1 - x)) ** a
            log_pref = log_pref + np.log(np.sinh(t)) + (a + 1) * np.log(t)
            return r, W * np.exp(log_pref)[:, None]
        x, w = _end_weighted_rule(panels, self.outer_order, b)
        s = t[:, None] * x
        ws = w * _sinh_quotient(2 * s, 2 * t[:, None] * (1 - x)) ** b * 2.0 ** b * np.sinh(s)
        xi, wi = _end_weighted_rule(panels, self.inner_order, a)
        r = s[..., None] * xi
        wr = wi * s[..., None] ** (a + 1) * _sinh_quotient(r, s[..., None] * (1 - xi)) ** a
        W = ws[..., None] * wr
        log_pref = log_pref + np.log(np.sinh(2 * t)) + (b + 1) * np.log(t)
        W = W * np.exp(log_pref)[:, None, None]
        T = t.shape[0]
        return r.reshape(T, -1), W.reshape(T, -1)

    def _fixed(self, t: np.ndarray, lam: complex, panels: int):
        r, W = self._nodes(t, panels)
        val = np.sum(W * np.cos(lam * r), axis=1)
        scale = np.sum(np.abs(W) * np.cosh(lam.imag * r), axis=1)
        return val, scale, r.shape[1]

    def _start_panels(self, lam: complex, tmax: float) -> int:
        # roughly one radian of oscillation per two nodes on the coarse level
        return max(1, int(math.ceil((abs(lam.real) + abs(lam.imag)) * tmax / 6)))

    def _phi_positive(self, lam: complex, t: np.ndarray) -> np.ndarray:
        order = np.argsort(t)
        ts = t[order]
        out = np.empty(t.shape, dtype=complex)
        start = 0
        while start < ts.size:
            per_t = (2 * self._start_panels(lam, float(ts[-1])) * max(self.inner_order, self.outer_order)) ** (
                2 if self.space.m2 else 1)
            chunk = int(min(256, max(1, 4_000_000 // per_t)))
            idx = order[start:start + chunk]
            out[idx] = self._adaptive(lam, t[idx])
            start += chunk
        return out

    def _adaptive(self, lam: complex, t: np.ndarray) -> np.ndarray:
        panels = self._start_panels(lam, float(t.max()))
        prev, _, _ = self._fixed(t, lam, panels)
        worst = INF
        while 2 * panels <= self.max_panels:
            panels *= 2
            cur, scale, count = self._fixed(t, lam, panels)
            err = np.abs(cur - prev)
            # roundoff of a long signed sum sets an absolute floor
            floor = 8 * math.sqrt(count) * _EPS * scale
            if np.all(err <= np.maximum(self.tol * np.abs(cur), floor)):
                return cur
            worst = float(np.max(err / np.maximum(np.abs(cur), floor)))
            prev = cur
        raise NumericalFailure(
            f"spherical function did not converge for lambda={lam} ({self.max_panels} panels)", achieved=worst
        )

    # -- public evaluation -----------------------------------------------------

    def phi(self, lam, t):
        """``phi_lambda(a_t)`` for one complex ``lambda`` and radii ``t`` (scalar or array)."""
        lam = _as_complex(lam)
        t_arr = np.abs(np.asarray(t, dtype=float))
        if not np.all(np.isfinite(t_arr)):
            raise InvalidConfigError("radii must be finite")
        if np.any(t_arr > T_MAX * (1 + 1e-12)):
            raise DomainError(f"spherical functions are evaluated for t <= {T_MAX}")
        flat = t_arr.ravel()
        out = np.ones(flat.shape, dtype=complex)
        rho = self.space.rho
        tiny = (flat > 0) & (flat < _SMALL_T)
        if np.any(tiny):
            out[tiny] = 1 - (lam * lam + rho * rho) * np.sinh(flat[tiny]) ** 2 / (2 * self.space.n)
        big = flat >= _SMALL_T
        if np.any(big):
            out[big] = self._phi_positive(lam, flat[big])
        out = out.reshape(t_arr.shape)
        return out if out.ndim else complex(out)

    def delta_phi(self, lam, t):
        """``Delta(t) phi_lambda(a_t)``."""
        t = np.asarray(t, dtype=float)
        return density_delta(self.space, t) * self.phi(lam, t)

    def phi_imag(self, gamma: float, t):
        """``phi_{i gamma}(a_t)`` (real and positive) for real ``gamma``."""
        out = np.real(self.phi(1j * gamma, t))
        return out if np.ndim(out) else float(out)

    def log_phi_imag(self, gamma: float, t):
        """``log phi_{i gamma}(a_t)`` for any ``t >= 0``.

        Beyond the working range the function is continued by the two-term form
        ``exp(-rho t) (A cosh(gamma t) + B sinh(gamma t) / gamma)`` matched at
        ``t = T_MAX - 1`` and ``t = T_MAX``; the neglected terms are relatively
        ``O(exp(-2 T_MAX))``.
        """
        t = np.abs(np.asarray(t, dtype=float))
        out = np.empty(t.shape)
        inside = t <= T_MAX
        if np.any(inside):
            out[inside] = np.log(self.phi_imag(gamma, t[inside]))
        if np.any(~inside):
            A, B = self._tail_coefficients(abs(gamma))
            out[~inside] = _log_tail(self.space.rho, abs(gamma), A, B, t[~inside])
        return out if out.ndim else float(out)

    @lru_cache(maxsize=64)
    def _tail_coefficients(self, g: float) -> tuple[float, float]:
        rho = self.space.rho
        t1, t2 = T_MAX - 1, T_MAX
        y = np.exp(rho * np.array([t1, t2])) * self.phi_imag(g, np.array([t1, t2]))

        def basis(tt):
            return math.cosh(g * tt), (math.sinh(g * tt) / g if g > 1e-12 else tt)

        M = np.array([basis(t1), basis(t2)])
        A, B = np.linalg.solve(M, y)
        return float(A), float(B)


def _log_tail(rho: float, g: float, A: float, B: float, t: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        if g > 1e-12:
            e = np.exp(-2 * g * t)
            core = A / 2 * (1 + e) - B * np.expm1(-2 * g * t) / (2 * g)
            return -rho * t + g * t + np.log(core)
        return -rho * t + np.log(A + B * t)


@lru_cache(maxsize=32)
def default_evaluator(space: SpaceParams) -> SphericalEvaluator:
    return SphericalEvaluator(space)


def evaluate_phi(ev: SphericalEvaluator, lam, t: float) -> complex:
    """``phi_lambda(a_t)`` for a single radius."""
    if t < 0:
        raise InvalidConfigError("radius must be >= 0")
    return complex(ev.phi(SpectralPoint.of(lam).value, float(t)))


def laplacian_residual(ev: SphericalEvaluator, lam, t: float, h: float) -> float:
    """Normalised defect of the radial eigen-equation, via central differences."""
    if not (h > 0 and t - 2 * h > 0):
        raise InvalidConfigError("need h > 0 and t - 2h > 0")
    lam = SpectralPoint.of(lam).value
    vals = ev.phi(lam, np.array([t - h, t, t + h]))
    d2 = (vals[2] - 2 * vals[1] + vals[0]) / h ** 2
    d1 = (vals[2] - vals[0]) / (2 * h)
    sp = ev.space
    drift = (sp.m1 + sp.m2) / math.tanh(t) + sp.m2 * math.tanh(t)
    lap = d2 + drift * d1
    return float(abs(lap + (lam * lam + sp.rho ** 2) * vals[1]) / (1 + abs(vals[1])))


def spherical_transform(ev: SphericalEvaluator, f, lam, order: int = 12, max_halvings: int = 6) -> complex:
    """``int_0^T f(a_t) phi_lambda(a_t) Delta(t) dt`` by panel quadrature in ``t``.

    Panels start at the oscillation scale ``pi / max(1, |Re lambda|)`` and are
    halved until two successive sums agree to ``ev.tol``.
    """
    lam = SpectralPoint.of(lam).value
    T = f.support_radius
    if not math.isfinite(T):
        raise DomainError("spherical transform needs a compactly supported profile")
    if T > T_MAX:
        raise DomainError(f"profile support exceeds the working range t <= {T_MAX}")
    width = min(0.5, math.pi / max(1.0, abs(lam.real)), f.panel_hint)
    prev = None
    for _ in range(max_halvings + 1):
        cur, scale = _transform_on_panels(ev, f, lam, width, order)
        if prev is not None and abs(cur - prev) <= max(ev.tol * abs(cur), 1e3 * _EPS * scale):
            return cur
        prev = cur
        width /= 2
    raise NumericalFailure(f"spherical transform did not converge at lambda={lam}",
                           achieved=abs(cur - prev) / max(abs(cur), 1e-300))


def _transform_on_panels(ev, f, lam: complex, width: float, order: int):
    T = f.support_radius
    edges = oscillation_edges(0.0, T, width, breakpoints=f.breakpoints)
    e0 = float(f.origin_exponent)
    x, w = gauss_jacobi(order, 0.0, e0)
    h0 = edges[1]
    t0 = h0 * (1 + x) / 2
    w0 = w * (h0 / 2) ** (1 + e0)
    nodes, weights = panel_rule(edges[1:], order)
    with np.errstate(divide="ignore", invalid="ignore"):
        first = f(t0) / t0 ** e0 if e0 != 0 else f(t0)
    ts = np.concatenate([t0, nodes])
    ws = np.concatenate([w0 * first, weights * f(nodes)])
    keep = ws != 0
    if not np.any(keep):
        return 0j, 0.0
    vals = ev.delta_phi(lam, ts[keep])
    terms = ws[keep] * vals
    return complex(np.sum(terms)), float(np.sum(np.abs(terms)))


def phi_envelope(space: SpaceParams, p: float, t):
    """Comparison function for ``phi_{i rho_p}``."""
    t = np.asarray(t, dtype=float)
    rho = space.rho
    if p < 2:
        pp = INF if p == 1 else p / (p - 1)
        out = np.exp(-2 * rho * t / pp) if pp != INF else np.ones_like(t)
    elif p == 2:
        out = (1 + t) * np.exp(-rho * t)
    else:
        out = np.exp(-2 * rho * t / p) if p != INF else np.ones_like(t)
    return out if out.ndim else float(out)


def phi_envelope_ratio(ev: SphericalEvaluator, p: float, t_grid) -> tuple[float, float]:
    """Extremes of ``phi_{i rho_p}(a_t) / envelope_p(t)`` over ``t_grid``."""
    if not (p >= 1):
        raise InvalidConfigError("p must lie in [1, inf]")
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < 0) or np.any(t_grid > T_MAX):
        raise DomainError(f"grid must lie in [0, {T_MAX}]")
    ratio = ev.phi_imag(rho_p(ev.space, p), t_grid) / phi_envelope(ev.space, p, t_grid)
    return float(np.min(ratio)), float(np.max(ratio))


# ---------------------------------------------------------------- sweeps


class TransformSampler:
    """Fast evaluation of ``lambda -> f^(lambda)`` on many frequencies.

    The transform is rewritten as a cosine transform ``int_0^T A(r) cos(lambda r) dr``
    of a non-oscillatory density ``A`` (an Abel-type integral of ``f``).  ``A`` is
    tabulated once on a panel rule fine enough for ``|Re lambda| <= lam_max``.
    """

    def __init__(self, ev: SphericalEvaluator, f, lam_max: float = 64.0, s_order: int = 40):
        T = f.support_radius
        if not math.isfinite(T) or T > T_MAX:
            raise DomainError(f"profile support must be finite and <= {T_MAX}")
        self.ev = ev
        self.f = f
        self.lam_max = float(lam_max)
        space = ev.space
        a, b = ev.a, ev.b
        self._e = a if space.m2 == 0 else a + b + 1
        self._s_rule = _s_reference_rule(a, b, s_order) if space.m2 else None
        bps = sorted(bb for bb in f.breakpoints if 0 < bb < T)
        width = min(0.25, 2 * math.pi / max(1.0, self.lam_max))
        edges = oscillation_edges(0.0, T, width, breakpoints=bps, grade_to=[*bps, T], ratio=0.25, levels=20)
        # profiles that are not even in t make the density non-smooth at r = 0
        h = edges[1]
        edges = np.unique(np.concatenate([edges, [h * 0.25 ** k for k in range(1, 20)]]))
        r, w = panel_rule(edges, order=16)
        self.r = r
        self.weights = w * self._density(r, [0.0, *bps, T])

    def _kernel_factor(self, r: np.ndarray, gap: np.ndarray) -> np.ndarray:
        """``K(r, r + gap) / gap^e`` (smooth in ``gap``)."""
        a, b = self.ev.a, self.ev.b
        if self.ev.space.m2 == 0:
            return _sinh_quotient(r, gap) ** a
        x, w = self._s_rule
        s = r[..., None] + gap[..., None] * x
        g = (2.0 ** b * _sinh_quotient(2 * s, 2 * gap[..., None] * (1 - x)) ** b
             * _sinh_quotient(r[..., None], gap[..., None] * x) ** a * np.sinh(s))
        return np.sum(w * g, axis=-1)

    def _prefactor(self, t: np.ndarray) -> np.ndarray:
        C = self.ev.kernel_constant
        return C * (np.sinh(t) if self.ev.space.m2 == 0 else np.sinh(2 * t))

    def _density(self, r: np.ndarray, cuts) -> np.ndarray:
        f = self.f
        e = self._e
        out = np.zeros_like(r)
        for idx in range(len(cuts) - 1):
            lo_seg, hi_seg = cuts[idx], cuts[idx + 1]
            sel = np.nonzero((r >= lo_seg) & (r < hi_seg))[0]
            if sel.size == 0:
                continue
            pieces = [(None, hi_seg)] + [(cuts[j], cuts[j + 1]) for j in range(idx + 1, len(cuts) - 1)]
            for start in range(0, sel.size, 128):
                ids = sel[start:start + 128]
                rr = r[ids]
                acc = np.zeros(rr.shape)
                for lo, hi in pieces:
                    lo_arr = rr if lo is None else np.full(rr.shape, lo)
                    length = hi - lo_arr
                    panels = max(4, int(math.ceil(float(np.max(length)) / min(0.5, f.panel_hint))))
                    alpha = e if lo is None else 0.0
                    x, w = graded_rule(alpha, 0.0, 12, 0, interior_panels=panels)
                    t = lo_arr[:, None] + length[:, None] * x
                    rb = np.broadcast_to(rr[:, None], t.shape)
                    gap = length[:, None] * x if lo is None else t - rb
                    with np.errstate(invalid="ignore", divide="ignore"):
                        vals = f(t) * self._prefactor(t) * self._kernel_factor(rb, gap)
                        if lo is not None:
                            vals = vals * gap ** e
                    vals = np.where(np.isfinite(vals), vals, 0.0)
                    scale = length ** (1 + alpha)
                    acc += scale * np.sum(w * vals, axis=1)
                out[ids] = acc
        return out

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=complex)
        flat = lam.ravel()
        out = np.empty(flat.shape, dtype=complex)
        step = max(1, 2_000_000 // max(1, self.r.size))
        for start in range(0, flat.size, step):
            chunk = flat[start:start + step]
            out[start:start + step] = np.cos(np.outer(chunk, self.r)) @ self.weights
        out = out.reshape(lam.shape)
        return out if out.ndim else complex(out)


@lru_cache(maxsize=32)
def _s_reference_rule(a: float, b: float, order: int):
    """Rule on [0, 1] for ``x^a (1 - x)^b g(x)``."""
    if float(a).is_integer():
        x, w = gauss_jacobi(order, b, a)
        return (1 + x) / 2, w / 2 ** (a + b + 1)
    return graded_rule(a, b, 14, 0, order=16)


class PhiImagTable:
    """Piecewise Chebyshev interpolant of ``log phi_{i gamma}(a_t)`` on ``[0, t_max]``."""

    def __init__(self, ev: SphericalEvaluator, gamma: float, t_max: float = T_MAX, panel: float = 0.25,
                 degree: int = 20):
        if not (0 < t_max <= T_MAX):
            raise DomainError(f"table range must lie in (0, {T_MAX}]")
        self.gamma = float(gamma)
        k = max(1, int(math.ceil(t_max / panel)))
        self.edges = np.linspace(0.0, t_max, k + 1)
        nodes = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
        a, b = self.edges[:-1, None], self.edges[1:, None]
        ts = (a + b) / 2 + (b - a) / 2 * nodes
        logs = np.log(ev.phi_imag(self.gamma, ts.ravel())).reshape(ts.shape)
        self.coef = np.array([np.polynomial.chebyshev.chebfit(nodes, row, degree) for row in logs])

    def log(self, t):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        idx = np.clip(np.searchsorted(self.edges, flat, side="right") - 1, 0, len(self.coef) - 1)
        a, b = self.edges[idx], self.edges[idx + 1]
        x = (2 * flat - a - b) / (b - a)
        out = np.empty(flat.shape)
        for i in np.unique(idx):
            sel = idx == i
            out[sel] = np.polynomial.chebyshev.chebval(x[sel], self.coef[i])
        out = out.reshape(t.shape)
        return out if out.ndim else float(out)

    def __call__(self, t):
        out = np.exp(self.log(t))
        return out if np.ndim(out) else float(out)


@lru_cache(maxsize=64)
def _phi_table(space: SpaceParams, gamma: float) -> PhiImagTable:
    return PhiImagTable(default_evaluator(space), gamma, T_MAX)


def log_phi_imag_fast(space: SpaceParams, gamma: float, t):
    """Tabulated ``log phi_{i gamma}(a_t)`` on ``[0, T_MAX]``, matched tail beyond."""
    t = np.abs(np.asarray(t, dtype=float))
    out = np.empty(t.shape)
    inside = t <= T_MAX
    if np.any(inside):
        out[inside] = _phi_table(space, float(gamma)).log(t[inside])
    if np.any(~inside):
        out[~inside] = default_evaluator(space).log_phi_imag(gamma, t[~inside])
    return out if out.ndim else float(out)
