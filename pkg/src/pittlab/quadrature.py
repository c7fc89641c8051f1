"""Reference quadrature rules for integrands with algebraic endpoint behaviour."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi, roots_legendre


@lru_cache(maxsize=256)
def gauss_jacobi(n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [-1, 1] for the weight ``(1 - x)^alpha (1 + x)^beta``."""
    if alpha == 0 and beta == 0:
        x, w = roots_legendre(n)
    else:
        x, w = roots_jacobi(n, alpha, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    return gauss_jacobi(n, 0.0, 0.0)


def jacobi_on_interval(n: int, lo, hi, alpha_hi: float = 0.0, alpha_lo: float = 0.0):
    """Rule on ``[lo, hi]`` absorbing ``(hi - x)^alpha_hi (x - lo)^alpha_lo``.

    ``lo``/``hi`` may be arrays (broadcast on a leading axis); the node axis is last.
    """
    x, w = gauss_jacobi(n, float(alpha_hi), float(alpha_lo))
    lo = np.asarray(lo, dtype=float)[..., None]
    hi = np.asarray(hi, dtype=float)[..., None]
    half = (hi - lo) / 2
    nodes = lo + half * (1 + x)
    weights = w * half ** (1 + alpha_hi + alpha_lo)
    return nodes, weights


@lru_cache(maxsize=128)
def graded_rule(
    alpha_lo: float = 0.0,
    alpha_hi: float = 0.0,
    levels_lo: int = 16,
    levels_hi: int = 0,
    ratio: float = 0.25,
    order: int = 12,
    interior_panels: int = 4,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule on [0, 1] for ``x^alpha_lo (1 - x)^alpha_hi g(x)``, ``g`` smooth.

    Panels shrink geometrically towards an end with ``levels_*`` > 0, which keeps
    accuracy when ``g`` is itself nearly singular there.  The endpoint weights are
    absorbed exactly by Gauss-Jacobi rules on the two end panels; on every other panel
    they are multiplied in explicitly.
    """
    left = [ratio ** k * 0.5 for k in range(levels_lo, 0, -1)] if levels_lo else []
    right = [1 - ratio ** k * 0.5 for k in range(1, levels_hi + 1)] if levels_hi else []
    lo_mid = 0.5 * ratio if levels_lo else 0.0
    hi_mid = 1 - 0.5 * ratio if levels_hi else 1.0
    mid = list(np.linspace(lo_mid, hi_mid, interior_panels + 1))
    edges = np.unique(np.array([0.0] + left + mid + right[::-1] + [1.0]))
    xs, ws = [], []
    last = len(edges) - 2
    for i in range(len(edges) - 1):
        a, b = edges[i], edges[i + 1]
        if i == 0 and i == last:
            x, w = jacobi_on_interval(order, a, b, alpha_hi, alpha_lo)
        elif i == 0:
            x, w = jacobi_on_interval(order, a, b, 0.0, alpha_lo)
            w = w * (1 - x) ** alpha_hi
        elif i == last:
            x, w = jacobi_on_interval(order, a, b, alpha_hi, 0.0)
            w = w * x ** alpha_lo
        else:
            x, w = jacobi_on_interval(order, a, b)
            w = w * x ** alpha_lo * (1 - x) ** alpha_hi
        xs.append(x)
        ws.append(w)
    x = np.concatenate(xs)
    w = np.concatenate(ws)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(edges, order: int = 12) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule over consecutive ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    a, b = edges[:-1, None], edges[1:, None]
    nodes = (a + (b - a) * (1 + x) / 2).ravel()
    weights = ((b - a) / 2 * w).ravel()
    return nodes, weights


def oscillation_edges(lo: float, hi: float, width: float, breakpoints=(), grade_to=(), ratio: float = 0.2,
                      levels: int = 8) -> np.ndarray:
    """Panel edges on ``[lo, hi]`` no wider than ``width``.

    Breakpoints become edges; points in ``grade_to`` receive geometrically
    shrinking panels on their left side.
    """
    cuts = sorted({lo, hi, *[b for b in breakpoints if lo < b < hi]})
    edges: list[float] = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        k = max(1, int(np.ceil((b - a) / width)))
        seg = list(np.linspace(a, b, k + 1))
        if any(abs(b - g) <= 1e-14 * max(1.0, abs(b)) for g in grade_to):
            h = seg[-1] - seg[-2]
            extra = [b - h * ratio ** j for j in range(1, levels + 1)]
            seg = seg[:-1] + extra[::-1] + [b]
            seg = sorted(set(seg))
        edges.extend(seg if not edges else seg[1:])
    return np.asarray(edges)
