"""Gamma quotients, the c-function and the Plancherel density ``|c(lambda)|^-2``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma

from .errors import InvalidConfigError, PoleError
from .geometry import SpaceParams

_POLE_TOL = 1e-14


def _is_pole(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    k = np.round(z.real)
    # away from 0 allow rounding noise; at 0 only an exact zero is a pole
    tol = np.where(k == 0, 0.0, _POLE_TOL * np.abs(k))
    return (np.abs(z - k) <= tol) & (k <= 0)


def log_gamma_complex(z):
    """Principal branch of ``log Gamma(z)``; raises :class:`PoleError` at 0, -1, -2, ..."""
    z_arr = np.asarray(z, dtype=complex)
    if np.any(_is_pole(z_arr)):
        raise PoleError(f"Gamma has a pole at {z}")
    out = loggamma(z_arr)
    return out if out.ndim else complex(out)


@dataclass
class PlancherelModel:
    """c-function of a fixed space plus its calibrated envelope constants."""

    space: SpaceParams
    weyl_order: int = 2
    envelope_constants: tuple[float, float] | None = field(default=None)

    def __post_init__(self):
        if self.weyl_order != 2:
            raise InvalidConfigError("rank-one spaces have a Weyl group of order 2")

    def c(self, lam):
        return c_function(self, lam)

    def density(self, lam):
        return plancherel_density(self, lam)


def _log_c(space: SpaceParams, lam: np.ndarray) -> np.ndarray:
    rho = space.rho
    il = 1j * lam
    return (
        (rho - il) * math.log(2)
        + log_gamma_complex(space.n / 2)
        + log_gamma_complex(il)
        - log_gamma_complex((rho + il) / 2)
        - log_gamma_complex((space.m1 + 2) / 4 + il / 2)
    )


def c_function(model: PlancherelModel, lam):
    """``c(lambda)`` for complex ``lambda``, evaluated through log-Gamma differences."""
    lam_arr = np.asarray(lam, dtype=complex)
    space = model.space
    rho = space.rho
    il = 1j * lam_arr
    # numerator pole of Gamma(i lambda) where no denominator pole cancels it
    if np.any(_is_pole(il)):
        raise PoleError(f"c-function has a pole at lambda={lam}")
    den1, den2 = (rho + il) / 2, (space.m1 + 2) / 4 + il / 2
    out = np.empty(lam_arr.shape, dtype=complex)
    zero = _is_pole(den1) | _is_pole(den2)
    out[zero] = 0.0
    ok = ~zero
    if np.any(ok):
        out[ok] = np.exp(_log_c(space, lam_arr[ok]))
    return out if out.ndim else complex(out)


def log_plancherel_density(model: PlancherelModel, lam):
    """``log |c(lambda)|^-2`` for real nonzero ``lambda``."""
    lam_arr = np.abs(np.asarray(lam, dtype=float))
    with np.errstate(divide="ignore"):
        out = np.full(lam_arr.shape, -np.inf)
    pos = lam_arr > 0
    if np.any(pos):
        out[pos] = -2 * _log_c(model.space, lam_arr[pos]).real
    return out if out.ndim else float(out)


def plancherel_density(model: PlancherelModel, lam):
    """``|c(lambda)|^-2`` for real ``lambda``; even, with the limit value 0 at the origin."""
    if np.iscomplexobj(lam) and np.any(np.imag(lam) != 0):
        raise InvalidConfigError("the Plancherel density is defined for real lambda")
    lam_arr = np.real(np.asarray(lam)).astype(float)
    out = np.exp(log_plancherel_density(model, lam_arr))
    return out if out.ndim else float(out)


def envelope_ratio(model: PlancherelModel, lam):
    """``|c(lambda)|^-2 / (lambda^2 (1 + lambda)^(n - 3))`` for ``lambda > 0``."""
    lam = np.abs(np.asarray(lam, dtype=float))
    n = model.space.n
    out = np.exp(log_plancherel_density(model, lam) - 2 * np.log(lam) - (n - 3) * np.log1p(lam))
    return out if out.ndim else float(out)


def default_envelope_grid(num: int = 401) -> np.ndarray:
    return np.logspace(-2, 2, num)


def calibrate_envelope(model: PlancherelModel, grid=None) -> tuple[float, float]:
    """Record the extreme values of :func:`envelope_ratio` over ``grid``."""
    grid = default_envelope_grid() if grid is None else np.asarray(grid, dtype=float).ravel()
    if grid.size == 0:
        raise InvalidConfigError("calibration grid is empty")
    if np.any(grid <= 0):
        raise InvalidConfigError("calibration grid must be positive")
    ratio = envelope_ratio(model, grid)
    model.envelope_constants = (float(ratio.min()), float(ratio.max()))
    return model.envelope_constants


def make_model(space: SpaceParams, calibrate: bool = True) -> PlancherelModel:
    model = PlancherelModel(space)
    if calibrate:
        calibrate_envelope(model)
    return model
