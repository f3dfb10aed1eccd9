"""Moving estimation of Student-t parameters via exponential moving averages.

Each step first forms the parameter estimate (mu_t, sigma_t, nu_t) from
the current state, scores the incoming point out-of-sample, and only
then ingests it:

    mu      <- mu + eta1 * (x - mu)
    m_p     <- m_p + eta  * (|x - mu_t|^p - m_p)      (pre-update mu_t)

sigma_t = max(m_sigma, floor)^{1/p_sigma} / M(nu_t, p_sigma); nu_t comes
from the ratio of two moment EMAs inverted through a monotone table
(plus the additive adjustment), or is held fixed.

The per-step fold runs in a compiled kernel when available; a
pure-Python twin with identical arithmetic is selected otherwise (or
when the MOVINGT_PURE_PYTHON environment variable is set).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from . import _fold_py
from .distribution import StudentTParams
from .errors import DomainError, SeriesTooShortError
from .static_estimators import (DEFAULT_NU_ADJUSTMENT, DEFAULT_NU_CAP,
                                NuInversionTable, build_nu_table)

__all__ = [
    "AdaptiveConfig",
    "EmaState",
    "ParamTrajectory",
    "ema_update",
    "step",
    "run",
    "seed_state_from_prefix",
    "fold_backend",
]

_FORCE_PY = bool(os.environ.get("MOVINGT_PURE_PYTHON"))
if not _FORCE_PY:
    try:
        from . import _fold as _fold_impl
        _BACKEND = "cython"
    except ImportError:
        _fold_impl = _fold_py
        _BACKEND = "python"
else:
    _fold_impl = _fold_py
    _BACKEND = "python"


def fold_backend() -> str:
    """Name of the fold implementation in use ("cython" or "python")."""
    return _BACKEND


def ema_update(m: float, observation: float, eta: float) -> float:
    """Single exponential-moving-average update m + eta*(obs - m)."""
    if not (0.0 < eta <= 1.0):
        raise DomainError(f"eta must be in (0, 1], got {eta!r}")
    return m + eta * (observation - m)


@dataclass(frozen=True)
class AdaptiveConfig:
    """Rates, powers and clamps for the moving estimator.

    eta1 drives the center, eta2 the sigma moment, eta3 the two nu
    moments.  p_sigma is the power behind the sigma estimate; (p1, p2)
    the power pair behind nu.  Larger powers are statistically better
    for light tails (p=2 is optimal in the Gaussian limit) but every
    power must stay below the smallest nu the run can see; the defaults
    (p_sigma=1, p1=1, p2=0.5) are safe down to nu_min=1.1.

    eta1 may be 0 to pin the center (used by the fixed-center sweep).
    """

    eta1: float = 0.003
    eta2: float = 0.05
    eta3: float = 0.005
    p_sigma: float = 1.0
    p1: float = 1.0
    p2: float = 0.5
    nu_fixed: Optional[float] = None
    nu_adjustment: float = DEFAULT_NU_ADJUSTMENT
    nu_min: float = 1.1
    nu_cap: float = DEFAULT_NU_CAP
    moment_floor: float = 1e-20
    warmup: int = 300

    def __post_init__(self):
        if not (0.0 <= self.eta1 <= 1.0):
            raise DomainError(f"eta1 must be in [0, 1], got {self.eta1!r}")
        for name in ("eta2", "eta3"):
            v = getattr(self, name)
            if not (0.0 < v <= 1.0):
                raise DomainError(f"{name} must be in (0, 1], got {v!r}")
        for name in ("p_sigma", "p1", "p2"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")
        if self.p1 == self.p2:
            raise DomainError("p1 and p2 must differ")
        if not (0.0 < self.nu_min < self.nu_cap):
            raise DomainError(
                f"need 0 < nu_min < nu_cap, got ({self.nu_min!r}, {self.nu_cap!r})")
        if self.nu_fixed is not None:
            if not (math.isfinite(self.nu_fixed) and self.nu_fixed > 0.0):
                raise DomainError(f"nu_fixed must be finite and > 0, "
                                  f"got {self.nu_fixed!r}")
            if self.p_sigma >= self.nu_fixed:
                raise DomainError(
                    f"p_sigma={self.p_sigma} must be < nu_fixed={self.nu_fixed} "
                    "(the moment diverges otherwise)")
        else:
            if self.p_sigma >= self.nu_min:
                raise DomainError(
                    f"p_sigma={self.p_sigma} must be < nu_min={self.nu_min}")
        if max(self.p1, self.p2) >= self.nu_min:
            raise DomainError(
                f"p1, p2 must be < nu_min={self.nu_min}, "
                f"got ({self.p1}, {self.p2})")
        if not (math.isfinite(self.nu_adjustment) and self.nu_adjustment >= 0.0):
            raise DomainError(
                f"nu_adjustment must be finite and >= 0, got {self.nu_adjustment!r}")
        if not (math.isfinite(self.moment_floor) and self.moment_floor > 0.0):
            raise DomainError(
                f"moment_floor must be finite and > 0, got {self.moment_floor!r}")
        if self.warmup < 0:
            raise DomainError(f"warmup must be >= 0, got {self.warmup!r}")


@dataclass(frozen=True)
class EmaState:
    """Evolving estimator state: center plus three moment EMAs."""

    mu: float
    m_sigma: float
    m1: float
    m2: float
    t: int = 0

    def __post_init__(self):
        for name, v in (("mu", self.mu), ("m_sigma", self.m_sigma),
                        ("m1", self.m1), ("m2", self.m2)):
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
        for name, v in (("m_sigma", self.m_sigma), ("m1", self.m1),
                        ("m2", self.m2)):
            if v < 0.0:
                raise DomainError(f"{name} must be >= 0, got {v!r}")


@dataclass(frozen=True)
class ParamTrajectory:
    """Per-step records (t, x, mu, sigma, nu, log_density)."""

    t: np.ndarray
    x: np.ndarray
    mu: np.ndarray
    sigma: np.ndarray
    nu: np.ndarray
    log_density: np.ndarray

    def __len__(self) -> int:
        return int(self.t.size)


@lru_cache(maxsize=32)
def _cached_table(p1: float, p2: float, nu_min: float, nu_cap: float) -> NuInversionTable:
    return build_nu_table(p1, p2, nu_min=nu_min, nu_cap=nu_cap)


def _inversion_arrays(config: AdaptiveConfig):
    if config.nu_fixed is not None:
        empty = np.empty(0, dtype=np.float64)
        return empty, empty
    table = _cached_table(config.p1, config.p2, config.nu_min, config.nu_cap)
    ratio_asc, ln_nu = table.inversion_arrays()
    return (np.ascontiguousarray(ratio_asc, dtype=np.float64),
            np.ascontiguousarray(ln_nu, dtype=np.float64))


def step(state: EmaState, x: float, config: AdaptiveConfig):
    """One step: (new_state, StudentTParams estimate for this time index).

    The estimate is computed from `state` before x is ingested, so x is
    out of sample for it.
    """
    ratio_asc, ln_nu = _inversion_arrays(config)
    nu_fixed = float("nan") if config.nu_fixed is None else config.nu_fixed
    (mu_t, sigma_t, nu_t, _logd, mu, m_sigma, m1, m2) = _fold_py.step_once(
        float(x), state.mu, state.m_sigma, state.m1, state.m2,
        config.eta1, config.eta2, config.eta3,
        config.p_sigma, config.p1, config.p2,
        nu_fixed, config.nu_adjustment, config.nu_cap, config.moment_floor,
        ratio_asc.tolist(), ln_nu.tolist())
    new_state = EmaState(mu, m_sigma, m1, m2, state.t + 1)
    return new_state, StudentTParams(mu_t, sigma_t, nu_t)


def seed_state_from_prefix(xs, k: int, config: AdaptiveConfig,
                           mu: Optional[float] = None) -> EmaState:
    """State seeded with prefix statistics: mean and absolute moments.

    ``mu=None`` uses the prefix mean; a numeric ``mu`` pins the center
    and takes moments about it.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if k < 1 or k > xs.size:
        raise SeriesTooShortError(
            f"prefix length {k} not usable for a series of {xs.size} points")
    prefix = xs[:k]
    mu0 = float(prefix.mean()) if mu is None else float(mu)
    d = np.abs(prefix - mu0)
    return EmaState(
        mu=mu0,
        m_sigma=float(np.mean(d ** config.p_sigma)),
        m1=float(np.mean(d ** config.p1)),
        m2=float(np.mean(d ** config.p2)),
        t=0,
    )


def run(xs, config: AdaptiveConfig,
        init: Union[EmaState, int] = 300) -> ParamTrajectory:
    """Fold the moving estimator over a return series.

    ``init`` is either an explicit EmaState (the fold starts at t=0) or
    a prefix length k: the state is seeded with the first k points'
    statistics and the fold starts at t=k.  Warmup exclusion is applied
    downstream by the scoring functions, not here; the trajectory holds
    every folded step.
    """
    values = np.ascontiguousarray(getattr(xs, "values", xs), dtype=np.float64)
    n = int(values.size)
    if n <= config.warmup:
        raise SeriesTooShortError(
            f"series of {n} points does not exceed warmup={config.warmup}")

    if isinstance(init, EmaState):
        state, t_start = init, 0
    else:
        k = int(init)
        if n <= k:
            raise SeriesTooShortError(
                f"series of {n} points does not exceed init prefix k={k}")
        state, t_start = seed_state_from_prefix(values, k, config), k

    ratio_asc, ln_nu = _inversion_arrays(config)
    nu_fixed = float("nan") if config.nu_fixed is None else config.nu_fixed

    m = n - t_start
    out_mu = np.empty(m)
    out_sigma = np.empty(m)
    out_nu = np.empty(m)
    out_logd = np.empty(m)
    _fold_impl.run_fold(
        values, t_start, state.mu, state.m_sigma, state.m1, state.m2,
        config.eta1, config.eta2, config.eta3,
        config.p_sigma, config.p1, config.p2,
        nu_fixed, config.nu_adjustment, config.nu_cap, config.moment_floor,
        ratio_asc, ln_nu, out_mu, out_sigma, out_nu, out_logd)

    return ParamTrajectory(
        t=np.arange(t_start, n, dtype=np.int64),
        x=values[t_start:].copy(),
        mu=out_mu, sigma=out_sigma, nu=out_nu, log_density=out_logd)
