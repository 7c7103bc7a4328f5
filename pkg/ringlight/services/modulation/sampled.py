"""
Sampled modulation: f given on a uniform grid over one period.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.interpolate import CubicSpline

from ringlight.core.exceptions import DomainError
from ringlight.services.modulation.base import ModulationProfile


@dataclass(frozen=True)
class SampledModulation(ModulationProfile):
    """
    Periodic cubic interpolant through samples of f on [0, T].

    ``samples`` includes both endpoints, so f(0) must equal f(T). The pump
    rate is a centered finite difference of -1/2 log f on the interpolant.
    """
    samples: Tuple[float, ...]
    period_: float
    fd_step: float = 1e-6

    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    kind = "sampled"

    def __post_init__(self):
        values = np.asarray(self.samples, dtype=float)
        if values.ndim != 1 or values.size < 4:
            raise DomainError("need at least 4 samples of f over one period")
        if np.any(~np.isfinite(values)) or np.any(values <= 0):
            raise DomainError("all samples of f must be finite and > 0")
        if not np.isclose(values[0], values[-1], rtol=1e-12, atol=0.0):
            raise DomainError("samples must be periodic: f(0) == f(T)")
        if not np.isfinite(self.period_) or self.period_ <= 0:
            raise DomainError(f"period must be > 0, got {self.period_}")
        values[-1] = values[0]
        grid = np.linspace(0.0, self.period_, values.size)
        object.__setattr__(self, "samples", tuple(float(v) for v in values))
        object.__setattr__(self, "_spline", CubicSpline(grid, values, bc_type="periodic"))

    @property
    def period(self) -> float:
        return self.period_

    def _frequency(self, tau: float) -> float:
        return float(self._spline(tau))

    def _pump_rate(self, tau: float) -> float:
        dt = self.fd_step * self.period_
        ahead = np.log(self._spline(np.mod(tau + dt, self.period_)))
        behind = np.log(self._spline(np.mod(tau - dt, self.period_)))
        return float(-0.5 * (ahead - behind) / (2.0 * dt))

    @classmethod
    def from_function(cls, fn, period: float, n_samples: int = 257) -> "SampledModulation":
        """Sample a callable f(t) on a uniform grid of n_samples points."""
        grid = np.linspace(0.0, period, n_samples)
        return cls(samples=tuple(float(fn(t)) for t in grid), period_=period)
