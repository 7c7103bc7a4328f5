"""
Rectangular (Meissner) modulation: f jumps between f1 and f2.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ringlight.core.exceptions import DomainError
from ringlight.services.modulation.base import Kick, ModulationProfile

# Jump instants closer than this (relative to T) count as the jump itself.
_JUMP_RTOL = 1e-12


@dataclass(frozen=True)
class RectangularModulation(ModulationProfile):
    """f = f1 on [0, t1), f2 on [t1, t1 + t2), repeated with period t1 + t2."""
    f1: float
    f2: float
    t1: float
    t2: float

    kind = "rectangular"

    def __post_init__(self):
        for name in ("f1", "f2", "t1", "t2"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise DomainError(f"{name} must be > 0, got {value}")

    @property
    def period(self) -> float:
        return self.t1 + self.t2

    @property
    def f_ratio(self) -> float:
        """f_r = f2/f1."""
        return self.f2 / self.f1

    @property
    def phases(self) -> Tuple[float, float]:
        """Rotation angles (t1 f1, t2 f2) accumulated in each segment."""
        return self.t1 * self.f1, self.t2 * self.f2

    def kicks(self) -> Tuple[Kick, ...]:
        if self.f1 == self.f2:
            return ()
        return (Kick(self.t1, self.f1, self.f2), Kick(self.period, self.f2, self.f1))

    @property
    def is_piecewise_constant(self) -> bool:
        return True

    @property
    def is_constant(self) -> bool:
        return self.f1 == self.f2

    def segments(self) -> Tuple[Tuple[float, float, float], ...]:
        """(start, end, f) for both segments of one period."""
        return ((0.0, self.t1, self.f1), (self.t1, self.period, self.f2))

    def _at_jump(self, tau: float) -> bool:
        tol = _JUMP_RTOL * self.period
        return (self.f1 != self.f2
                and (abs(tau) <= tol or abs(tau - self.t1) <= tol
                     or abs(tau - self.period) <= tol))

    def _frequency(self, tau: float) -> float:
        return self.f1 if tau < self.t1 else self.f2

    def _pump_rate(self, tau: float) -> float:
        if self._at_jump(tau):
            raise DomainError(
                "pump rate is impulsive at a frequency jump; use the kick "
                "weight -1/2*log(f_next/f_prev) from kicks() instead"
            )
        return 0.0


def tuned_rectangular(f_r: float, phase: float, T: float) -> RectangularModulation:
    """
    Rectangular profile with t1*f1 = t2*f2 = phase, f2 = f_r*f1 and t1 + t2 = T.
    """
    if f_r <= 0 or phase <= 0 or T <= 0:
        raise DomainError(f"need f_r, phase, T > 0, got {f_r}, {phase}, {T}")
    f1 = phase * (1.0 + 1.0 / f_r) / T
    t1 = phase / f1
    return RectangularModulation(f1=f1, f2=f_r * f1, t1=t1, t2=T - t1)


def resonant_rectangular(f_r: float, T: float) -> RectangularModulation:
    """
    Optimally tuned rectangular profile, t_i*f_i = pi/2.

    For a fixed ratio f_r this maximizes the Lyapunov exponent,
    nu = |log f_r| / T.
    """
    if f_r == 1:
        raise DomainError("f_r = 1 means no modulation")
    return tuned_rectangular(f_r, np.pi / 2, T)
