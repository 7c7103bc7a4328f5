"""
Sinusoidal (Mathieu) modulation: f^2 = f0^2 (1 - h sin(Omega t)).
"""

from dataclasses import dataclass

import numpy as np

from ringlight.core.exceptions import DomainError
from ringlight.services.modulation.base import ModulationProfile


@dataclass(frozen=True)
class SinusoidalModulation(ModulationProfile):
    """
    Small sinusoidal permittivity modulation with relative amplitude h.

    The drive phase starts at sin(0) = 0. h = 0 gives an unmodulated mode.
    """
    f0: float
    h: float
    omega: float

    kind = "sinusoidal"

    def __post_init__(self):
        if not np.isfinite(self.f0) or self.f0 <= 0:
            raise DomainError(f"f0 must be > 0, got {self.f0}")
        if not abs(self.h) < 1:
            raise DomainError(f"|h| must be < 1 so that f^2 > 0, got {self.h}")
        if not np.isfinite(self.omega) or self.omega <= 0:
            raise DomainError(f"omega must be > 0, got {self.omega}")

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega

    @property
    def is_constant(self) -> bool:
        return self.h == 0

    def _frequency(self, tau: float) -> float:
        return float(self.f0 * np.sqrt(1.0 - self.h * np.sin(self.omega * tau)))

    def _pump_rate(self, tau: float) -> float:
        wt = self.omega * tau
        return float(self.h * self.omega * np.cos(wt)
                     / (4.0 * (1.0 - self.h * np.sin(wt))))

    def frequency_squared_at(self, t: float) -> float:
        return float(self.f0 ** 2 * (1.0 - self.h * np.sin(self.omega * self.phase(t))))


def resonant_sinusoidal(f0: float, h: float) -> SinusoidalModulation:
    """First parametric resonance: T = pi/f0, i.e. Omega = 2 f0."""
    if f0 <= 0:
        raise DomainError(f"f0 must be > 0, got {f0}")
    if not 0 < abs(h) < 1:
        raise DomainError(f"need 0 < |h| < 1, got {h}")
    return SinusoidalModulation(f0=f0, h=h, omega=2.0 * f0)
