"""
Base class for periodic modulation profiles.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class Kick:
    """A sudden frequency jump at ``time`` (within one period)."""
    time: float
    f_prev: float
    f_next: float

    @property
    def weight(self) -> float:
        """Integrated pump rate across the jump: -1/2 log(f_next/f_prev)."""
        return -0.5 * float(np.log(self.f_next / self.f_prev))

    @property
    def squeeze(self) -> float:
        """s = sqrt(f_next/f_prev)."""
        return float(np.sqrt(self.f_next / self.f_prev))


class ModulationProfile(ABC):
    """
    A T-periodic mode frequency f(t) > 0 with pump rate g = -1/2 d log f/dt.

    Piecewise-constant profiles report their jumps through ``kicks``; their
    pump rate is never sampled across a jump.
    """

    kind: str = "abstract"

    @property
    @abstractmethod
    def period(self) -> float:
        """Modulation period T."""

    @abstractmethod
    def _frequency(self, tau: float) -> float:
        """f at phase tau in [0, T)."""

    @abstractmethod
    def _pump_rate(self, tau: float) -> float:
        """g at phase tau in [0, T)."""

    def kicks(self) -> Tuple[Kick, ...]:
        """Jumps within one period, in time order; the last one sits at T."""
        return ()

    @property
    def is_piecewise_constant(self) -> bool:
        return bool(self.kicks())

    @property
    def is_constant(self) -> bool:
        """True when f does not vary, so the dynamics is a pure rotation."""
        return False

    def phase(self, t: float) -> float:
        """t reduced to [0, T)."""
        return float(np.mod(t, self.period))

    def frequency_at(self, t: float) -> float:
        """f(t mod T)."""
        return self._frequency(self.phase(t))

    def pump_rate_at(self, t: float) -> float:
        """g(t mod T)."""
        return self._pump_rate(self.phase(t))

    def log_frequency_at(self, t: float) -> float:
        return float(np.log(self.frequency_at(t)))
