"""
Profile factory for building modulation profiles from configuration.
"""

import math
from typing import Any, Dict, Type

from ringlight.core.exceptions import ConfigError
from ringlight.services.modulation.base import ModulationProfile
from ringlight.services.modulation.rectangular import (
    RectangularModulation, resonant_rectangular, tuned_rectangular,
)
from ringlight.services.modulation.sampled import SampledModulation
from ringlight.services.modulation.sinusoidal import (
    SinusoidalModulation, resonant_sinusoidal,
)


# Registry of available profile kinds
PROFILES: Dict[str, Type[ModulationProfile]] = {
    "rectangular": RectangularModulation,
    "sinusoidal": SinusoidalModulation,
    "sampled": SampledModulation,
}


def build_profile(kind: str, **params: Any) -> ModulationProfile:
    """
    Build a profile by kind name.

    Rectangular and sinusoidal profiles accept either their raw fields or the
    resonant shorthand (``f_r`` + ``period``, optionally with ``phase`` for
    the tuned family; ``f0`` + ``h`` without ``omega``). Sampled profiles
    take ``samples`` and ``period``.

    Raises:
        ConfigError: unknown kind or inconsistent parameters
    """
    if kind not in PROFILES:
        raise ConfigError(f"Unknown modulation kind: {kind}")

    params = {k: v for k, v in params.items() if v is not None}
    try:
        if kind == "rectangular":
            if "f_r" in params and "phase" in params:
                return tuned_rectangular(params["f_r"], params["phase"], params["period"])
            if "f_r" in params:
                return resonant_rectangular(params["f_r"], params["period"])
            return RectangularModulation(
                f1=params["f1"], f2=params["f2"], t1=params["t1"], t2=params["t2"]
            )
        if kind == "sinusoidal":
            if "omega" not in params and "period" not in params:
                return resonant_sinusoidal(params["f0"], params["h"])
            omega = params.get("omega") or 2 * math.pi / params["period"]
            return SinusoidalModulation(f0=params["f0"], h=params["h"], omega=omega)
        return SampledModulation(samples=tuple(params["samples"]), period_=params["period"])
    except KeyError as missing:
        raise ConfigError(f"{kind} modulation is missing parameter {missing}") from None


def get_available_profiles() -> list[str]:
    """Get list of available profile kinds."""
    return list(PROFILES.keys())
