"""
Modulation package.
Periodic permittivity-modulation profiles f(t), g(t) and their registry.
"""

from ringlight.services.modulation.base import Kick, ModulationProfile
from ringlight.services.modulation.factory import (
    PROFILES, build_profile, get_available_profiles,
)
from ringlight.services.modulation.rectangular import (
    RectangularModulation, resonant_rectangular, tuned_rectangular,
)
from ringlight.services.modulation.sampled import SampledModulation
from ringlight.services.modulation.sinusoidal import (
    SinusoidalModulation, resonant_sinusoidal,
)

__all__ = [
    "Kick",
    "ModulationProfile",
    "PROFILES",
    "RectangularModulation",
    "SampledModulation",
    "SinusoidalModulation",
    "build_profile",
    "get_available_profiles",
    "resonant_rectangular",
    "resonant_sinusoidal",
    "tuned_rectangular",
]
