"""
Closed-form finite-temperature observables.

For a thermal initial state at the bath occupation nbar, the total photon
number and the logarithmic negativity at stroboscopic times t = n T follow
from the Lyapunov exponent nu, the bath rate gamma and two shape factors
F+ and F- that carry the within-period structure of the modulation.

    <N+1>(t) = (2 nbar + 1)/4 [2 cosh 2 nu t + e^{-eta- t} + e^{-eta+ t}
                + (1 - e^{-eta- t}) F- + (1 - e^{-eta+ t}) F+]
    E_N(t)   = max{0, nu t/ln 2 - 1/2 log2[e^{-eta+ t}(1 - F+) + F+]
                - log2(2 nbar + 1)}

with eta+- = 2(gamma +- nu). Evaluating them between stroboscopic times is an
interpolation used by the root search in ``occurrence_time``.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy import constants
from scipy.optimize import brentq

from ringlight.core.config import settings
from ringlight.core.exceptions import DomainError, HorizonError
from ringlight.core.logging import get_logger
from ringlight.services.floquet import lyapunov_exponent, monodromy
from ringlight.services.gaussian import BathParams, bath_occupation
from ringlight.services.modulation import (
    ModulationProfile, RectangularModulation, SinusoidalModulation,
)

logger = get_logger(__name__)

# Below this |eta T| the threshold series replaces the expm1 ratio.
_THRESHOLD_EPS = 1e-12

REGULAR = "regular"
THRESHOLD = "threshold"

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class RectangularShape:
    t1: float
    t2: float
    f_r: float

    kind = "rectangular"

    @property
    def rho(self) -> float:
        """max(f_r, 1/f_r) = e^{nu T} at optimal tuning."""
        return max(self.f_r, 1.0 / self.f_r)


@dataclass(frozen=True)
class SinusoidalShape:
    kind = "sinusoidal"


Shape = Union[RectangularShape, SinusoidalShape]


@dataclass(frozen=True)
class ClosedFormParams:
    """Inputs of the closed forms; valid inside a resonance tongue (nu > 0)."""
    nu: float
    gamma: float
    nbar: float
    T: float
    shape: Shape

    def __post_init__(self):
        if not self.nu > 0:
            raise DomainError(f"closed forms need nu > 0, got {self.nu}")
        if not self.T > 0:
            raise DomainError(f"T must be > 0, got {self.T}")
        if self.gamma < 0 or self.nbar < 0:
            raise DomainError(f"need gamma, nbar >= 0, got {self.gamma}, {self.nbar}")
        if isinstance(self.shape, RectangularShape):
            if abs(self.shape.t1 + self.shape.t2 - self.T) > 1e-9 * self.T:
                raise DomainError("rectangular t1 + t2 must equal T")


@dataclass(frozen=True)
class FFactors:
    plus: float
    minus: float
    branch: str


def eta(gamma: float, nu: float) -> Tuple[float, float]:
    """(eta+, eta-) = (2(gamma + nu), 2(gamma - nu))."""
    return 2.0 * (gamma + nu), 2.0 * (gamma - nu)


def _numerators(params: ClosedFormParams) -> Tuple[float, float]:
    """N+- with F+- = N+- / (1 - e^{eta+- T}); both vanish at gamma = 0."""
    gamma, T = params.gamma, params.T
    eta_plus, eta_minus = eta(gamma, params.nu)
    shape = params.shape
    if isinstance(shape, RectangularShape):
        head = -np.expm1(2 * gamma * shape.t1)
        tail = -np.exp(2 * gamma * shape.t1) * np.expm1(2 * gamma * shape.t2)
        return float(head + tail * shape.rho), float(head + tail / shape.rho)

    # (2 gamma / eta) (1 - e^{eta T}) = -2 gamma expm1(eta T)/eta
    def scaled(x: float) -> float:
        if abs(x * T) < _THRESHOLD_EPS:
            return -2.0 * gamma * T
        return float(-2.0 * gamma * np.expm1(x * T) / x)

    return scaled(eta_minus), scaled(eta_plus)


def _growth_ratio(x: float, t: ArrayLike, T: float) -> ArrayLike:
    """(1 - e^{-x t}) / (1 - e^{x T}), finite through x = 0."""
    if abs(x * T) < _THRESHOLD_EPS:
        return -np.asarray(t) / T * (1.0 - x * (np.asarray(t) + T) / 2.0)
    return np.expm1(-x * np.asarray(t)) / np.expm1(x * T)


def f_factor(params: ClosedFormParams) -> FFactors:
    """
    Shape factors (F+, F-).

    At the threshold gamma = nu the denominator of F- vanishes; F- is then
    reported as +-inf with branch "threshold". The closed forms never use F-
    alone there, only the finite product (1 - e^{-eta- t}) F-.
    """
    eta_plus, eta_minus = eta(params.gamma, params.nu)
    n_plus, n_minus = _numerators(params)
    plus = n_plus / -np.expm1(eta_plus * params.T)
    if abs(eta_minus * params.T) < _THRESHOLD_EPS:
        logger.warning("closed forms at threshold", gamma=params.gamma, nu=params.nu)
        minus = np.copysign(np.inf, n_minus) if n_minus != 0 else 0.0
        return FFactors(plus=float(plus), minus=float(minus), branch=THRESHOLD)
    minus = n_minus / -np.expm1(eta_minus * params.T)
    return FFactors(plus=float(plus), minus=float(minus), branch=REGULAR)


def photon_number_closed_at(params: ClosedFormParams, t: ArrayLike) -> ArrayLike:
    """<N+1> at time t (exact form at t = n T, interpolation between)."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be >= 0")
    eta_plus, eta_minus = eta(params.gamma, params.nu)
    n_plus, n_minus = _numerators(params)
    with np.errstate(over="ignore"):
        bracket = (2.0 * np.cosh(2.0 * params.nu * t)
                   + np.exp(-eta_minus * t) + np.exp(-eta_plus * t)
                   + n_minus * _growth_ratio(eta_minus, t, params.T)
                   + n_plus * _growth_ratio(eta_plus, t, params.T))
    value = (2.0 * params.nbar + 1.0) / 4.0 * bracket
    return float(value) if value.ndim == 0 else value


def photon_number_closed(params: ClosedFormParams, n_periods: int) -> float:
    """<N+1> at t = n_periods * T."""
    if n_periods < 0 or int(n_periods) != n_periods:
        raise DomainError(f"n_periods must be a non-negative integer, got {n_periods}")
    return float(photon_number_closed_at(params, n_periods * params.T))


def photon_number_asymptotic(params: ClosedFormParams, t: ArrayLike) -> ArrayLike:
    """
    Late-time <N+1> ~ (2 nbar + 1)/4 [e^{2 nu t} + e^{-eta- t}(1 - F-)].

    Its log-slope tends to 2 nu. At threshold the second term is replaced by
    its exact linear growth 1 + N- (1 - e^{-eta- t})/(1 - e^{eta- T}).
    """
    t = np.asarray(t, dtype=float)
    _, eta_minus = eta(params.gamma, params.nu)
    factors = f_factor(params)
    with np.errstate(over="ignore"):
        if factors.branch == THRESHOLD:
            n_minus = _numerators(params)[1]
            second = 1.0 + n_minus * _growth_ratio(eta_minus, t, params.T)
        else:
            second = np.exp(-eta_minus * t) * (1.0 - factors.minus)
        value = (2.0 * params.nbar + 1.0) / 4.0 * (np.exp(2.0 * params.nu * t) + second)
    return float(value) if value.ndim == 0 else value


def _logneg_raw(params: ClosedFormParams, t: ArrayLike) -> ArrayLike:
    eta_plus, _ = eta(params.gamma, params.nu)
    n_plus, _ = _numerators(params)
    t = np.asarray(t, dtype=float)
    # e^{-eta+ t}(1 - F+) + F+ = e^{-eta+ t} + (1 - e^{-eta+ t}) F+
    inner = np.exp(-eta_plus * t) + n_plus * _growth_ratio(eta_plus, t, params.T)
    if np.any(inner <= 0):
        raise DomainError("logarithm argument <= 0; F+ is inconsistent with the parameters")
    return (params.nu * t / np.log(2.0) - 0.5 * np.log2(inner)
            - np.log2(2.0 * params.nbar + 1.0))


def logneg_closed_at(params: ClosedFormParams, t: ArrayLike) -> ArrayLike:
    """E_N at time t (exact form at t = n T, interpolation between)."""
    if np.any(np.asarray(t) < 0):
        raise DomainError("t must be >= 0")
    value = np.maximum(_logneg_raw(params, t), 0.0)
    return float(value) if np.ndim(value) == 0 else value


def logneg_closed(params: ClosedFormParams, n_periods: int) -> float:
    """E_N at t = n_periods * T."""
    if n_periods < 0 or int(n_periods) != n_periods:
        raise DomainError(f"n_periods must be a non-negative integer, got {n_periods}")
    return float(logneg_closed_at(params, n_periods * params.T))


def occurrence_time(params: ClosedFormParams,
                    horizon_periods: Optional[float] = None,
                    scan_points: int = 4097) -> float:
    """
    Smallest t >= 0 at which the closed-form E_N becomes positive.

    Doubling brackets find a time with E_N > 0, a uniform scan of [0, that
    time] finds the first sign change, and Brent's method refines it to 1e-9 T.
    Returns 0 when E_N > 0 for every t > 0.

    The result grows with nbar. It grows with gamma once it exceeds about two
    periods; below that the gamma dependence is of order nu T and has either
    sign, since the within-period interpolation is only first order there.

    Raises:
        HorizonError: E_N stays zero for the whole horizon
    """
    T = params.T
    horizon = T * (settings.occurrence_horizon_periods
                   if horizon_periods is None else horizon_periods)
    tol = 1e-9 * T

    upper = T
    while _logneg_raw(params, upper) <= 0:
        if upper >= horizon:
            logger.error("never entangled within horizon", horizon=horizon)
            raise HorizonError(f"E_N stays zero up to t = {horizon:g}")
        upper = min(2.0 * upper, horizon)

    grid = np.linspace(0.0, upper, scan_points)
    positive = np.flatnonzero(_logneg_raw(params, grid) > 0)
    first = int(positive[0])
    if first == 0:
        return 0.0
    t_star = brentq(lambda t: float(_logneg_raw(params, t)),
                    float(grid[first - 1]), float(grid[first]), xtol=tol)
    logger.debug("occurrence time found", t=t_star, nbar=params.nbar, gamma=params.gamma)
    return float(t_star)


def scenario_ratio(radius: float, index: float, temperature: float = 293.0) -> float:
    """
    k_B T / (hbar w) for a ring of radius R (m) and refractive index n.

    The resonant wavelength is taken as 2 pi R, so w = c / (n R).
    """
    if radius <= 0 or index <= 0 or temperature <= 0:
        raise DomainError(
            f"radius, index and temperature must be > 0, got {radius}, {index}, {temperature}"
        )
    w = constants.c / (index * radius)
    return float(constants.k * temperature / (constants.hbar * w))


def scenario_occupation(radius: float, index: float, temperature: float = 293.0) -> float:
    """Bath occupation nbar for the ring scenario of ``scenario_ratio``."""
    return bath_occupation(1.0 / scenario_ratio(radius, index, temperature))


def closed_form_params_for(profile: ModulationProfile, bath: BathParams) -> ClosedFormParams:
    """
    ClosedFormParams for an actual profile, with nu from its monodromy.

    Raises:
        DomainError: the profile is stable or its shape has no closed form
    """
    exponent = lyapunov_exponent(monodromy(profile, "-"))
    if exponent.stable or exponent.growth_rate <= 0:
        raise DomainError("profile is outside every resonance tongue (nu = 0)")
    if isinstance(profile, RectangularModulation):
        shape: Shape = RectangularShape(t1=profile.t1, t2=profile.t2, f_r=profile.f_ratio)
    elif isinstance(profile, SinusoidalModulation):
        shape = SinusoidalShape()
    else:
        raise DomainError(f"no closed form for {profile.kind} modulation")
    return ClosedFormParams(nu=exponent.growth_rate, gamma=bath.gamma, nbar=bath.nbar,
                            T=profile.period, shape=shape)
