"""
Floquet analysis of the one-period maps.

Provides monodromy matrices of the decoupled blocks and of the Hill form
y'' + f(t)^2 y = 0, Lyapunov exponents, the analytic Meissner and Mathieu
resonance values, stability charts and a derivative-free resonance optimizer.
"""

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ringlight.core.config import settings
from ringlight.core.exceptions import (
    ConfigError, DeterminantError, DomainError, IntegrationError,
)
from ringlight.core.logging import get_logger
from ringlight.core.parallel import ordered_map
from ringlight.services.dynamics import as_block, block_propagator
from ringlight.services.modulation import (
    ModulationProfile, RectangularModulation, SinusoidalModulation,
    tuned_rectangular,
)

logger = get_logger(__name__)

HILL = "hill"
FAMILIES = ("rectangular", "sinusoidal")

# Contraction of the coordinate-search step after an unsuccessful sweep.
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class Monodromy:
    """One-period map of a 2x2 linear system; ``block`` is "+", "-" or "hill"."""
    block: str
    matrix: np.ndarray
    period: float

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=float)
        if matrix.shape != (2, 2):
            raise DomainError(f"monodromy must be 2x2, got {matrix.shape}")
        det = float(np.linalg.det(matrix))
        # Integration error in det grows with |M|^2.
        scale = max(1.0, float(np.sum(matrix ** 2)))
        if abs(det - 1.0) > settings.monodromy_det_tol * scale:
            logger.error("monodromy is not unimodular", block=self.block, det=det)
            raise DeterminantError(f"det of the {self.block} monodromy is {det:.6g}, not 1", det=det)
        if abs(det - 1.0) > 1e-9 * scale:
            logger.warning("monodromy determinant drifted", block=self.block, det=det)
        object.__setattr__(self, "matrix", matrix)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))


@dataclass(frozen=True)
class LyapunovExponent:
    """Floquet exponent nu with 2 cosh(nu T) = trace; Re nu >= 0."""
    nu: complex
    stable: bool

    @property
    def growth_rate(self) -> float:
        return float(self.nu.real)


def monodromy(profile: ModulationProfile, block="-") -> Monodromy:
    """
    Monodromy of block "+" or "-": the block propagator at t = T.

    Rectangular profiles use the exact product of rotations and kicks.
    """
    block = as_block(block)
    matrix = block_propagator(profile, block, profile.period)
    return Monodromy(block=block.value, matrix=matrix, period=profile.period)


def lyapunov_exponent(m: Monodromy, T: Optional[float] = None,
                      margin: Optional[float] = None) -> LyapunovExponent:
    """
    Lyapunov exponent from the monodromy trace.

    Unstable when |trace| > 2 + margin: nu = arccosh(trace/2)/T on the
    principal branch, so a negative trace carries Im nu = pi/T. Otherwise
    stable with Re nu = 0 and Im nu = arccos(trace/2)/T.
    """
    T = m.period if T is None else T
    if not T > 0:
        raise DomainError(f"T must be > 0, got {T}")
    margin = settings.instability_margin if margin is None else margin
    trace = m.trace
    if abs(trace) > 2.0 + margin:
        real = float(np.arccosh(abs(trace) / 2.0)) / T
        imag = np.pi / T if trace < 0 else 0.0
        return LyapunovExponent(nu=complex(real, imag), stable=False)
    half = float(np.clip(trace / 2.0, -1.0, 1.0))
    return LyapunovExponent(nu=complex(0.0, np.arccos(half) / T), stable=True)


def meissner_nu(f_r: float, T: float) -> float:
    """|log f_r|/T, the exponent of a rectangular profile tuned to t_i f_i = pi/2."""
    if f_r <= 0 or T <= 0:
        raise DomainError(f"need f_r > 0 and T > 0, got {f_r}, {T}")
    return abs(float(np.log(f_r))) / T


def mathieu_nu(f0: float, h: float) -> float:
    """First-order exponent f0 |h| / 4 at the first resonance T = pi/f0."""
    if f0 <= 0:
        raise DomainError(f"f0 must be > 0, got {f0}")
    return f0 * abs(h) / 4.0


def _hill_segment(f: float, tau: float) -> np.ndarray:
    c, s = np.cos(f * tau), np.sin(f * tau)
    return np.array([[c, s / f], [-f * s, c]])


def hill_monodromy(profile: ModulationProfile) -> Monodromy:
    """
    Period map of y'' + f(t)^2 y = 0 written as (y, y')' = [[0, 1], [-f^2, 0]] (y, y').

    y and y' are continuous across frequency jumps, so a rectangular profile
    is the product of two harmonic segments.
    """
    T = profile.period
    if isinstance(profile, RectangularModulation):
        (_, t1, f1), (_, _, f2) = profile.segments()
        matrix = _hill_segment(f2, T - t1) @ _hill_segment(f1, t1)
        return Monodromy(block=HILL, matrix=matrix, period=T)

    def rhs(t, u):
        u = u.reshape(2, 2)
        f2 = profile.frequency_at(t) ** 2
        return (np.array([[0.0, 1.0], [-f2, 0.0]]) @ u).reshape(-1)

    sol = solve_ivp(rhs, (0.0, T), np.eye(2).reshape(-1), method="RK45",
                    rtol=settings.ode_rtol, atol=settings.ode_atol)
    if sol.status < 0:
        raise IntegrationError(f"Hill integration failed: {sol.message}",
                               last_good_time=float(sol.t[-1]))
    return Monodromy(block=HILL, matrix=sol.y[:, -1].reshape(2, 2), period=T)


# --------------------------------------------------------------------------
# Stability charts
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StabilityChart:
    """Re nu on a 2-D grid; ``re_nu[i, j]`` belongs to (axis1[i], axis2[j])."""
    family: str
    axis_names: Tuple[str, str]
    axis1: np.ndarray
    axis2: np.ndarray
    re_nu: np.ndarray
    fixed: Dict[str, float] = field(default_factory=dict)

    def rows(self) -> List[Tuple[float, float, float]]:
        """(axis1, axis2, re_nu) triples, row-major with axis1 outer."""
        return [(float(a), float(b), float(self.re_nu[i, j]))
                for i, a in enumerate(self.axis1)
                for j, b in enumerate(self.axis2)]


def _validate_axis(name: str, values: Sequence[float]) -> np.ndarray:
    axis = np.asarray(values, dtype=float).reshape(-1)
    if axis.size == 0:
        raise ConfigError(f"axis {name} is empty")
    if not np.all(np.isfinite(axis)):
        raise ConfigError(f"axis {name} has non-finite values")
    steps = np.diff(axis)
    if axis.size > 1 and not (np.all(steps > 0) or np.all(steps < 0)):
        raise ConfigError(f"axis {name} must be strictly monotone")
    return axis


def _chart_profile_builder(family: str, f0: float, period: float
                           ) -> Tuple[Tuple[str, str], Callable[[float, float], ModulationProfile]]:
    if family == "sinusoidal":
        def build(T: float, h: float) -> ModulationProfile:
            if T <= 0:
                raise ConfigError(f"period must be > 0, got {T}")
            return SinusoidalModulation(f0=f0, h=h, omega=2 * np.pi / T)
        return ("period", "h"), build
    if family == "rectangular":
        def build(f_r: float, phase: float) -> ModulationProfile:
            return tuned_rectangular(f_r, phase, period)
        return ("f_r", "phase"), build
    raise ConfigError(f"Unknown chart family: {family}; expected one of {FAMILIES}")


def stability_chart(family: str, axis1: Sequence[float], axis2: Sequence[float], *,
                    f0: float = np.pi, period: float = 1.0, block="-",
                    threads: Optional[int] = None) -> StabilityChart:
    """
    Re nu over a parameter grid.

    sinusoidal: axis1 = period T, axis2 = amplitude h, at fixed f0.
    rectangular: axis1 = f_r, axis2 = phase t1*f1 = t2*f2, at fixed period.
    """
    names, build = _chart_profile_builder(family, f0, period)
    a1 = _validate_axis(names[0], axis1)
    a2 = _validate_axis(names[1], axis2)
    block = as_block(block)

    # Build every profile first so range errors surface before any integration.
    profiles = [build(float(x), float(y)) for x, y in itertools.product(a1, a2)]

    def evaluate(profile: ModulationProfile) -> float:
        return lyapunov_exponent(monodromy(profile, block)).growth_rate

    values = ordered_map(evaluate, profiles, threads=threads)
    re_nu = np.asarray(values, dtype=float).reshape(a1.size, a2.size)
    fixed = {"f0": float(f0)} if family == "sinusoidal" else {"period": float(period)}
    logger.info("chart computed", family=family, points=re_nu.size, block=block.value)
    return StabilityChart(family=family, axis_names=names, axis1=a1, axis2=a2,
                          re_nu=re_nu, fixed=fixed)


# --------------------------------------------------------------------------
# Resonance optimization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ResonanceOptimum:
    params: Dict[str, float]
    nu: float
    evaluations: int


def profile_from_params(family: str, params: Mapping[str, float]) -> ModulationProfile:
    """
    Build a profile of ``family`` from optimizer parameters.

    rectangular: f1, f_r, t1, period (t2 = period - t1), or f_r, phase, period
    for the tuned family. sinusoidal: f0, h, period.
    """
    try:
        if family == "rectangular":
            if "phase" in params:
                return tuned_rectangular(params["f_r"], params["phase"], params["period"])
            f1 = params["f1"]
            return RectangularModulation(f1=f1, f2=params["f_r"] * f1, t1=params["t1"],
                                         t2=params["period"] - params["t1"])
        if family == "sinusoidal":
            return SinusoidalModulation(f0=params["f0"], h=params["h"],
                                        omega=2 * np.pi / params["period"])
    except KeyError as missing:
        raise ConfigError(f"{family} optimization needs parameter {missing}") from None
    raise ConfigError(f"Unknown optimization family: {family}; expected one of {FAMILIES}")


def _validate_bounds(bounds: Mapping[str, Tuple[float, float]]) -> Dict[str, Tuple[float, float]]:
    if not bounds:
        raise ConfigError("optimization bounds are empty")
    checked = {}
    for name, pair in bounds.items():
        lo, hi = (float(v) for v in pair)
        if not (np.isfinite(lo) and np.isfinite(hi)) or lo > hi:
            raise ConfigError(f"invalid bounds for {name}: ({lo}, {hi})")
        checked[name] = (lo, hi)
    return checked


def optimize_resonance(family: str, bounds: Mapping[str, Tuple[float, float]],
                       budget: int = 200, *, fixed: Optional[Mapping[str, float]] = None,
                       grid_points: int = 11, block="-",
                       threads: Optional[int] = None) -> ResonanceOptimum:
    """
    Maximize Re nu over ``bounds`` with at most ``budget`` monodromy evaluations.

    A coarse grid of ``grid_points`` per free parameter comes first, then a
    coordinate search around the best grid point whose step contracts by the
    golden ratio after each step that fails to improve. The result is deterministic
    for a given budget. Points where the profile cannot be built score -inf.

    Raises:
        ConfigError: bad bounds, or budget smaller than the coarse grid
    """
    bounds = _validate_bounds(bounds)
    fixed = dict(fixed or {})
    block = as_block(block)
    free = [name for name, (lo, hi) in bounds.items() if hi > lo]
    if grid_points < 2:
        raise ConfigError(f"grid_points must be >= 2, got {grid_points}")
    grid_size = grid_points ** len(free)
    if budget < grid_size:
        raise ConfigError(f"budget {budget} is smaller than the coarse grid ({grid_size} points)")

    base = dict(fixed)
    base.update({name: lo for name, (lo, hi) in bounds.items() if hi == lo})
    # Missing parameters raise ConfigError here, before the grid runs.
    try:
        profile_from_params(family, {**base, **{n: bounds[n][0] for n in free}})
    except DomainError:
        pass

    def objective(point: Dict[str, float]) -> float:
        try:
            profile = profile_from_params(family, point)
        except DomainError:
            return -np.inf
        return lyapunov_exponent(monodromy(profile, block)).growth_rate

    axes = [np.linspace(bounds[n][0], bounds[n][1], grid_points) for n in free]
    candidates = [dict(base, **{n: float(v) for n, v in zip(free, values)})
                  for values in itertools.product(*axes)]
    scores = ordered_map(objective, candidates, threads=threads)
    evaluations = len(candidates)
    best_index = int(np.argmax(scores))
    best, best_value = candidates[best_index], float(scores[best_index])

    steps = {n: (bounds[n][1] - bounds[n][0]) / (grid_points - 1) for n in free}
    xtol = {n: 1e-12 * max(1.0, abs(bounds[n][1] - bounds[n][0])) for n in free}
    while free and evaluations < budget and any(steps[n] > xtol[n] for n in free):
        for name in free:
            if evaluations >= budget:
                break
            lo, hi = bounds[name]
            improved = False
            for direction in (1.0, -1.0):
                if evaluations >= budget:
                    break
                value = float(np.clip(best[name] + direction * steps[name], lo, hi))
                if value == best[name]:
                    continue
                trial = dict(best, **{name: value})
                score = objective(trial)
                evaluations += 1
                if score > best_value:
                    best, best_value, improved = trial, score, True
                    break
            if not improved:
                steps[name] *= _GOLDEN

    if not np.isfinite(best_value):
        raise ConfigError("no valid profile inside the optimization bounds")
    for name in free:
        if best[name] in bounds[name]:
            logger.warning("optimum on bound edge", parameter=name, value=best[name])
    logger.info("resonance optimized", family=family, nu=best_value, evaluations=evaluations)
    return ResonanceOptimum(params=best, nu=best_value, evaluations=evaluations)
