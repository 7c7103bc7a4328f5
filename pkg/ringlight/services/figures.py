"""
Data behind the photon-yield, occurrence-time and entanglement-ratio figures.

All three use the weak sinusoidal modulation h = 0.01 at its first resonance
with T = 1 (f0 = pi) and evaluate the closed forms at stroboscopic times.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional, Sequence

import numpy as np
import pandas as pd

from ringlight.core.exceptions import ConfigError
from ringlight.core.logging import get_logger
from ringlight.core.parallel import ordered_map
from ringlight.services.gaussian import BathParams, bath_occupation
from ringlight.services.modulation import SinusoidalModulation, resonant_sinusoidal
from ringlight.services.observables import (
    ClosedFormParams, closed_form_params_for, logneg_closed_at, occurrence_time,
    photon_number_closed_at,
)

logger = get_logger(__name__)

FIGURE_H = 0.01
FIGURE_PERIOD = 1.0

PHOTON_GAMMAS = (0.0, 0.02, 0.05, 0.1)
OCCURRENCE_GAMMAS = (0.0, 0.002, 0.004, 0.006)
RATIO_GAMMAS = (0.0, 0.02, 0.05)


@dataclass(frozen=True, eq=False)
class FigureData:
    """A long-format table plus the parameters that produced it."""
    name: str
    frame: pd.DataFrame
    parameters: Dict[str, Any] = field(default_factory=dict)


def figure_profile(h: float = FIGURE_H, period: float = FIGURE_PERIOD) -> SinusoidalModulation:
    """Sinusoidal modulation at its first resonance for the given period."""
    return resonant_sinusoidal(np.pi / period, h)


def _figure_params() -> ClosedFormParams:
    """Closed-form inputs at gamma = nbar = 0; nu does not depend on the bath."""
    return closed_form_params_for(figure_profile(), BathParams())


def photon_yield(n_periods: int = 2000, nbar: float = 1.0,
                 gammas: Sequence[float] = PHOTON_GAMMAS,
                 threads: Optional[int] = None) -> FigureData:
    """<N+1>/(2 nbar + 1) at t = n T for each gamma."""
    base = _figure_params()
    n = np.arange(n_periods + 1)

    def series(gamma: float) -> pd.DataFrame:
        params = replace(base, gamma=gamma, nbar=nbar)
        t = n * params.T
        return pd.DataFrame({
            "gamma": gamma,
            "t": t,
            "n_plus_one_normalized": photon_number_closed_at(params, t) / (2 * nbar + 1),
        })

    frame = pd.concat(ordered_map(series, list(gammas), threads=threads), ignore_index=True)
    return FigureData(
        name="photon_yield",
        frame=frame,
        parameters={"h": FIGURE_H, "period": FIGURE_PERIOD, "nbar": nbar,
                    "gammas": list(gammas), "n_periods": n_periods,
                    "normalization": "<N+1>/(2 nbar + 1)"},
    )


def occurrence_times(temperatures: Optional[Sequence[float]] = None,
                     gammas: Sequence[float] = OCCURRENCE_GAMMAS,
                     threads: Optional[int] = None) -> FigureData:
    """
    Time at which E_N first becomes positive against k_B T / (hbar w).

    The bath occupation at each temperature ratio x is 1/(exp(1/x) - 1).
    """
    ratios = (np.linspace(0.1, 10.0, 100) if temperatures is None
              else np.asarray(temperatures, dtype=float))
    base = _figure_params()
    cases = [(gamma, float(x)) for gamma in gammas for x in ratios]

    def evaluate(case) -> Dict[str, float]:
        gamma, x = case
        nbar = bath_occupation(1.0 / x)
        params = replace(base, gamma=gamma, nbar=nbar)
        return {"gamma": gamma, "temperature_ratio": x, "nbar": nbar,
                "occurrence_time": occurrence_time(params)}

    frame = pd.DataFrame(ordered_map(evaluate, cases, threads=threads))
    return FigureData(
        name="occurrence",
        frame=frame,
        parameters={"h": FIGURE_H, "period": FIGURE_PERIOD, "gammas": list(gammas),
                    "temperature_axis": "k_B T / (hbar w)",
                    "temperature_range": [float(ratios.min()), float(ratios.max())]},
    )


def entanglement_ratio(nu_t_max: float = 30.0, points: int = 301, nbar: float = 1.0,
                       gammas: Sequence[float] = RATIO_GAMMAS,
                       threads: Optional[int] = None) -> FigureData:
    """E_N / E_max with E_max = log2 <N+1>, sampled at t = n T up to nu t = nu_t_max."""
    base = _figure_params()

    def series(gamma: float) -> pd.DataFrame:
        params = replace(base, gamma=gamma, nbar=nbar)
        n_max = int(np.ceil(nu_t_max / (params.nu * params.T)))
        n = np.unique(np.round(np.linspace(0, n_max, points)).astype(int))
        t = n * params.T
        e_n = np.asarray(logneg_closed_at(params, t))
        e_max = np.log2(np.asarray(photon_number_closed_at(params, t)))
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(e_max > 0, e_n / e_max, 0.0)
        return pd.DataFrame({"gamma": gamma, "t": t, "nu_t": params.nu * t,
                             "e_n": e_n, "e_max": e_max, "ratio": ratio})

    frame = pd.concat(ordered_map(series, list(gammas), threads=threads), ignore_index=True)
    return FigureData(
        name="entanglement_ratio",
        frame=frame,
        parameters={"h": FIGURE_H, "period": FIGURE_PERIOD, "nbar": nbar,
                    "gammas": list(gammas), "nu_t_max": nu_t_max,
                    "e_max": "log2 <N+1>"},
    )


FIGURES: Dict[str, Callable[..., FigureData]] = {
    "photon_yield": photon_yield,
    "occurrence": occurrence_times,
    "entanglement_ratio": entanglement_ratio,
}

# Numbered names accepted alongside the descriptive ones.
FIGURE_ALIASES: Dict[str, str] = {
    "fig2": "photon_yield",
    "fig3": "occurrence",
    "fig4": "entanglement_ratio",
}


def figure_name(which: str) -> str:
    """Canonical preset name for a descriptive or numbered figure name."""
    name = FIGURE_ALIASES.get(which, which)
    if name not in FIGURES:
        raise ConfigError(
            f"Unknown figure: {which}; expected one of {sorted(FIGURES) + sorted(FIGURE_ALIASES)}"
        )
    return name


def build_figure(which: str, threads: Optional[int] = None) -> FigureData:
    """Build one of the registered figure tables by name or alias."""
    name = figure_name(which)
    data = FIGURES[name](threads=threads)
    logger.info("figure data built", figure=name, rows=len(data.frame))
    return data
