"""
Simulation service: run a configured trajectory and tabulate its observables.
"""

from typing import Any, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from ringlight.core.exceptions import DomainError
from ringlight.core.logging import get_logger
from ringlight.core.parallel import ordered_map
from ringlight.schemas.config import RunConfig
from ringlight.services.dynamics import (
    SimulationResult, integrate_moments, sample_grid, thermal_covariance_solution,
)
from ringlight.services.observables import (
    ClosedFormParams, closed_form_params_for, logneg_closed, photon_number_closed,
)

logger = get_logger(__name__)

SIMULATION_COLUMNS = ("t", "N_total", "E_N", "E_max", "purity", "E_N_over_E_max",
                      "N_closed", "EN_closed")


def run_simulation(config: RunConfig, threads: Optional[int] = None) -> SimulationResult:
    """Integrate the configured run and return the sampled trajectory."""
    profile = config.modulation.build()
    bath = config.bath.to_params()
    state0 = config.initial.build(bath.nbar)
    t_end = config.run.n_periods * profile.period
    logger.info("simulation started", kind=profile.kind, gamma=bath.gamma, nbar=bath.nbar,
                t_end=t_end, method=config.run.method)

    if config.run.method == "moments":
        dt_max = np.inf if config.run.dt_max is None else config.run.dt_max
        return integrate_moments(state0, profile, bath, t_end, dt_max=dt_max,
                                 samples_per_period=config.run.samples_per_period)

    times = sample_grid(profile.period, t_end, config.run.samples_per_period)
    states = ordered_map(lambda t: thermal_covariance_solution(state0, profile, bath, t),
                         times, threads=threads)
    return SimulationResult.from_states(times, states)


def _closed_form_inputs(config: RunConfig) -> Optional[ClosedFormParams]:
    """Closed forms apply to a thermal start at the bath occupation inside a tongue."""
    initial = config.initial
    bath_nbar = config.bath.occupation()
    if initial.kind != "thermal" or (initial.nbar is not None and initial.nbar != bath_nbar):
        return None
    try:
        return closed_form_params_for(config.modulation.build(), config.bath.to_params())
    except DomainError as exc:
        logger.info("closed-form columns left empty", reason=str(exc))
        return None


def simulation_table(config: RunConfig,
                     threads: Optional[int] = None) -> Tuple[pd.DataFrame, Dict[str, Any]]:
    """
    Time series with columns t, N_total, E_N, E_max, purity, E_N_over_E_max,
    N_closed and EN_closed.

    The closed-form columns are filled only at t = n T and only when the
    closed forms apply; elsewhere they are NaN.
    """
    result = run_simulation(config, threads=threads)
    period = config.modulation.build().period
    n_closed = np.full(result.times.size, np.nan)
    en_closed = np.full(result.times.size, np.nan)
    params = _closed_form_inputs(config)
    if params is not None:
        for i in result.stroboscopic_indices(period):
            n = int(round(result.times[i] / period))
            n_closed[i] = photon_number_closed(params, n) - 1.0
            en_closed[i] = logneg_closed(params, n)

    frame = pd.DataFrame({
        "t": result.times,
        "N_total": result.photon_number,
        "E_N": result.log_negativity,
        "E_max": result.max_entanglement,
        "purity": result.purity,
        "E_N_over_E_max": result.entanglement_ratio,
        "N_closed": n_closed,
        "EN_closed": en_closed,
    }, columns=list(SIMULATION_COLUMNS))
    parameters = config.model_dump(exclude={"output"})
    if params is not None:
        parameters["nu"] = params.nu
    return frame, parameters
