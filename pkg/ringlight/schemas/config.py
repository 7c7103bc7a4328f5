"""
Pydantic schemas for run configuration and command requests.
"""

import math
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ringlight.services.gaussian import (
    BathParams, GaussianState, thermal_state, two_mode_squeezed_state,
)
from ringlight.services.modulation import ModulationProfile, build_profile
from ringlight.services.observables import scenario_occupation


class BaseSection(BaseModel):
    """Base schema for config sections; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid")


class ModulationSection(BaseSection):
    """Modulation profile: kind plus the parameters that kind accepts."""

    kind: Literal["rectangular", "sinusoidal", "sampled"] = Field(
        default="sinusoidal", description="Profile shape"
    )
    f1: Optional[float] = Field(None, description="Rectangular frequency on [0, t1)")
    f2: Optional[float] = Field(None, description="Rectangular frequency on [t1, T)")
    t1: Optional[float] = Field(None, description="Duration of the f1 segment")
    t2: Optional[float] = Field(None, description="Duration of the f2 segment")
    f_r: Optional[float] = Field(None, description="Frequency ratio f2/f1 for tuned profiles")
    phase: Optional[float] = Field(None, description="t1*f1 = t2*f2 for tuned profiles")
    f0: Optional[float] = Field(None, description="Unmodulated sinusoidal frequency")
    h: Optional[float] = Field(None, description="Relative permittivity modulation amplitude")
    omega: Optional[float] = Field(None, description="Sinusoidal drive frequency")
    period: Optional[float] = Field(None, description="Modulation period T")
    samples: Optional[List[float]] = Field(None, description="Sampled f over one period")

    def build(self) -> ModulationProfile:
        return build_profile(self.kind, **self.model_dump(exclude={"kind"}))


class BathSection(BaseSection):
    """Bath rate and occupation, given directly or through the ring scenario."""

    gamma: float = Field(default=0.0, ge=0, description="Collective coupling rate")
    nbar: Optional[float] = Field(None, ge=0, description="Bath occupation")
    radius: Optional[float] = Field(None, gt=0, description="Ring radius in metres")
    index: Optional[float] = Field(None, gt=0, description="Refractive index")
    temperature: Optional[float] = Field(None, gt=0, description="Bath temperature in kelvin")

    @model_validator(mode="after")
    def check_occupation_source(self):
        scenario = [self.radius, self.index, self.temperature]
        has_scenario = any(v is not None for v in scenario)
        if has_scenario and any(v is None for v in scenario):
            raise ValueError("radius, index and temperature must be given together")
        if (self.nbar is None) == (not has_scenario):
            raise ValueError("give exactly one of nbar or (radius, index, temperature)")
        return self

    def occupation(self) -> float:
        if self.nbar is not None:
            return self.nbar
        return scenario_occupation(self.radius, self.index, self.temperature)

    def to_params(self) -> BathParams:
        return BathParams(gamma=self.gamma, nbar=self.occupation())


class InitialSection(BaseSection):
    """Initial state: thermal (defaults to the bath occupation) or squeezed vacuum."""

    kind: Literal["thermal", "squeezed"] = "thermal"
    nbar: Optional[float] = Field(None, ge=0, description="Thermal occupation")
    r: float = Field(default=0.0, description="Two-mode squeezing parameter")

    def build(self, bath_nbar: float) -> GaussianState:
        if self.kind == "squeezed":
            return two_mode_squeezed_state(self.r)
        return thermal_state(bath_nbar if self.nbar is None else self.nbar)


class RunSection(BaseSection):
    n_periods: float = Field(default=10.0, gt=0, description="Horizon in periods")
    samples_per_period: int = Field(default=20, ge=1)
    dt_max: Optional[float] = Field(None, gt=0, description="Largest integrator step")
    method: Literal["moments", "propagator"] = Field(
        default="moments", description="Direct moment integration or propagator solution"
    )


class OutputSection(BaseSection):
    path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"


class RunConfig(BaseSection):
    """Everything one simulate run needs."""

    modulation: ModulationSection = Field(default_factory=ModulationSection)
    bath: BathSection = Field(default_factory=lambda: BathSection(nbar=0.0))
    initial: InitialSection = Field(default_factory=InitialSection)
    run: RunSection = Field(default_factory=RunSection)
    output: OutputSection = Field(default_factory=OutputSection)


class AxisRange(BaseSection):
    """num evenly spaced values from start to stop inclusive."""

    start: float
    stop: float
    num: int = Field(default=11, ge=1)

    @classmethod
    def parse(cls, text: str) -> "AxisRange":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) not in (2, 3):
            raise ValueError(f"expected 'start, stop[, num]', got {text!r}")
        values = {"start": parts[0], "stop": parts[1]}
        if len(parts) == 3:
            values["num"] = parts[2]
        return cls(**values)

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)


class ChartRequest(BaseSection):
    family: Literal["rectangular", "sinusoidal"] = "sinusoidal"
    axis1: AxisRange
    axis2: AxisRange
    f0: float = Field(default=math.pi, gt=0)
    period: float = Field(default=1.0, gt=0)
    block: Literal["+", "-"] = "-"


class OptimizeRequest(BaseSection):
    family: Literal["rectangular", "sinusoidal"] = "sinusoidal"
    bounds: Dict[str, Tuple[float, float]]
    fixed: Dict[str, float] = Field(default_factory=dict)
    budget: int = Field(default=200, ge=1)
    grid_points: int = Field(default=11, ge=2)

    @field_validator("bounds")
    @classmethod
    def validate_bounds(cls, v):
        if not v:
            raise ValueError("at least one bound is required")
        for name, (lo, hi) in v.items():
            if lo > hi:
                raise ValueError(f"lower bound of {name} exceeds upper bound")
        return v

    @model_validator(mode="after")
    def check_overlap(self):
        shared = set(self.bounds) & set(self.fixed)
        if shared:
            raise ValueError(f"parameters both bounded and fixed: {sorted(shared)}")
        return self
