"""Instance configuration: TOML files validated into typed models.

Unknown keys are errors.  Every output file starts with a ``# config:``
line holding the validated configuration as JSON, which parses back to an
equal configuration.
"""
from __future__ import annotations

import json
import math
import sys
from typing import List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import kernels as kn
from . import levy_measure as lm
from .errors import ConfigError
from .series_sim import SeriesConfig

ECHO_PREFIX = "# config: "


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class DriverConfig(_Strict):
    family: Literal["stable", "tempered_stable", "compound_poisson", "tabulated"]
    alpha: Optional[float] = None
    lam: Optional[float] = None
    c: float = 1.0
    atoms: Optional[List[Tuple[float, float]]] = None
    xs: Optional[List[float]] = None
    densities: Optional[List[float]] = None
    origin_exponent: Optional[float] = None
    tail_exponent: Optional[float] = None
    drift: float = 0.0
    gaussian_var: float = Field(0.0, ge=0.0)

    @model_validator(mode="after")
    def _fields_for_family(self):
        need = {
            "stable": ("alpha",),
            "tempered_stable": ("alpha", "lam"),
            "compound_poisson": ("atoms",),
            "tabulated": ("xs", "densities"),
        }[self.family]
        for name in need:
            if getattr(self, name) is None:
                raise ValueError(f"driver.{name} is required for family {self.family!r}")
        return self


class KernelConfig(_Strict):
    family: Literal["fractional", "ou", "step", "box"]
    gamma: Optional[float] = None
    width: float = 1.0
    f0_mode: Optional[Literal["same_as_f", "zero"]] = None

    @model_validator(mode="after")
    def _gamma_for_fractional(self):
        if self.family == "fractional" and self.gamma is None:
            raise ValueError("kernel.gamma is required for the fractional kernel")
        return self


class MarksConfig(_Strict):
    type: Literal["discrete", "power"] = "discrete"
    points: List[float] = [0.0]
    weights: List[float] = [1.0]
    lo: Optional[float] = None
    hi: Optional[float] = None
    exponent: Optional[float] = None
    scale: float = 1.0

    @model_validator(mode="after")
    def _shape(self):
        if self.type == "discrete" and len(self.points) != len(self.weights):
            raise ValueError("marks.points and marks.weights must have equal length")
        if self.type == "power" and None in (self.lo, self.hi, self.exponent):
            raise ValueError("power marks need marks.lo, marks.hi and marks.exponent")
        return self


class SimulationConfig(_Strict):
    horizon: float = Field(1.0, gt=0)
    window: float = Field(1.0, gt=0)
    n_terms: int = Field(10000, ge=1)
    n_grid: int = Field(1001, ge=2)
    seed: int = Field(0, ge=0, lt=2**64)
    paths: int = Field(1, ge=1)
    symmetric: bool = True
    centering: bool = False
    n_centering: int = Field(0, ge=0)


class AnalysisConfig(_Strict):
    levels: int = Field(4, ge=1)
    k_jumps: int = Field(20, ge=1)
    intervals: List[Tuple[float, float]] = [(0.0, 0.5), (0.5, 1.0)]


class SweepConfig(_Strict):
    alpha: List[float] = []
    gamma: List[float] = []
    lam: List[float] = []


class InstanceConfig(_Strict):
    process: str = "instance"
    driver: DriverConfig
    kernel: KernelConfig
    marks: MarksConfig = MarksConfig()
    simulation: SimulationConfig = SimulationConfig()
    analysis: AnalysisConfig = AnalysisConfig()
    sweep: Optional[SweepConfig] = None

    @model_validator(mode="after")
    def _exponents_consistent(self):
        d = self.driver
        if d.family in ("stable", "tempered_stable"):
            expected = {"origin_exponent": -d.alpha - 1.0,
                        "tail_exponent": -d.alpha if d.family == "stable" else -math.inf}
            for name, want in expected.items():
                got = getattr(d, name)
                if got is not None and not (got == want or abs(got - want) <= 1e-12):
                    raise ValueError(f"driver.{name}={got} contradicts the {d.family} family ({want})")
        return self

    def echo(self):
        return ECHO_PREFIX + json.dumps(self.model_dump(mode="json"), sort_keys=True, allow_nan=True)


def _format_errors(exc):
    parts = []
    for err in exc.errors():
        loc = ".".join(str(x) for x in err["loc"]) or "config"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def parse_dict(data):
    try:
        return InstanceConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(_format_errors(exc)) from None


def parse_text(text):
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"TOML syntax: {exc}") from None
    return parse_dict(data)


def load(path):
    """Read and validate a TOML config; OSError propagates for I/O failures."""
    with open(path, "rb") as fh:
        raw = fh.read()
    return parse_text(raw.decode("utf-8"))


def parse_echo(line):
    """Inverse of :meth:`InstanceConfig.echo`."""
    if not line.startswith(ECHO_PREFIX):
        raise ConfigError("not a config echo line")
    return parse_dict(json.loads(line[len(ECHO_PREFIX):]))


# ---------------------------------------------------------------------------
# building library objects
# ---------------------------------------------------------------------------


def build_levy(d: DriverConfig, alpha=None, lam=None):
    alpha = d.alpha if alpha is None else alpha
    lam = d.lam if lam is None else lam
    if d.family == "stable":
        return lm.SymmetricStable(alpha, d.c)
    if d.family == "tempered_stable":
        return lm.SymmetricTemperedStable(alpha, lam, d.c)
    if d.family == "compound_poisson":
        return lm.CompoundPoisson(tuple(tuple(a) for a in d.atoms))
    return lm.TabulatedDensity(tuple(d.xs), tuple(d.densities), d.origin_exponent, d.tail_exponent)


def build_marks(m: MarksConfig):
    if m.type == "discrete":
        return lm.DiscreteMarks(tuple(m.points), tuple(m.weights))
    return lm.power_marks(m.lo, m.hi, m.exponent, m.scale)


def build_kernel(k: KernelConfig, gamma=None):
    extra = {} if k.f0_mode is None else {"f0_mode": k.f0_mode}
    if k.family == "fractional":
        return kn.Fractional(k.gamma if gamma is None else gamma, **extra)
    if k.family == "ou":
        return kn.ExponentialOU(**extra)
    if k.family == "step":
        return kn.Step(**extra)
    return kn.Box(k.width, **extra)


def build_spec(cfg: InstanceConfig, alpha=None, lam=None):
    d = cfg.driver
    return lm.RandomMeasureSpec(build_marks(cfg.marks), build_levy(d, alpha, lam), d.drift, d.gaussian_var)


def build_series(cfg: InstanceConfig, seed=None, n_grid=None):
    s = cfg.simulation
    return SeriesConfig.uniform(
        s.horizon, max(s.window, s.horizon), s.n_terms, n_grid or s.n_grid,
        s.seed if seed is None else seed,
        symmetric=s.symmetric, centering=s.centering, n_centering=s.n_centering,
    )


def with_overrides(cfg: InstanceConfig, **sim):
    """Copy with simulation fields replaced (None values ignored)."""
    sim = {k: v for k, v in sim.items() if v is not None}
    if not sim:
        return cfg
    data = cfg.model_dump()
    data["simulation"].update(sim)
    return parse_dict(data)


def grid_times(cfg: InstanceConfig):
    return np.asarray(build_series(cfg).grid)
