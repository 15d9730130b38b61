"""Simulation and semimartingale criteria for infinitely divisible moving averages."""
from . import counterexamples, criteria, kernels, levy_measure, path_stats, series_sim
from .criteria import CriteriaReport, verdict
from .kernels import Box, Custom, ExponentialOU, Fractional, Step
from .levy_measure import (
    CompoundPoisson,
    DensityMarks,
    DiscreteMarks,
    RandomMeasureSpec,
    SequenceMarks,
    SymmetricStable,
    SymmetricTemperedStable,
    TabulatedDensity,
)
from .series_sim import SeriesConfig

__version__ = "0.1.0"
