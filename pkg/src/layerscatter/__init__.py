"""Layered-media scattering: forward and inverse maps between impedance and echoes."""

__version__ = "0.1.0"

from .errors import (ConfigError, DataInconsistencyError, DomainError, LayerScatterError,
                     NumericError, ResourceCapError, TruncationWarning)
from .forward import ReflectionSeries, forward_scatter, spectrum
from .harmonic import HarmonicConfig, harmonic_exponential, hyperbolic_tangent, singular_harmonic
from .inverse import invert_scatter, layer_strip, short_range_invert
from .media import ImpedanceProfile, Interval, StepMedium, standard_approximant
from .specfun import ap_series, scattering_polynomial

__all__ = [
    "ConfigError", "DataInconsistencyError", "DomainError", "LayerScatterError",
    "NumericError", "ResourceCapError", "TruncationWarning",
    "ReflectionSeries", "forward_scatter", "spectrum",
    "HarmonicConfig", "harmonic_exponential", "hyperbolic_tangent", "singular_harmonic",
    "invert_scatter", "layer_strip", "short_range_invert",
    "ImpedanceProfile", "Interval", "StepMedium", "standard_approximant",
    "ap_series", "scattering_polynomial",
]
