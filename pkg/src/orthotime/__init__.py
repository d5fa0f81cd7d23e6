"""Orthogonalization times, quantum speed limits and cosine-minorant certificates."""

from importlib import resources

from .bounds import (INFINITE, alpha_sweep, excluded_interval, gamma, mean_gamma,
                     ml_bound, mt_bound, omega_window, quadratic_constraint,
                     saturation_check, union_excluded, verify_quadratic_minorant)
from .config import DEFAULT_TOLERANCES, Tolerances
from .dynamics import (OrthogonalizationResult, Status, cos_sin_averages,
                       orthogonalization_time, survival_amplitude)
from .estimator import SpeedLimitEstimator
from .intervals import IntervalSet, OpenInterval
from .minorant_search import (Domain, Family, MinorantCandidate, MinorantCertificate,
                              bound_from_certificate, certify, optimize_family)
from .spectral_state import (DiscreteSpectralState, Moments, QuadratureSpectralState,
                             construct_intelligent, moments, normalize, shift_energy,
                             uniform_density)

__version__ = "0.1.0"


def example_path(name: str):
    """Path of a bundled example state file, e.g. ``example_path("intelligent.json")``."""
    return resources.files(__name__).joinpath("data", name)


__all__ = [
    "DEFAULT_TOLERANCES", "Tolerances", "INFINITE",
    "DiscreteSpectralState", "QuadratureSpectralState", "Moments",
    "normalize", "moments", "shift_energy", "construct_intelligent", "uniform_density",
    "survival_amplitude", "cos_sin_averages", "orthogonalization_time",
    "OrthogonalizationResult", "Status",
    "mt_bound", "ml_bound", "gamma", "verify_quadratic_minorant", "quadratic_constraint",
    "excluded_interval", "omega_window", "alpha_sweep", "union_excluded", "mean_gamma",
    "saturation_check",
    "OpenInterval", "IntervalSet",
    "Family", "Domain", "MinorantCandidate", "MinorantCertificate", "certify",
    "bound_from_certificate", "optimize_family",
    "SpeedLimitEstimator", "example_path",
]
