"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""

from __future__ import annotations

import math
from numbers import Real

import numpy as np

from .exceptions import ValidationError


def check_hbar(hbar) -> float:
    if isinstance(hbar, bool) or not isinstance(hbar, Real):
        raise ValidationError(f"hbar must be a real number, got {hbar!r}")
    hbar = float(hbar)
    if not math.isfinite(hbar) or hbar <= 0:
        raise ValidationError(f"hbar must be finite and > 0, got {hbar}")
    return hbar


def check_energies(energies) -> np.ndarray:
    """Return a 1-d float64 copy of ``energies``; non-empty and finite."""
    try:
        e = np.asarray(energies, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"energies are not numeric: {exc}") from exc
    if e.ndim == 0:
        e = e.reshape(1)
    if e.ndim != 1:
        raise ValidationError(f"energies must be 1-d, got shape {e.shape}")
    if e.size == 0:
        raise ValidationError("a spectral state needs at least one level")
    if not np.all(np.isfinite(e)):
        raise ValidationError("all energies must be finite")
    return e.copy()


def check_amplitudes(amplitudes, n: int) -> np.ndarray:
    try:
        c = np.asarray(amplitudes, dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"amplitudes are not numeric: {exc}") from exc
    if c.ndim == 0:
        c = c.reshape(1)
    if c.shape != (n,):
        raise ValidationError(f"expected {n} amplitudes, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValidationError("all amplitudes must be finite")
    return c.copy()


def check_weights(weights, n: int) -> np.ndarray:
    try:
        w = np.asarray(weights, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"weights are not numeric: {exc}") from exc
    if w.ndim == 0:
        w = w.reshape(1)
    if w.shape != (n,):
        raise ValidationError(f"expected {n} weights, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise ValidationError("all weights must be finite")
    if np.any(w < 0):
        raise ValidationError("quadrature weights must be non-negative")
    return w.copy()


def check_positive_int(value, name: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValidationError(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise ValidationError(f"{name} must be >= {minimum}, got {value}")
    return int(value)


def frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a
