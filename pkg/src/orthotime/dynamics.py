"""Survival amplitude and first orthogonalization time."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._numerics import golden_section
from .config import DEFAULT_TOLERANCES, Tolerances
from .exceptions import ZeroDispersion
from .spectral_state import SpectralState, moments

__all__ = [
    "Status",
    "OrthogonalizationResult",
    "survival_amplitude",
    "cos_sin_averages",
    "orthogonalization_time",
]

_CHUNK = 1 << 16


class Status(str, enum.Enum):
    FOUND = "Found"
    NOT_FOUND = "NotFoundWithinHorizon"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class OrthogonalizationResult:
    """Outcome of the orthogonalization search.

    ``t0`` and ``residual`` are set only when ``status`` is ``FOUND``;
    ``min_abs_survival``/``argmin_time`` always record where ``|S|`` came
    closest to zero (at ``t0`` itself when found).
    """

    status: Status
    t0: float | None
    min_abs_survival: float
    argmin_time: float
    horizon: float
    residual: float | None
    refine_width: float

    @property
    def found(self) -> bool:
        return self.status is Status.FOUND


def survival_amplitude(state: SpectralState, t):
    """``<psi(0)|psi(t)> = sum_n p_n exp(-i E_n t / hbar)``.

    Accepts a scalar or an array of times; returns a complex scalar or an
    array of the same shape.
    """
    t_arr = np.asarray(t, dtype=np.float64)
    out = _amplitude(state.energies, state.probabilities, state.hbar, t_arr.ravel())
    if t_arr.ndim == 0:
        return complex(out[0])
    return out.reshape(t_arr.shape)


def cos_sin_averages(state: SpectralState, t: float) -> tuple[float, float]:
    """``(<cos(Ht/hbar)>, <sin(Ht/hbar)>)``, i.e. ``(Re S(t), -Im S(t))``."""
    phase = state.energies * (float(t) / state.hbar)
    p = state.probabilities
    return float(np.dot(p, np.cos(phase))), float(np.dot(p, np.sin(phase)))


def _amplitude(energies, probs, hbar, t: np.ndarray) -> np.ndarray:
    out = np.empty(t.size, dtype=np.complex128)
    omega = energies / hbar
    for start in range(0, t.size, _CHUNK):
        tt = t[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.exp(-1j * np.outer(tt, omega)) @ probs
    return out


class _CenteredAmplitude:
    """Survival amplitude of the state with its mean energy removed.

    ``|S|`` is unchanged by the shift while the phases stay small, which
    keeps the evaluation accurate over long horizons.
    """

    def __init__(self, energies, probs, hbar):
        mean = float(np.dot(probs, energies))
        self.omega = (energies - mean) / hbar
        self.probs = probs

    def values(self, t: np.ndarray) -> np.ndarray:
        return np.abs(_amplitude(self.omega, self.probs, 1.0, t))

    def abs_at(self, t: float) -> float:
        return abs(self.derivative(t, 0))

    def derivative(self, t: float, k: int) -> complex:
        w = self.omega
        return complex(np.dot(self.probs * (-1j * w) ** k, np.exp(-1j * w * t)))

    def derivative_scale(self, k: int) -> float:
        return float(np.dot(self.probs, np.abs(self.omega) ** k))


def _polish(amp: _CenteredAmplitude, t: float, lo: float, hi: float,
            max_order: int = 4, max_steps: int = 8) -> float:
    """Newton refinement of a near-zero of S that copes with multiple zeros.

    The multiplicity m is taken as the lowest derivative order that does
    not vanish at ``t``; Newton's method is then applied to the
    ``(m-1)``-th derivative, which has a simple zero there.
    """
    m = 1
    while m < max_order and abs(amp.derivative(t, m)) <= 1e-4 * amp.derivative_scale(m):
        m += 1
    x = t
    for _ in range(max_steps):
        d_hi = amp.derivative(x, m)
        if d_hi == 0:
            break
        step = (amp.derivative(x, m - 1) / d_hi).real
        x_new = min(max(x - step, lo), hi)
        if x_new == x:
            break
        x = x_new
    return x


def _refine(amp: _CenteredAmplitude, lo: float, hi: float, width: float) -> tuple[float, float]:
    t, v = golden_section(amp.abs_at, lo, hi, width)
    tp = _polish(amp, t, lo, hi)
    vp = amp.abs_at(tp)
    # accept the polished point unless it is clearly worse than the bracket result
    if vp <= v + 4 * np.finfo(float).eps:
        return float(tp), float(vp)
    return float(t), float(v)


_SUBDIVISION_DEPTH = 3
_SUBDIVISION_FACTOR = 16


def _runs(grid: np.ndarray, values: np.ndarray, reach: float):
    """Brackets around maximal runs of samples with ``|S| <= reach``, in time order."""
    below = values <= reach
    if not below.any():
        return
    n = grid.size - 1
    edges = np.diff(below.astype(np.int8))
    starts = list(np.nonzero(edges == 1)[0] + 1)
    ends = list(np.nonzero(edges == -1)[0])
    if below[0]:
        starts.insert(0, 0)
    if below[-1]:
        ends.append(n)
    for a, b in zip(starts, ends):
        yield float(grid[max(a - 1, 0)]), float(grid[min(b + 1, n)])


def _first_zero(amp: _CenteredAmplitude, lo: float, hi: float, step: float, eps: float,
                slope: float, width: float, depth: int):
    """Earliest point in ``[lo, hi]`` with ``|S| <= eps``, or ``None``.

    The bracket is resampled with a step ``_SUBDIVISION_FACTOR`` times finer
    than ``step`` and every sub-run that could hide a zero is searched in order, so two zeros sharing one coarse cell are
    told apart before the final golden-section refinement.
    """
    if depth > 0:
        k = max(int(math.ceil(_SUBDIVISION_FACTOR * (hi - lo) / step)), 2)
        sub = np.linspace(lo, hi, k + 1)
        vals = amp.values(sub)
        hs = sub[1] - sub[0]
        for a, b in _runs(sub, vals, math.hypot(eps, slope * hs)):
            hit = _first_zero(amp, a, b, hs, eps, slope, width, depth - 1)
            if hit is not None:
                return hit
    t, v = _refine(amp, lo, hi, width)
    if v <= eps and t > 0:
        return t, v
    return None


def orthogonalization_time(state: SpectralState, horizon: float | None = None,
                           eps_orth: float | None = None, oversample: int | None = None,
                           tolerances: Tolerances = DEFAULT_TOLERANCES) -> OrthogonalizationResult:
    """Earliest ``t0 > 0`` with ``|S(t0)| <= eps_orth``.

    ``|S|`` is sampled on a uniform grid whose step resolves the fastest
    frequency ``(E_max - E_min)/hbar`` ``oversample`` times over; runs of
    samples that could hide a zero are subdivided and refined by
    golden-section search in time order, and the first one reaching the
    threshold wins.

    The default horizon is ``tolerances.horizon_multiplier`` times the
    dispersion bound ``pi*hbar/(2*Delta E)``.

    Raises
    ------
    ZeroDispersion
        If all weight sits on one energy; such a state never orthogonalizes.
    """
    eps_orth = tolerances.eps_orth if eps_orth is None else float(eps_orth)
    oversample = tolerances.oversample if oversample is None else int(oversample)
    p = state.probabilities
    occ = p > 0
    energies, probs = state.energies[occ], p[occ]
    if energies.size < 2:
        raise ZeroDispersion("single occupied energy: the state is stationary (t0 = inf)")
    hbar = state.hbar
    delta_e = moments(state).delta_e
    if horizon is None:
        horizon = tolerances.horizon_multiplier * math.pi * hbar / (2.0 * delta_e)
    horizon = float(horizon)
    if not horizon > 0:
        raise ValueError(f"horizon must be > 0, got {horizon}")

    spread = float(energies[-1] - energies[0])
    step = 2.0 * math.pi * hbar / (spread * oversample)
    n = max(int(math.ceil(horizon / step)), 2)
    grid = np.linspace(0.0, horizon, n + 1)
    h = grid[1] - grid[0]
    amp = _CenteredAmplitude(energies, probs, hbar)
    values = amp.values(grid)
    width = tolerances.refine_rel_width * horizon

    # |S|^2 has second derivative bounded by 2 Var/hbar^2, so a grid point
    # within h of a zero satisfies |S| <= Delta E * h / hbar
    slope = 2.0 * delta_e / hbar
    for lo, hi in _runs(grid, values, math.hypot(eps_orth, slope * h)):
        hit = _first_zero(amp, lo, hi, h, eps_orth, slope, width, _SUBDIVISION_DEPTH)
        if hit is not None:
            t, v = hit
            return OrthogonalizationResult(Status.FOUND, t, v, t, horizon, v, width)

    i = int(np.argmin(values[1:])) + 1
    t, v = _refine(amp, float(grid[i - 1]), float(grid[min(i + 1, n)]), width)
    if v <= eps_orth and t > 0:
        return OrthogonalizationResult(Status.FOUND, t, v, t, horizon, v, width)
    return OrthogonalizationResult(Status.NOT_FOUND, None, v, t, horizon, None, width)
