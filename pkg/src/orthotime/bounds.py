"""Speed-limit bounds and the quadratic cosine-minorant argument behind them.

The dispersion bound ``t0 >= pi*hbar/(2*Delta E)`` follows from the
inequality ``gamma_alpha(x) = (x+alpha)^2 - pi^2/4 + pi*cos(x+alpha) >= 0``.
Averaging it over the energy distribution at an orthogonalization time
kills the cosine term and leaves a quadratic constraint on ``t0``; each
phase ``alpha`` forbids an open interval of times, and the union of
these intervals over the admissible phases is exactly
``(-pi*hbar/(2*Delta E), pi*hbar/(2*Delta E))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._numerics import golden_section, local_minima
from .config import DEFAULT_TOLERANCES, Tolerances
from .dynamics import OrthogonalizationResult, orthogonalization_time
from .exceptions import (DegenerateSpectrum, MinorantViolation, MissingLowerBound,
                         ValidationError, ZeroDispersion)
from .intervals import IntervalSet, OpenInterval
from .spectral_state import DiscreteSpectralState, Moments, SpectralState, moments

__all__ = [
    "INFINITE",
    "mt_bound",
    "ml_bound",
    "gamma",
    "MinorantCheck",
    "verify_quadratic_minorant",
    "QuadraticConstraint",
    "quadratic_constraint",
    "excluded_interval",
    "omega_window",
    "AlphaSweep",
    "alpha_sweep",
    "union_excluded",
    "mean_gamma",
    "SaturationReport",
    "saturation_check",
]

#: bound value for states that never leave their initial ray
INFINITE = math.inf

_PI = math.pi
_QUARTER_PI_SQ = _PI * _PI / 4.0
_DISC_ROUNDING = 16 * np.finfo(float).eps


def mt_bound(m: Moments, hbar: float) -> float:
    """Mandelstam-Tamm bound ``pi*hbar/(2*Delta E)``; ``INFINITE`` if ``Delta E = 0``."""
    if m.variance == 0:
        return INFINITE
    return _PI * hbar / (2.0 * m.delta_e)


def ml_bound(m: Moments, hbar: float) -> float:
    """Margolus-Levitin bound ``pi*hbar/(2*(<H> - E0))``.

    Needs ``m.min_energy``; returns ``INFINITE`` for the ground eigenstate.
    """
    if m.min_energy is None:
        raise MissingLowerBound("the ML bound needs a spectrum bounded below")
    gap = m.mean - m.min_energy
    if gap <= 0:
        return INFINITE
    return _PI * hbar / (2.0 * gap)


def gamma(alpha, x):
    """``(x+alpha)^2 - pi^2/4 + pi*cos(x+alpha)``; vectorized over both arguments."""
    u = np.add(x, alpha)
    out = u * u - _QUARTER_PI_SQ + _PI * np.cos(u)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class MinorantCheck:
    alpha: float
    min_value: float
    argmins: tuple[float, ...]
    grid_span: float
    grid_points: int
    tail_certified: bool
    #: lower bound of gamma on |x+alpha| >= pi, i.e. 3*pi^2/4 - pi
    tail_margin: float = field(default=3 * _QUARTER_PI_SQ - _PI)


def verify_quadratic_minorant(alpha: float, grid_span: float = 4 * _PI,
                              grid_points: int = 100_000,
                              tolerances: Tolerances = DEFAULT_TOLERANCES) -> MinorantCheck:
    """Numerically certify ``gamma_alpha(x) >= 0`` on the whole real line.

    The window ``|x + alpha| <= grid_span`` is scanned on a uniform grid and
    every grid local minimum is refined by golden-section search. Beyond
    ``|x+alpha| = pi`` no scan is needed: there ``(x+alpha)^2 - pi^2/4 >=
    3*pi^2/4 > pi >= -pi*cos(x+alpha)``.

    Raises
    ------
    MinorantViolation
        If the certified minimum is below ``-tolerances.minorant_violation``.
    """
    if grid_span < 2 * _PI:
        raise ValidationError(f"grid_span must be >= 2*pi, got {grid_span}")
    if grid_points < 10_000:
        raise ValidationError(f"grid_points must be >= 1e4, got {grid_points}")
    alpha = float(alpha)
    x = np.linspace(-alpha - grid_span, -alpha + grid_span, int(grid_points))
    g = gamma(alpha, x)
    refined = []
    for i in local_minima(g):
        xm, gm = golden_section(lambda s: gamma(alpha, s), float(x[i - 1]), float(x[i + 1]),
                                width=1e-12 * max(1.0, abs(alpha)))
        refined.append((xm, gm))
    min_value = min([float(g.min())] + [v for _, v in refined])
    argmins = tuple(sorted(xm for xm, v in refined if v <= min_value + tolerances.minorant_violation))
    tail_certified = grid_span >= _PI and 3 * _QUARTER_PI_SQ - _PI > 0
    if min_value < -tolerances.minorant_violation:
        raise MinorantViolation(f"gamma_{alpha} dips to {min_value}")
    return MinorantCheck(alpha, min_value, argmins, float(grid_span), int(grid_points),
                         tail_certified)


@dataclass(frozen=True)
class QuadraticConstraint:
    """``a2*t^2 + a1*t + a0 >= 0``, satisfied by every orthogonalization time."""

    a2: float
    a1: float
    a0: float

    def __call__(self, t):
        return (self.a2 * t + self.a1) * t + self.a0

    @property
    def discriminant(self) -> float:
        return self.a1 * self.a1 - 4.0 * self.a2 * self.a0


def _check_second(m: Moments):
    if not m.second > 0:
        raise DegenerateSpectrum("<H^2> = 0: all weight at E = 0, the constraint degenerates")


def quadratic_constraint(m: Moments, alpha: float, hbar: float) -> QuadraticConstraint:
    _check_second(m)
    return QuadraticConstraint(a2=m.second / hbar ** 2,
                               a1=2.0 * alpha * m.mean / hbar,
                               a0=alpha * alpha - _QUARTER_PI_SQ)


def _excluded_endpoints(m: Moments, alpha, hbar: float):
    alpha = np.asarray(alpha, dtype=np.float64)
    scale_disc = _PI * _PI * m.second
    disc = scale_disc - 4.0 * alpha * alpha * m.variance
    # at the window edge the two terms cancel; what is left is rounding
    disc = np.where(disc <= _DISC_ROUNDING * scale_disc, 0.0, disc)
    root = np.sqrt(disc)
    centre = -2.0 * alpha * m.mean
    scale = hbar / (2.0 * m.second)
    lo = scale * (centre - root)
    hi = scale * (centre + root)
    empty = (disc <= 0) | ~(lo < hi)
    return lo, hi, empty


def excluded_interval(m: Moments, alpha: float, hbar: float) -> OpenInterval | None:
    """Open interval of times forbidden by the constraint at phase ``alpha``.

    Returns ``None`` when the interval is empty, including the degenerate
    single point at zero discriminant.
    """
    _check_second(m)
    lo, hi, empty = _excluded_endpoints(m, float(alpha), hbar)
    if empty:
        return None
    return OpenInterval(float(lo), float(hi))


def omega_window(m: Moments) -> OpenInterval:
    """Phases ``alpha`` whose excluded interval is non-empty."""
    if m.variance == 0:
        raise ZeroDispersion("Delta E = 0: the phase window is unbounded")
    half = _PI * math.sqrt(m.second) / (2.0 * m.delta_e)
    return OpenInterval(-half, half)


@dataclass(frozen=True)
class AlphaSweep:
    """Excluded intervals for a uniform grid of phases across the window."""

    alphas: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    empty: np.ndarray

    def union(self) -> IntervalSet:
        keep = ~self.empty
        return IntervalSet.from_endpoints(self.lo[keep], self.hi[keep])


def alpha_sweep(m: Moments, hbar: float, n_alpha: int,
                tolerances: Tolerances = DEFAULT_TOLERANCES) -> AlphaSweep:
    """Evaluate the excluded interval at ``n_alpha`` phases spread over the window.

    The sweep is symmetric about zero and trims ``tolerances.omega_margin``
    of the window width at each end.
    """
    if n_alpha < 2:
        raise ValidationError(f"n_alpha must be >= 2, got {n_alpha}")
    _check_second(m)
    window = omega_window(m)
    margin = tolerances.omega_margin * window.width
    alphas = np.linspace(window.lo + margin, window.hi - margin, int(n_alpha))
    lo, hi, empty = _excluded_endpoints(m, alphas, hbar)
    return AlphaSweep(alphas, lo, hi, empty)


def union_excluded(m: Moments, hbar: float, n_alpha_samples: int | None = None,
                   tolerances: Tolerances = DEFAULT_TOLERANCES) -> IntervalSet:
    """Union of the excluded intervals over the phase window.

    Converges to ``(-pi*hbar/(2*Delta E), pi*hbar/(2*Delta E))`` as the
    number of sampled phases grows.
    """
    n = tolerances.n_alpha if n_alpha_samples is None else int(n_alpha_samples)
    if n < 1000:
        raise ValidationError(f"n_alpha_samples must be >= 1000, got {n}")
    return alpha_sweep(m, hbar, n, tolerances).union()


def mean_gamma(state: SpectralState, t: float, alpha: float) -> float:
    """``<gamma_alpha(H t / hbar)>`` over the state's energy distribution."""
    x = state.energies * (float(t) / state.hbar)
    return float(np.dot(state.probabilities, gamma(alpha, x)))


@dataclass(frozen=True)
class SaturationReport:
    is_intelligent: bool
    n_occupied: int
    probabilities: tuple[float, ...]
    energies: tuple[float, ...]
    mean: float
    delta_e: float
    mt_bound: float
    orthogonalization: OrthogonalizationResult
    #: |t0 - mt_bound| <= tolerance; False when the state never orthogonalized
    t0_matches_mt: bool
    reasons: tuple[str, ...] = ()


def saturation_check(state: DiscreteSpectralState, hbar: float | None = None,
                     tolerances: Tolerances = DEFAULT_TOLERANCES) -> SaturationReport:
    """Decide whether ``state`` saturates the dispersion bound.

    The state qualifies when exactly two levels are occupied, each with
    probability 1/2, at ``<H> -/+ Delta E``. The orthogonalization time is
    measured either way and compared to the bound.
    """
    hbar = state.hbar if hbar is None else float(hbar)
    m = moments(state)
    if m.variance == 0:
        raise ZeroDispersion("saturation needs Delta E > 0")
    p = state.probabilities
    occ = p > 0
    e_occ, p_occ = state.energies[occ], p[occ]
    tol = tolerances.saturation
    reasons = []
    if e_occ.size != 2:
        reasons.append(f"{e_occ.size} occupied levels, need exactly 2")
    else:
        if np.any(np.abs(p_occ - 0.5) > tol):
            reasons.append("probabilities differ from 1/2")
        target = np.array([m.mean - m.delta_e, m.mean + m.delta_e])
        if np.any(np.abs(e_occ - target) > tol):
            reasons.append("energies are not <H> -/+ Delta E")
    bound = mt_bound(m, hbar)
    if hbar != state.hbar:
        state = DiscreteSpectralState(hbar, state.energies, state.amplitudes)
    result = orthogonalization_time(state, tolerances=tolerances)
    matches = abs(result.t0 - bound) <= tolerances.saturation_t0 if result.found else False
    return SaturationReport(
        is_intelligent=not reasons,
        n_occupied=int(e_occ.size),
        probabilities=tuple(float(v) for v in p_occ),
        energies=tuple(float(v) for v in e_occ),
        mean=m.mean,
        delta_e=m.delta_e,
        mt_bound=bound,
        orthogonalization=result,
        t0_matches_mt=matches,
        reasons=tuple(reasons),
    )
