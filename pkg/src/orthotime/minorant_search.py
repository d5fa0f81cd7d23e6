"""Certified cosine minorants and the time bounds they imply.

If ``f(x) >= A*cos(x + alpha)`` holds on the range of ``E*t/hbar`` then,
at any orthogonalization time, ``<f(H t0/hbar)> >= 0`` because the
average of the cosine vanishes there. For a polynomial ``f`` of degree at
most two the average only involves ``<H>`` and ``<H^2>``, so every valid
inequality turns into an explicit restriction on ``t0``. Linear ``f`` on
a spectrum bounded below gives the Margolus-Levitin bound; quadratic ``f``
on the whole line gives the Mandelstam-Tamm bound.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from ._numerics import golden_section, local_minima, pattern_search
from .config import DEFAULT_TOLERANCES, Tolerances
from .exceptions import (DomainMismatch, SlackViolation, TailUncertifiable,
                         ValidationError)
from .intervals import IntervalSet, OpenInterval
from .spectral_state import Moments

__all__ = [
    "Family",
    "Domain",
    "GridSpec",
    "MinorantCandidate",
    "MinorantCertificate",
    "HalfLineBound",
    "FamilyOptimum",
    "certify",
    "quadratic_mt_candidate",
    "linear_ml_candidate",
    "bound_from_certificate",
    "implied_bound",
    "optimize_family",
]


class Family(str, enum.Enum):
    LINEAR = "linear"
    QUADRATIC = "quadratic"

    def __str__(self):
        return self.value


class Domain(str, enum.Enum):
    HALF_LINE_NONNEG = "half_line_nonneg"
    FULL_LINE = "full_line"

    def __str__(self):
        return self.value


_DEGREE = {Family.LINEAR: 1, Family.QUADRATIC: 2}
_MIN_POINTS = 100_000


@dataclass(frozen=True)
class GridSpec:
    span: float
    points: int


@dataclass(frozen=True)
class MinorantCandidate:
    """A proposed inequality ``f(x) >= A cos(x + phase)`` on ``domain``.

    ``coefficients`` are in ascending powers of ``x``:
    ``f(x) = c[0] + c[1]*x (+ c[2]*x**2)``.
    """

    family: Family
    coefficients: tuple[float, ...]
    amplitude: float
    phase: float
    domain: Domain
    grid: GridSpec = field(default_factory=lambda: GridSpec(4 * math.pi, _MIN_POINTS))

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "domain", Domain(self.domain))
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) != _DEGREE[self.family] + 1:
            raise ValidationError(
                f"{self.family} family needs {_DEGREE[self.family] + 1} coefficients, got {len(coeffs)}")
        if not all(math.isfinite(c) for c in coeffs):
            raise ValidationError("coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "amplitude", float(self.amplitude))
        object.__setattr__(self, "phase", float(self.phase))

    def f(self, x):
        return np.polynomial.polynomial.polyval(x, self.coefficients)

    def slack(self, x):
        return self.f(x) - self.amplitude * np.cos(np.add(x, self.phase))


@dataclass(frozen=True)
class MinorantCertificate(MinorantCandidate):
    #: numerical minimum of f(x) - A cos(x + phase) over the domain
    certified_slack: float = 0.0
    #: beyond this distance from the scanned window f >= |A| holds analytically
    tail_from: float = 0.0
    touch_points: tuple[float, ...] = ()

    @property
    def valid(self) -> bool:
        return self.certified_slack >= -DEFAULT_TOLERANCES.minorant_violation


@dataclass(frozen=True)
class HalfLineBound:
    """``t0 >= t_min`` (``t_min`` may be ``inf``)."""

    t_min: float


def quadratic_mt_candidate(alpha: float = 0.0, grid: GridSpec | None = None) -> MinorantCandidate:
    """``(x+alpha)^2 - pi^2/4 >= -pi cos(x+alpha)`` on the whole line."""
    return MinorantCandidate(Family.QUADRATIC,
                             (alpha * alpha - math.pi ** 2 / 4, 2 * alpha, 1.0),
                             -math.pi, alpha, Domain.FULL_LINE,
                             grid or GridSpec(4 * math.pi, _MIN_POINTS))


def linear_ml_candidate(grid: GridSpec | None = None) -> MinorantCandidate:
    """``(2/pi) x - 1 >= A cos(x + alpha)`` for ``x >= 0``, the tangent-line inequality."""
    return MinorantCandidate(Family.LINEAR, (-1.0, 2 / math.pi),
                             math.sqrt(1 + 4 / math.pi ** 2),
                             math.pi - math.atan(2 / math.pi),
                             Domain.HALF_LINE_NONNEG,
                             grid or GridSpec(4 * math.pi, _MIN_POINTS))


def _tail_window(cand: MinorantCandidate) -> tuple[float, float, float]:
    """Scan window ``[lo, hi]`` outside which ``f >= |A|`` is guaranteed.

    Returns ``(lo, hi, tail_from)``, ``tail_from`` being where the analytic
    domination starts (distance from the quadratic's vertex, or the abscissa
    on the half line).
    """
    c = cand.coefficients
    amp = abs(cand.amplitude)
    centre, span = -cand.phase, float(cand.grid.span)
    if cand.family is Family.LINEAR:
        if cand.domain is Domain.FULL_LINE:
            raise TailUncertifiable("a line cannot dominate a cosine at both ends of the real line")
        c0, c1 = c
        if c1 < 0 or (c1 == 0 and c0 < amp):
            raise TailUncertifiable("f does not grow above |A| on the half line")
        x_dom = 0.0 if c1 == 0 else max(0.0, (amp - c0) / c1)
        return 0.0, max(centre + span, x_dom + 1.0), x_dom
    c0, c1, c2 = c
    if c2 <= 0:
        raise TailUncertifiable("quadratic minorant needs a positive leading coefficient")
    vertex = -c1 / (2 * c2)
    f_vertex = c0 - c1 * c1 / (4 * c2)
    radius = math.sqrt(max(0.0, (amp - f_vertex) / c2))
    lo = min(centre - span, vertex - radius - 1.0)
    hi = max(centre + span, vertex + radius + 1.0)
    if cand.domain is Domain.HALF_LINE_NONNEG:
        lo = max(lo, 0.0)
        hi = max(hi, 1.0)
    return lo, hi, radius


def certify(candidate: MinorantCandidate,
            tolerances: Tolerances = DEFAULT_TOLERANCES) -> MinorantCertificate:
    """Certify ``f(x) >= A cos(x + phase)`` on the candidate's domain.

    The slack is scanned on a uniform grid covering the candidate's window
    (at least ``|x + phase| <= grid.span``) and the region where ``f`` could
    still dip below ``|A|``; grid local minima are refined by golden-section
    search. Outside that region ``f >= |A|`` holds analytically.

    Raises
    ------
    TailUncertifiable
        When no finite window can carry the certificate (e.g. a linear ``f``
        on the whole line).
    SlackViolation
        When the certified slack is below ``-tolerances.minorant_violation``.
    """
    if candidate.grid.points < _MIN_POINTS:
        raise ValidationError(f"grid.points must be >= {_MIN_POINTS}")
    if candidate.grid.span < 4 * math.pi:
        raise ValidationError("grid.span must be >= 4*pi")
    lo, hi, tail_from = _tail_window(candidate)
    slack_value, touch = _min_slack(candidate.slack, lo, hi, candidate.grid.points,
                                    tolerances.minorant_violation,
                                    include_lo=candidate.domain is Domain.HALF_LINE_NONNEG)
    if slack_value < -tolerances.minorant_violation:
        raise SlackViolation(f"slack {slack_value:.3e} < 0 at x = {touch[0]:.6g}")
    fields = {k: getattr(candidate, k) for k in
              ("family", "coefficients", "amplitude", "phase", "domain", "grid")}
    return MinorantCertificate(**fields, certified_slack=slack_value,
                               tail_from=tail_from, touch_points=touch)


def _min_slack(slack, lo, hi, points, touch_tol, include_lo=False):
    x = np.linspace(lo, hi, int(points))
    s = slack(x)
    found = [(float(x[0]), float(s[0])), (float(x[-1]), float(s[-1]))]
    width = 1e-12 * max(1.0, abs(lo), abs(hi))
    for i in local_minima(s):
        found.append(golden_section(lambda z: float(slack(z)), float(x[i - 1]),
                                    float(x[i + 1]), width))
    if include_lo and s[1] >= s[0]:
        # boundary minimum at the origin of the half line
        found.append((float(x[0]), float(s[0])))
    best = min(v for _, v in found)
    touch = sorted({xm for xm, v in found if v <= best + touch_tol})
    return float(best), tuple(touch)


def _check_domain(cert: MinorantCandidate, m: Moments):
    if cert.domain is Domain.HALF_LINE_NONNEG:
        if m.min_energy is None or m.min_energy < 0:
            raise DomainMismatch(
                "half-line certificate needs a spectrum in [0, inf); shift so that E0 = 0")


def bound_from_certificate(cert: MinorantCertificate, m: Moments,
                           hbar: float) -> IntervalSet | HalfLineBound:
    """Times forbidden to ``t0`` by ``<f(H t0/hbar)> >= 0``.

    A quadratic certificate yields the open set where the averaged
    quadratic is negative; a linear one yields ``t0 >= t_min``.
    """
    _check_domain(cert, m)
    c = cert.coefficients
    if cert.family is Family.LINEAR:
        c0, c1 = c
        slope = c1 * m.mean / hbar
        if slope > 0:
            return HalfLineBound(max(0.0, -c0 / slope))
        return HalfLineBound(math.inf if c0 < 0 else 0.0)
    c0, c1, c2 = c
    a2 = c2 * m.second / hbar ** 2
    a1 = c1 * m.mean / hbar
    disc = a1 * a1 - 4.0 * a2 * c0
    if a2 <= 0 or disc <= 0:
        return IntervalSet()
    root = math.sqrt(disc)
    return IntervalSet([OpenInterval((-a1 - root) / (2 * a2), (-a1 + root) / (2 * a2))])


def implied_bound(excluded: IntervalSet | HalfLineBound) -> float:
    """Earliest positive time not excluded (0 when nothing near t = 0 is excluded)."""
    if isinstance(excluded, HalfLineBound):
        return excluded.t_min
    for iv in excluded:
        if iv.lo <= 0 < iv.hi:
            return iv.hi
    return 0.0


@dataclass(frozen=True)
class FamilyOptimum:
    """Best certificate found in a family, in the gauge where it applies.

    The certificate refers to the spectrum shifted by ``energy_shift``
    (mean removed on the full line, ``E0`` removed on the half line);
    orthogonalization times do not depend on this shift.
    """

    certificate: MinorantCertificate
    bound: float
    energy_shift: float
    moments: Moments
    n_restarts: int


def _shifted(m: Moments, delta: float) -> Moments:
    e0 = None if m.min_energy is None else m.min_energy + delta
    mean = m.mean + delta
    return Moments(mean=mean, second=m.variance + mean * mean,
                   variance=m.variance, min_energy=e0)


def _tightest_offset(amp: float, alpha: float, c1: float, c2: float, half_line: bool,
                     n_grid: int = 2001) -> float:
    """Smallest ``c0`` with ``c0 + c1 x + c2 x^2 >= amp cos(x + alpha)`` on the domain."""
    def g(x):
        return amp * np.cos(np.add(x, alpha)) - c1 * np.asarray(x) - c2 * np.square(x)

    a = abs(amp)
    if c2 > 0:
        v = -c1 / (2 * c2)
        r = math.sqrt(2 * a / c2) + 1.0
        lo, hi = v - r, v + r
    else:
        lo, hi = -1.0, (2 * a) / c1 + 1.0
    if half_line:
        lo, hi = 0.0, max(hi, 1.0)
    x = np.linspace(lo, hi, n_grid)
    gx = g(x)
    best = float(gx.max())
    if half_line:
        best = max(best, float(g(0.0)))
    for i in local_minima(-gx):
        _, v = golden_section(lambda z: -float(g(z)), float(x[i - 1]), float(x[i + 1]), 1e-12)
        best = max(best, -v)
    return best


def _objective_bound(c0: float, c1: float, c2: float, m: Moments, hbar: float,
                     family: Family) -> float:
    if family is Family.LINEAR:
        slope = c1 * m.mean / hbar
        if c0 >= 0:
            return 0.0
        return math.inf if slope <= 0 else -c0 / slope
    a2 = c2 * m.second / hbar ** 2
    a1 = c1 * m.mean / hbar
    if c0 >= 0 or a2 <= 0:
        return 0.0
    return (-a1 + math.sqrt(a1 * a1 - 4 * a2 * c0)) / (2 * a2)


def optimize_family(family: Family | str, domain: Domain | str, m: Moments, hbar: float,
                    tolerances: Tolerances = DEFAULT_TOLERANCES,
                    n_restarts: int = 4) -> FamilyOptimum:
    """Search a family for the certificate implying the latest earliest-allowed ``t0``.

    ``f`` is scaled so its leading coefficient is one, and for each trial
    ``(A, alpha[, c1])`` the constant term is set to the smallest value that
    keeps the inequality valid. Restarts from a fixed grid of phases run a
    compass pattern search, a Nelder-Mead polish and a final fine pattern
    search; the best result is certified.

    Full-line searches work with the mean energy removed and half-line
    searches with ``E0`` removed; see :class:`FamilyOptimum`.
    """
    family, domain = Family(family), Domain(domain)
    if family is Family.LINEAR and domain is Domain.FULL_LINE:
        raise TailUncertifiable("a line cannot dominate a cosine at both ends of the real line")
    if domain is Domain.FULL_LINE:
        shift = 0.0 - m.mean
    else:
        if m.min_energy is None:
            raise DomainMismatch("half-line search needs the lowest energy")
        shift = 0.0 - m.min_energy
    gauge = _shifted(m, shift)
    if gauge.variance == 0 and family is Family.QUADRATIC:
        raise DomainMismatch("Delta E = 0: no finite dispersion bound to optimize")

    if family is Family.QUADRATIC and domain is Domain.FULL_LINE:
        # with the mean removed the problem is moment free: bound = hbar*sqrt(-c0/Var)
        params = _quadratic_full_line_optimum(n_restarts)
    elif family is Family.LINEAR:
        params = _linear_half_line_optimum(n_restarts)
    else:
        params = _search(family, True, gauge, hbar, n_restarts)
    amp, alpha, c1, c2 = params
    c0 = _tightest_offset(amp, alpha, c1, c2, domain is Domain.HALF_LINE_NONNEG)
    coeffs = (c0, c1) if family is Family.LINEAR else (c0, c1, c2)
    cert = certify(MinorantCandidate(family, coeffs, amp, alpha, domain), tolerances)
    bound = implied_bound(bound_from_certificate(cert, gauge, hbar))
    return FamilyOptimum(cert, bound, shift, gauge, n_restarts)


def _search(family: Family, half_line: bool, gauge: Moments, hbar: float,
            n_restarts: int) -> tuple[float, float, float, float]:
    """Pattern search over the free parameters, maximizing the implied bound.

    Quadratics are written ``(x - v)^2 + k`` and searched over
    ``(A, beta, v)`` with ``alpha = beta - v``; in these coordinates the
    non-smooth ridge of the objective (two tangency points trading places)
    lies along a coordinate axis. Lines are searched over ``(A, alpha)``
    with unit slope.
    """
    quadratic = family is Family.QUADRATIC

    def unpack(z):
        if quadratic:
            amp, beta, v = z
            return amp, beta - v, -2.0 * v, 1.0
        return z[0], z[1], 1.0, 0.0

    def loss(z):
        amp, alpha, c1, c2 = unpack(z)
        c0 = _tightest_offset(amp, alpha, c1, c2, half_line)
        b = _objective_bound(c0, c1, c2, gauge, hbar, family)
        return -b if math.isfinite(b) else 0.0

    best = None
    # restart phases avoid zero; the starting amplitudes straddle both signs
    for alpha0 in np.linspace(-1.2, 1.2, 2 * n_restarts)[::2]:
        for amp0 in (-2.5, 2.0):
            z0 = [amp0, alpha0, 0.3] if quadratic else [amp0, alpha0]
            z, _ = pattern_search(loss, z0, step=0.25, tol=1e-9)
            # the optimum sits on a kink; simplex moves cross it where compass steps stall
            res = minimize(loss, z, method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 4000})
            z, fz = pattern_search(loss, res.x, step=1e-4, tol=1e-12)
            key = (float(fz), tuple(float(v) for v in z))
            if best is None or key < best:
                best = key
    return unpack(np.array(best[1]))


@functools.lru_cache(maxsize=None)
def _quadratic_full_line_optimum(n_restarts: int):
    unit = Moments(mean=0.0, second=1.0, variance=1.0)
    return _search(Family.QUADRATIC, False, unit, 1.0, n_restarts)


@functools.lru_cache(maxsize=None)
def _linear_half_line_optimum(n_restarts: int):
    unit = Moments(mean=1.0, second=1.0, variance=0.0, min_energy=0.0)
    return _search(Family.LINEAR, True, unit, 1.0, n_restarts)
