"""Initial states described by their energy distribution.

Two representations are provided. :class:`DiscreteSpectralState` holds
eigen-energies with complex amplitudes; :class:`QuadratureSpectralState`
holds a finite quadrature rule standing in for a continuous energy
distribution. Both are canonicalized on construction (ascending energies,
duplicate energies merged) and renormalized, and both expose the same
read-only surface used downstream: ``hbar``, ``energies`` and
``probabilities``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .config import DEFAULT_TOLERANCES
from .exceptions import NonPositiveDispersion, ValidationError, ZeroNorm
from .validation import (check_amplitudes, check_energies, check_hbar,
                         check_positive_int, check_weights, frozen)

__all__ = [
    "DiscreteSpectralState",
    "QuadratureSpectralState",
    "Moments",
    "SpectralState",
    "normalize",
    "moments",
    "shift_energy",
    "construct_intelligent",
    "uniform_density",
    "density_quadrature",
    "random_discrete_state",
]

# totals this close to 1 are rounding residue; rescaling them again would
# only move amplitudes by an ulp and break exact idempotence
_UNIT_SLACK = 8 * np.finfo(float).eps


def _merge_duplicates(energies: np.ndarray, probs: np.ndarray):
    """Sort by energy and sum the probability of repeated energies.

    Returns ``(unique_energies, summed_probs, first_index)`` where
    ``first_index`` points at the representative input entry of each
    group, chosen deterministically (largest weight, then input order).
    """
    order = np.lexsort((-probs, energies))
    e_sorted = energies[order]
    p_sorted = probs[order]
    uniq, start = np.unique(e_sorted, return_index=True)
    summed = np.add.reduceat(p_sorted, start)
    return uniq, summed, order[start]


@dataclass(frozen=True, init=False)
class DiscreteSpectralState:
    """Energy levels with complex amplitudes, ``|psi> = sum_n c_n |n>``.

    Parameters
    ----------
    hbar : float
        Action constant (energy x time), strictly positive.
    energies : array-like of float
        Energy eigenvalues. Order and repetition are free on input.
    amplitudes : array-like of complex
        Expansion coefficients. Rescaled so that ``sum |c_n|^2 = 1``.

    Attributes
    ----------
    norm_correction : float
        Factor the input amplitudes were multiplied by during normalization.
    """

    hbar: float
    energies: np.ndarray
    amplitudes: np.ndarray
    norm_correction: float = field(default=1.0)

    def __init__(self, hbar, energies, amplitudes):
        hbar = check_hbar(hbar)
        e = check_energies(energies)
        c = check_amplitudes(amplitudes, e.size)
        p = np.abs(c) ** 2
        n_in = e.size
        e, p_merged, rep = _merge_duplicates(e, p)
        if e.size == n_in:
            c = c[rep]
        else:
            c = np.sqrt(p_merged) * np.exp(1j * np.angle(c[rep]))
        total = float(np.sum(p_merged))
        if not total > DEFAULT_TOLERANCES.zero_norm:
            raise ZeroNorm(f"total probability {total} is not positive")
        corr = 1.0
        if abs(total - 1.0) > _UNIT_SLACK:
            corr = 1.0 / math.sqrt(total)
            c = c * corr
        object.__setattr__(self, "hbar", hbar)
        object.__setattr__(self, "energies", frozen(e))
        object.__setattr__(self, "amplitudes", frozen(c))
        object.__setattr__(self, "norm_correction", corr)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def levels(self) -> list[tuple[float, complex]]:
        return [(float(e), complex(c)) for e, c in zip(self.energies, self.amplitudes)]

    def __len__(self) -> int:
        return self.energies.size

    def __eq__(self, other):
        if not isinstance(other, DiscreteSpectralState):
            return NotImplemented
        return (self.hbar == other.hbar
                and np.array_equal(self.energies, other.energies)
                and np.array_equal(self.amplitudes, other.amplitudes))

    __hash__ = None


@dataclass(frozen=True, init=False)
class QuadratureSpectralState:
    """Finite quadrature rule for the energy distribution of a state.

    ``nodes`` are energies and ``weights`` are non-negative probabilities
    summing to one; together they stand in for the spectral measure
    ``d<psi|P_E|psi>`` of a continuous spectrum.
    """

    hbar: float
    energies: np.ndarray
    weights: np.ndarray
    norm_correction: float = field(default=1.0)

    def __init__(self, hbar, energies, weights):
        hbar = check_hbar(hbar)
        e = check_energies(energies)
        w = check_weights(weights, e.size)
        e, w, _ = _merge_duplicates(e, w)
        total = float(np.sum(w))
        if not total > DEFAULT_TOLERANCES.zero_norm:
            raise ZeroNorm(f"total weight {total} is not positive")
        corr = 1.0
        if abs(total - 1.0) > _UNIT_SLACK:
            corr = 1.0 / total
            w = w * corr
        object.__setattr__(self, "hbar", hbar)
        object.__setattr__(self, "energies", frozen(e))
        object.__setattr__(self, "weights", frozen(w))
        object.__setattr__(self, "norm_correction", corr)

    @property
    def probabilities(self) -> np.ndarray:
        return self.weights

    @property
    def nodes(self) -> list[tuple[float, float]]:
        return [(float(e), float(w)) for e, w in zip(self.energies, self.weights)]

    def __len__(self) -> int:
        return self.energies.size

    def __eq__(self, other):
        if not isinstance(other, QuadratureSpectralState):
            return NotImplemented
        return (self.hbar == other.hbar
                and np.array_equal(self.energies, other.energies)
                and np.array_equal(self.weights, other.weights))

    __hash__ = None


SpectralState = Union[DiscreteSpectralState, QuadratureSpectralState]


@dataclass(frozen=True)
class Moments:
    """Energy moments of an initial state.

    ``min_energy`` is the lowest occupied energy and is only set when the
    spectrum is known to be bounded below.
    """

    mean: float
    second: float
    variance: float
    min_energy: float | None = None

    def __post_init__(self):
        for name in ("mean", "second", "variance"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"moment {name} must be finite")
        if self.variance < 0:
            raise ValidationError(f"negative variance {self.variance}")
        if self.second < 0:
            raise ValidationError(f"negative second moment {self.second}")
        if self.min_energy is not None and self.mean < self.min_energy:
            raise ValidationError(
                f"mean {self.mean} lies below min_energy {self.min_energy}")

    @property
    def delta_e(self) -> float:
        return math.sqrt(self.variance)

    @classmethod
    def from_mean_dispersion(cls, mean: float, delta_e: float,
                             min_energy: float | None = None) -> "Moments":
        """Build moments from ``<H>`` and ``Delta E`` (``<H^2> = <H>^2 + Delta E^2``)."""
        if delta_e < 0:
            raise ValidationError("delta_e must be >= 0")
        return cls(mean=float(mean), second=float(mean) ** 2 + float(delta_e) ** 2,
                   variance=float(delta_e) ** 2, min_energy=min_energy)


def normalize(state: SpectralState) -> SpectralState:
    """Return ``state`` with probabilities summing to one.

    States are normalized on construction, so this rebuilds the state and
    is idempotent; it exists for callers that want the contract spelled out.
    """
    if isinstance(state, DiscreteSpectralState):
        return DiscreteSpectralState(state.hbar, state.energies, state.amplitudes)
    if isinstance(state, QuadratureSpectralState):
        return QuadratureSpectralState(state.hbar, state.energies, state.weights)
    raise TypeError(f"not a spectral state: {type(state).__name__}")


def moments(state: SpectralState) -> Moments:
    p = state.probabilities
    e = state.energies
    occupied = p > 0
    e_occ = e[occupied]
    p_occ = p[occupied]
    if e_occ.size == 1:
        # eigenstate: exact moments, no rounding in the dispersion
        e0 = float(e_occ[0])
        return Moments(mean=e0, second=e0 * e0, variance=0.0, min_energy=e0)
    mean = float(np.dot(p_occ, e_occ))
    second = float(np.dot(p_occ, e_occ * e_occ))
    # two-pass form, non-negative by construction
    variance = float(np.dot(p_occ, (e_occ - mean) ** 2))
    min_energy = float(e_occ[0])
    mean = max(mean, min_energy)
    return Moments(mean=mean, second=second, variance=variance, min_energy=min_energy)


def shift_energy(state: SpectralState, delta: float) -> SpectralState:
    """Shift every energy by ``delta``; a global phase for the dynamics."""
    delta = float(delta)
    if isinstance(state, DiscreteSpectralState):
        return DiscreteSpectralState(state.hbar, state.energies + delta, state.amplitudes)
    if isinstance(state, QuadratureSpectralState):
        return QuadratureSpectralState(state.hbar, state.energies + delta, state.weights)
    raise TypeError(f"not a spectral state: {type(state).__name__}")


def construct_intelligent(hbar: float, mean: float, delta_e: float,
                          phases: Sequence[float] = (0.0, 0.0)) -> DiscreteSpectralState:
    """Equal-weight two-level state at ``mean -/+ delta_e``.

    These are the states that saturate the dispersion bound: the first
    orthogonalization happens exactly at ``pi*hbar/(2*delta_e)``.
    """
    if not delta_e > 0:
        raise NonPositiveDispersion(f"delta_e must be > 0, got {delta_e}")
    phi1, phi2 = (float(x) for x in phases)
    energies = [mean - delta_e, mean + delta_e]
    amps = np.array([np.exp(1j * phi1), np.exp(1j * phi2)]) / math.sqrt(2.0)
    return DiscreteSpectralState(hbar, energies, amps)


def density_quadrature(pdf, lo: float, hi: float, n_nodes: int,
                       hbar: float = 1.0) -> QuadratureSpectralState:
    """Gauss-Legendre discretization of an energy density on ``[lo, hi]``.

    ``pdf`` is evaluated at the mapped nodes; it need not be normalized.
    """
    n_nodes = check_positive_int(n_nodes, "n_nodes")
    if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
        raise ValidationError(f"bad support [{lo}, {hi}]")
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    half = 0.5 * (hi - lo)
    nodes = half * x + 0.5 * (hi + lo)
    dens = np.asarray(pdf(nodes), dtype=np.float64)
    return QuadratureSpectralState(hbar, nodes, w * half * dens)


def uniform_density(lo: float, hi: float, n_nodes: int = 64,
                    hbar: float = 1.0) -> QuadratureSpectralState:
    return density_quadrature(np.ones_like, lo, hi, n_nodes, hbar)


def random_discrete_state(rng: np.random.Generator, n_levels: int,
                          energy_range: tuple[float, float] = (-5.0, 5.0),
                          weights: str = "random",
                          hbar: float = 1.0) -> DiscreteSpectralState:
    """Draw a random discrete state.

    ``weights`` selects the population:

    ``"random"``
        energies uniform in ``energy_range``, weights uniform in ``(0, 1]``,
        random phases.
    ``"equal"``
        energies uniform, equal weights, random phases.
    ``"symmetric"``
        equally spaced energies over a random sub-interval with mirror
        symmetric weights; such states have a real survival amplitude up to
        a global phase and frequently do orthogonalize.
    """
    n_levels = check_positive_int(n_levels, "n_levels", minimum=1)
    lo, hi = energy_range
    if weights == "symmetric":
        a, b = np.sort(rng.uniform(lo, hi, size=2))
        energies = np.linspace(a, b, n_levels)
        half = rng.uniform(0.0, 1.0, size=(n_levels + 1) // 2) + 1e-3
        probs = np.concatenate([half, half[: n_levels // 2][::-1]])
    else:
        energies = rng.uniform(lo, hi, size=n_levels)
        if weights == "random":
            probs = 1.0 - rng.uniform(0.0, 1.0, size=n_levels)
        elif weights == "equal":
            probs = np.ones(n_levels)
        else:
            raise ValidationError(f"unknown weight mode {weights!r}")
    phases = rng.uniform(0.0, 2 * np.pi, size=n_levels)
    return DiscreteSpectralState(hbar, energies, np.sqrt(probs) * np.exp(1j * phases))
