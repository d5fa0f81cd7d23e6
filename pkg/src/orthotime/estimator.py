"""scikit-learn style front-end.

:class:`SpeedLimitEstimator` is fit on an energy distribution and then
answers questions about the resulting dynamics::

    est = SpeedLimitEstimator(hbar=1.0).fit([0.0, 1.0, 2.0], sample_weight=[1, 2, 1])
    est.t0_, est.mt_bound_, est.ml_bound_
    est.predict(times)      # |S(t)|
    est.transform(times)    # columns <cos(Ht/hbar)>, <sin(Ht/hbar)>
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bounds import ml_bound, mt_bound, saturation_check, union_excluded
from .config import DEFAULT_TOLERANCES
from .dynamics import cos_sin_averages, orthogonalization_time, survival_amplitude
from .exceptions import ValidationError
from .spectral_state import (DiscreteSpectralState, QuadratureSpectralState,
                             SpectralState, moments)
from .validation import check_energies, check_weights


def check_times(T) -> np.ndarray:
    """Validate a batch of times: 1-d (or a single column) of finite floats."""
    t = np.asarray(T, dtype=np.float64)
    if t.ndim == 2 and t.shape[1] == 1:
        t = t[:, 0]
    if t.ndim == 0:
        t = t.reshape(1)
    if t.ndim != 1:
        raise ValidationError(f"times must be 1-d or a single column, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValidationError("times must be finite")
    return t


class SpeedLimitEstimator(TransformerMixin, BaseEstimator):
    """Orthogonalization time and speed-limit bounds of an initial state.

    Parameters
    ----------
    hbar : float, default=1.0
        Action constant; ignored when ``fit`` receives a ready-made state.
    horizon_multiplier : float, default=50.0
        Orthogonalization search horizon in units of the MT bound.
    eps_orth : float, default=1e-10
        ``|S|`` threshold below which the state counts as orthogonal.
    oversample : int, default=16
        Grid points per period of the fastest frequency in the scan.
    n_alpha : int, default=100000
        Phase samples used for the union of excluded intervals.
    amplitudes : {"weights", "complex"}, default="weights"
        How ``sample_weight`` is read: as probabilities (quadrature weights
        when ``quadrature`` is set) or as complex amplitudes.
    quadrature : bool, default=False
        Treat the input as a quadrature rule for a continuous spectrum.

    Attributes
    ----------
    state_ : DiscreteSpectralState or QuadratureSpectralState
    moments_ : Moments
    mt_bound_, ml_bound_ : float
        ``inf`` when the bound does not restrict ``t0``.
    orthogonalization_ : OrthogonalizationResult or None
        ``None`` for zero-dispersion states.
    t0_ : float
        First orthogonalization time, ``nan`` when not reached within the
        horizon and ``inf`` for stationary states.
    excluded_ : IntervalSet or None
    is_intelligent_ : bool or None
    """

    def __init__(self, hbar=1.0, horizon_multiplier=50.0, eps_orth=1e-10, oversample=16,
                 n_alpha=100_000, amplitudes="weights", quadrature=False):
        self.hbar = hbar
        self.horizon_multiplier = horizon_multiplier
        self.eps_orth = eps_orth
        self.oversample = oversample
        self.n_alpha = n_alpha
        self.amplitudes = amplitudes
        self.quadrature = quadrature

    def _tolerances(self):
        return DEFAULT_TOLERANCES.with_(horizon_multiplier=self.horizon_multiplier,
                                        eps_orth=self.eps_orth, oversample=self.oversample,
                                        n_alpha=self.n_alpha)

    def _build_state(self, X, sample_weight) -> SpectralState:
        if isinstance(X, (DiscreteSpectralState, QuadratureSpectralState)):
            return X
        e = np.asarray(X)
        if e.ndim == 2 and e.shape[1] == 1:
            e = e[:, 0]
        e = check_energies(e)
        if sample_weight is None:
            sample_weight = np.ones(e.size)
        if self.quadrature:
            return QuadratureSpectralState(self.hbar, e, sample_weight)
        if self.amplitudes == "complex":
            return DiscreteSpectralState(self.hbar, e, sample_weight)
        if self.amplitudes != "weights":
            raise ValidationError(f"amplitudes must be 'weights' or 'complex', got {self.amplitudes!r}")
        w = check_weights(sample_weight, e.size)
        return DiscreteSpectralState(self.hbar, e, np.sqrt(w))

    def fit(self, X, y=None, sample_weight=None):
        """Fit on energies ``X`` with probabilities/amplitudes ``sample_weight``.

        ``X`` may also be a spectral state instance, in which case
        ``sample_weight`` is ignored.
        """
        tol = self._tolerances()
        state = self._build_state(X, sample_weight)
        m = moments(state)
        self.state_ = state
        self.moments_ = m
        self.mt_bound_ = mt_bound(m, state.hbar)
        self.ml_bound_ = ml_bound(m, state.hbar)
        if m.variance == 0:
            self.orthogonalization_ = None
            self.t0_ = math.inf
            self.excluded_ = None
            self.is_intelligent_ = None if self.quadrature else False
            return self
        res = orthogonalization_time(state, tolerances=tol)
        self.orthogonalization_ = res
        self.t0_ = res.t0 if res.found else math.nan
        self.excluded_ = union_excluded(m, state.hbar, tol.n_alpha, tol)
        if isinstance(state, DiscreteSpectralState):
            self.is_intelligent_ = saturation_check(state, tolerances=tol).is_intelligent
        else:
            self.is_intelligent_ = None
        return self

    def predict(self, T):
        """``|S(t)|`` for each time in ``T``."""
        check_is_fitted(self, "state_")
        return np.abs(survival_amplitude(self.state_, check_times(T)))

    def transform(self, T):
        """``(<cos(Ht/hbar)>, <sin(Ht/hbar)>)`` for each time, shape ``(n, 2)``."""
        check_is_fitted(self, "state_")
        t = check_times(T)
        return np.array([cos_sin_averages(self.state_, ti) for ti in t]).reshape(t.size, 2)

    def score(self, T, y=None):
        """Negative mean ``|S|`` over ``T``: higher means closer to orthogonal."""
        return -float(np.mean(self.predict(T)))
