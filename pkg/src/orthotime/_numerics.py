"""Small numerical helpers shared by the dynamics, bounds and minorant modules."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], a: float, b: float, width: float,
                   max_iter: int = 500) -> tuple[float, float]:
    """Minimize a unimodal scalar function on ``[a, b]``.

    Iterates until the bracket is narrower than ``width``. Returns
    ``(x, f(x))`` for the best point evaluated, endpoints included, so the
    result never does worse than the initial bracket ends.
    """
    if b < a:
        a, b = b, a
    fa, fb = f(a), f(b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_f = min(((a, fa), (b, fb), (c, fc), (d, fd)), key=lambda p: p[1])
    for _ in range(max_iter):
        if b - a <= width:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
            if fc < best_f:
                best_x, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
            if fd < best_f:
                best_x, best_f = d, fd
    return best_x, best_f


def local_minima(values: np.ndarray) -> np.ndarray:
    """Indices of interior grid points that are local minima.

    A plateau contributes only its right-most point (``<=`` on the left,
    ``<`` on the right) so flat runs are not reported repeatedly.
    """
    v = np.asarray(values)
    if v.size < 3:
        return np.empty(0, dtype=int)
    mask = (v[1:-1] <= v[:-2]) & (v[1:-1] < v[2:])
    return np.flatnonzero(mask) + 1


def pattern_search(f: Callable[[np.ndarray], float], x0, step: float | np.ndarray,
                   tol: float = 1e-12, max_evals: int = 20_000) -> tuple[np.ndarray, float]:
    """Compass search: poll +/- each coordinate, halve the steps on failure.

    Deterministic and derivative free. Stops when every step is below
    ``tol`` or after ``max_evals`` evaluations.
    """
    x = np.array(x0, dtype=np.float64)
    steps = np.broadcast_to(np.asarray(step, dtype=np.float64), x.shape).copy()
    fx = f(x)
    evals = 1
    while evals < max_evals and np.any(steps > tol):
        improved = False
        for i in range(x.size):
            for sign in (1.0, -1.0):
                trial = x.copy()
                trial[i] += sign * steps[i]
                ft = f(trial)
                evals += 1
                if ft < fx:
                    x, fx = trial, ft
                    improved = True
                    break
        if not improved:
            steps *= 0.5
    return x, fx
