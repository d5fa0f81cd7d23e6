"""Independent reference computations used to freeze expected values.

None of these call into the library's numerical kernels: amplitudes are
summed in extended precision with mpmath, roots are bracketed with brentq
on a real-valued amplitude, and moments use exact rational arithmetic.
"""

import math
from fractions import Fraction

import mpmath
import numpy as np
from scipy.optimize import brentq

mpmath.mp.dps = 40


def survival_mp(energies, probs, hbar, t) -> complex:
    s = mpmath.mpc(0)
    for e, p in zip(energies, probs):
        s += mpmath.mpf(float(p)) * mpmath.expj(-mpmath.mpf(float(e)) * mpmath.mpf(float(t))
                                                / mpmath.mpf(float(hbar)))
    return complex(s)


def uniform_unit_amplitude(t: float) -> complex:
    """Survival amplitude of the flat density on [0, 1] with hbar = 1."""
    if t == 0:
        return 1.0 + 0j
    return complex(mpmath.expj(-t / 2) * mpmath.sin(t / 2) / (t / 2))


def exact_moments(energies, probs):
    e = [Fraction(x) for x in energies]
    p = [Fraction(x) for x in probs]
    z = sum(p)
    mean = sum(pi * ei for pi, ei in zip(p, e)) / z
    second = sum(pi * ei * ei for pi, ei in zip(p, e)) / z
    return mean, second, second - mean * mean


def first_sign_change_root(energies, probs, hbar, horizon, step):
    """First zero of the centred amplitude of a state whose amplitude is real after centring.

    Returns ``None`` when no sign change occurs before ``horizon``.
    """
    e = np.asarray(energies, dtype=float)
    p = np.asarray(probs, dtype=float)
    mu = math.fsum(p * e) / math.fsum(p)
    c = e - mu

    def real_amp(t):
        return math.fsum(p * np.cos(c * t / hbar))

    t = np.arange(0.0, horizon + step, step)
    vals = np.cos(np.outer(t, c) / hbar) @ p
    idx = np.nonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))[0]
    if idx.size == 0:
        return None
    i = idx[0]
    if vals[i + 1] == 0:
        return float(t[i + 1])
    return brentq(real_amp, t[i], t[i + 1], xtol=1e-15, rtol=1e-15)
