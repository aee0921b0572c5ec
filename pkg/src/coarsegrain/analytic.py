"""Closed-form smoothness constants of the sine-ramp and stairs test functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ConfigurationError

_ROOT_XTOL = 1e-12
_BRACKET_PAD = 1e-9


@dataclass(frozen=True)
class SineRamp:
    """``A sin(2 pi omega x) + m x``."""

    A: float
    omega: float
    m: float

    def __post_init__(self):
        if self.A < 0 or not self.omega > 0 or not self.m > 0:
            raise ConfigurationError("SineRamp needs A >= 0, omega > 0, m > 0")

    def __call__(self, x):
        return sine_eval(self, x)


@dataclass(frozen=True)
class Stairs:
    """``A floor(x / w)``."""

    A: float
    w: float

    def __post_init__(self):
        if not self.A > 0 or not self.w > 0:
            raise ConfigurationError("Stairs needs A > 0 and w > 0")

    def __call__(self, x):
        return stairs_eval(self, x)


def sine_eval(f, x):
    x = np.asarray(x, dtype=np.float64)
    out = f.A * np.sin(2.0 * np.pi * f.omega * x) + f.m * x
    return float(out) if out.ndim == 0 else out


def sine_lipschitz(f):
    return 2.0 * math.pi * f.omega * f.A + f.m


def tan_fixed_point(n):
    """The root of ``y = tan(y)`` in ``(n pi, n pi + pi/2)`` for n >= 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    lo = n * math.pi + _BRACKET_PAD
    hi = n * math.pi + math.pi / 2 - _BRACKET_PAD
    return brentq(lambda y: y - math.tan(y), lo, hi, xtol=_ROOT_XTOL)


def first_tan_fixed_point_at_least(y0):
    """Smallest positive root of ``y = tan(y)`` that is >= ``y0``."""
    n = max(1, math.floor(y0 / math.pi))
    while True:
        y = tan_fixed_point(n)
        if y >= y0:
            return y
        n += 1


def sine_l_alpha(f, alpha):
    """Coarse-grained constant of a sine ramp.

    The pair slope is ``2 A pi omega |sin(y)/y| + m`` with
    ``y = pi omega d`` (choosing the pair midpoint so the cosine factor is
    +-1), so L_alpha is the supremum of ``|sin(y)/y|`` over
    ``y >= pi omega alpha``.  That supremum sits either at the first
    stationary point ``y = tan(y)`` beyond the cut-off, or at the cut-off
    itself when the cut-off lies on a falling flank of ``|sin(y)/y|``.
    """
    if not alpha > 0:
        raise ConfigurationError("alpha must be positive")
    if f.A == 0:
        return f.m
    y0 = math.pi * f.omega * alpha
    y_star = first_tan_fixed_point_at_least(y0)
    peak = max(abs(math.cos(y_star)), abs(math.sin(y0) / y0))
    return 2.0 * f.A * math.pi * f.omega * peak + f.m


def stairs_eval(f, x):
    x = np.asarray(x, dtype=np.float64)
    out = f.A * np.floor(x / f.w)
    return float(out) if out.ndim == 0 else out


def _ceil_ratio(a, b):
    q = a / b
    r = round(q)
    if abs(q - r) < 1e-9 * max(1.0, abs(q)):
        return int(r)
    return math.ceil(q)


def stairs_l_alpha(f, alpha):
    if not alpha > 0:
        raise ConfigurationError("alpha must be positive")
    n = _ceil_ratio(alpha, f.w)
    return max(f.A / f.w * (1.0 + 1.0 / n), f.A / alpha * n)


def l_alpha_curve(f, alphas):
    """``[(alpha, L_alpha)]`` for either function family."""
    fn = sine_l_alpha if isinstance(f, SineRamp) else stairs_l_alpha
    return [(float(a), fn(f, float(a))) for a in alphas]
