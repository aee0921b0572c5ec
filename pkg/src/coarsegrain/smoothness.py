"""Lipschitz and coarse-grained (L_alpha) constants and bound envelopes.

The ``*_empirical`` estimators scan observed pairs, so they can only ever
return LOWER bounds on the true constants of the sampled function.

Envelope functions accept a single query point or an (n, D) array of
queries and return a :class:`BoundEnvelope` of matching shape.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import ConfigurationError, DegenerateInputError, InsufficientDataError
from .metric import MetricSpace

log = logging.getLogger(__name__)


class Observation(NamedTuple):
    x: np.ndarray
    f: float


class BoundEnvelope(NamedTuple):
    lower: np.ndarray | float
    upper: np.ndarray | float

    @property
    def width(self):
        return np.subtract(self.upper, self.lower)


@dataclass(frozen=True)
class SampleSet:
    space: MetricSpace
    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        P = self.space.as_points(self.points)
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if v.shape[0] != P.shape[0]:
            raise ConfigurationError("points and values differ in length")
        if not np.all(np.isfinite(v)):
            raise ConfigurationError("function values must be finite")
        if P.shape[0] and not np.all(self.space.contains(P)):
            raise ConfigurationError("all sample points must lie inside the space")
        P.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "values", v)

    @classmethod
    def from_observations(cls, space, observations):
        obs = list(observations)
        pts = np.array([np.atleast_1d(o.x) for o in obs], dtype=np.float64).reshape(len(obs), space.D)
        return cls(space, pts, [o.f for o in obs])

    @classmethod
    def from_function(cls, space, fn, points):
        P = space.as_points(points)
        return cls(space, P, fn(P[:, 0] if space.D == 1 else P))

    def __len__(self):
        return self.points.shape[0]

    def __iter__(self):
        for x, f in zip(self.points, self.values):
            yield Observation(x, float(f))


@dataclass(frozen=True)
class SmoothnessProfile:
    """Optional Lipschitz constant plus (alpha, L_alpha) pairs sorted by alpha."""

    L: float | None = None
    pairs: tuple = field(default_factory=tuple)

    def __post_init__(self):
        pairs = tuple(sorted((float(a), float(la)) for a, la in self.pairs))
        for a, la in pairs:
            if not a > 0 or la < 0:
                raise ConfigurationError("each pair needs alpha > 0 and L_alpha >= 0")
        for (_, l1), (_, l2) in zip(pairs, pairs[1:]):
            if l2 > l1 * (1 + 1e-12) + 1e-15:
                raise ConfigurationError("L_alpha must be non-increasing in alpha")
        if self.L is not None:
            if self.L < 0:
                raise ConfigurationError("L must be non-negative")
            if pairs and self.L < pairs[0][1] * (1 - 1e-12):
                raise ConfigurationError("L must dominate every L_alpha")
        object.__setattr__(self, "pairs", pairs)

    @property
    def alphas(self):
        return np.array([a for a, _ in self.pairs])

    @property
    def l_alphas(self):
        return np.array([la for _, la in self.pairs])

    def to_json(self):
        return json.dumps({"L": self.L, "pairs": [list(p) for p in self.pairs]})

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        return cls(L=data.get("L"), pairs=tuple(tuple(p) for p in data.get("pairs", [])))


# ------------------------------------------------------------------ constants


def _check_duplicates(samples):
    P = samples.points
    order = np.lexsort(P.T[::-1])
    Ps, vs = P[order], samples.values[order]
    same = np.all(Ps[1:] == Ps[:-1], axis=1)
    if np.any(same & (vs[1:] != vs[:-1])):
        raise DegenerateInputError("duplicate points carry different function values")
    if np.any(same):
        raise DegenerateInputError("duplicate points in sample set")


def lipschitz_constant_empirical(samples):
    """Largest observed slope over all pairs; a lower bound on the true L."""
    if len(samples) < 2:
        raise InsufficientDataError("need at least two observations")
    _check_duplicates(samples)
    slope, *_ = _kernels.pair_max_slope(samples.points, samples.values, 0.0, *samples.space.kernel_args)
    return slope


def l_alpha_empirical(samples, alpha):
    """Largest observed slope over pairs at distance >= alpha (lower-bounds L_alpha)."""
    if not alpha > 0:
        raise ConfigurationError("alpha must be positive")
    if len(samples) < 2:
        raise InsufficientDataError("need at least two observations", 0.0)
    slope, _, _, dmax = _kernels.pair_max_slope(samples.points, samples.values, alpha, *samples.space.kernel_args)
    if slope < 0:
        raise InsufficientDataError(
            f"no pair at distance >= {alpha}; largest pair distance is {dmax}", dmax
        )
    return slope


def g_alpha(d, alpha, L_alpha):
    """Coarse-grained radius function: ``L_a (d + 2a)`` for d <= a, else ``L_a d``."""
    d = np.asarray(d, dtype=np.float64)
    out = np.where(d <= alpha, L_alpha * (d + 2.0 * alpha), L_alpha * d)
    return float(out) if out.ndim == 0 else out


def max_jump_given_l_alpha(alpha, L_alpha):
    """Strict cap ``2 alpha L_alpha`` on any discontinuity gap of an L_alpha-smooth function."""
    return 2.0 * L_alpha * alpha


# ------------------------------------------------------------------ envelopes


def _run_envelope(samples, query, lip, alphas=(), lalphas=()):
    if len(samples) == 0:
        raise InsufficientDataError("envelope needs at least one observation")
    q = np.asarray(query, dtype=np.float64)
    scalar = q.ndim == 0 or (q.ndim == 1 and samples.space.D > 1)
    Q = samples.space.as_points(q)
    lo, up = _kernels.envelope(Q, samples.points, samples.values, lip, alphas, lalphas, *samples.space.kernel_args)
    if scalar:
        return BoundEnvelope(float(lo[0]), float(up[0]))
    return BoundEnvelope(lo, up)


def lipschitz_envelope(samples, L, query):
    if len(samples) >= 2:
        observed, *_ = _kernels.pair_max_slope(samples.points, samples.values, 0.0, *samples.space.kernel_args)
        if L < observed - 1e-12 * max(1.0, observed):
            log.warning("L=%g is below the observed slope %g; envelope may exclude f", L, observed)
    return _run_envelope(samples, query, float(L))


def l_alpha_envelope(samples, alpha, L_alpha, query):
    """Strict envelope for an L_alpha-smooth function."""
    return _run_envelope(samples, query, -1.0, [alpha], [L_alpha])


def multi_alpha_envelope(samples, profile, query):
    """Tightest envelope over every (alpha, L_alpha) pair, plus L when present."""
    if not profile.pairs and profile.L is None:
        raise ConfigurationError("profile has neither L nor any (alpha, L_alpha) pair")
    lip = -1.0 if profile.L is None else float(profile.L)
    return _run_envelope(samples, query, lip, profile.alphas, profile.l_alphas)


def relaxed_envelope(samples, alpha, L_alpha, query):
    """Lipschitz-form envelope with L_alpha in place of L.

    Not strict: near observations f may exceed it, by less than
    ``2 alpha L_alpha``.
    """
    return _run_envelope(samples, query, float(L_alpha))


# ------------------------------------------------------------------ file formats


def write_samples_csv(samples, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x_{i}" for i in range(samples.space.D)] + ["f"])
        for x, f in zip(samples.points, samples.values):
            w.writerow([repr(float(v)) for v in x] + [repr(float(f))])


def read_samples_csv(path, space=None):
    """Read ``x_0,...,x_{D-1},f``; without ``space`` the bounding box of the data is used."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ConfigurationError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    D = len(header) - 1
    if D < 1 or header[-1] != "f" or header[:-1] != [f"x_{i}" for i in range(D)]:
        raise ConfigurationError(f"bad sample header {header!r}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=np.float64).reshape(-1, D + 1)
    except ValueError as exc:
        raise ConfigurationError(f"{path}: {exc}") from None
    if space is None:
        lo, hi = data[:, :D].min(axis=0), data[:, :D].max(axis=0)
        pad = np.where(hi > lo, 0.0, 0.5)
        space = MetricSpace(tuple(lo - pad), tuple(hi + pad))
    return SampleSet(space, data[:, :D], data[:, D])
