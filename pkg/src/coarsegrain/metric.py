"""Box-shaped metric spaces, distances and ball-volume constants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import ConfigurationError, StructuralError

_BOX_TOL = 1e-9


class MetricKind(str, Enum):
    EUCLIDEAN = "euclidean"
    L1 = "l1"
    WEIGHTED_PRODUCT = "weighted_product"


_CODES = {
    MetricKind.EUCLIDEAN: _kernels.EUCLIDEAN,
    MetricKind.L1: _kernels.L1,
    MetricKind.WEIGHTED_PRODUCT: _kernels.WEIGHTED_PRODUCT,
}


@dataclass(frozen=True)
class MetricSpace:
    """Axis-aligned box ``[lower, upper]`` with a metric.

    For ``weighted_product`` the first ``state_dims`` coordinates are the
    state and the rest the action; distance is ``d_S + C * d_A`` with
    euclidean distance inside each block.
    """

    lower: tuple
    upper: tuple
    metric_kind: MetricKind = MetricKind.EUCLIDEAN
    action_weight: float = 1.0
    state_dims: int | None = None

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        object.__setattr__(self, "metric_kind", MetricKind(self.metric_kind))
        if len(lo) != len(hi) or not lo:
            raise StructuralError("lower and upper must be non-empty and of equal length")
        if not all(math.isfinite(a) and math.isfinite(b) and a < b for a, b in zip(lo, hi)):
            raise ConfigurationError("box bounds must be finite with lower < upper")
        if self.action_weight < 0:
            raise ConfigurationError("action_weight must be non-negative")
        if self.metric_kind is MetricKind.WEIGHTED_PRODUCT:
            k = self.state_dims if self.state_dims is not None else len(lo) - 1
            if not 1 <= k < len(lo):
                raise ConfigurationError("weighted_product needs 1 <= state_dims < D")
            object.__setattr__(self, "state_dims", k)

    @classmethod
    def interval(cls, lo, hi):
        return cls((lo,), (hi,))

    @classmethod
    def unit_cube(cls, D, metric_kind=MetricKind.EUCLIDEAN):
        return cls((0.0,) * D, (1.0,) * D, metric_kind)

    @property
    def D(self):
        return len(self.lower)

    @property
    def volume(self):
        return float(np.prod(np.subtract(self.upper, self.lower)))

    @property
    def kernel_args(self):
        return _CODES[self.metric_kind], self.state_dims or 0, float(self.action_weight)

    def contains(self, points, tol=_BOX_TOL):
        P = np.atleast_2d(points)
        return np.all((P >= np.array(self.lower) - tol) & (P <= np.array(self.upper) + tol), axis=-1)

    def as_points(self, points):
        """Coerce to a float (n, D) array, raising on dimension mismatch."""
        P = np.asarray(points, dtype=np.float64)
        if P.ndim == 0:
            P = P.reshape(1, 1)
        elif P.ndim == 1:
            P = P.reshape(-1, 1) if self.D == 1 else P.reshape(1, -1)
        if P.shape[1] != self.D:
            raise StructuralError(f"points have dimension {P.shape[1]}, space has D={self.D}")
        if not np.all(np.isfinite(P)):
            raise StructuralError("point coordinates must be finite")
        return P

    def sample_uniform(self, n, rng):
        lo, hi = np.array(self.lower), np.array(self.upper)
        return lo + (hi - lo) * rng.random((n, self.D))


@dataclass(frozen=True)
class VolumeConstants:
    C_D: float
    C_DX: float
    l_X: float


def distance(space, a, b):
    """Metric distance between two points of ``space``."""
    A = np.asarray(a, dtype=np.float64).reshape(-1)
    B = np.asarray(b, dtype=np.float64).reshape(-1)
    if A.shape[0] != space.D or B.shape[0] != space.D:
        raise StructuralError(f"expected points of dimension {space.D}")
    if not (space.contains(A)[0] and space.contains(B)[0]):
        raise ConfigurationError("points must lie inside the space's box")
    return float(pairwise_distances(space, A[None, :], B[None, :])[0, 0])


def pairwise_distances(space, A, B):
    metric, split, C = space.kernel_args
    return _kernels.distance_matrix(space.as_points(A), space.as_points(B), metric, split, C)


def ball_volume_constant(space):
    """Volume of the unit ball in ``space``'s metric (``C_D``)."""
    D = space.D
    if space.metric_kind is MetricKind.EUCLIDEAN:
        return math.pi ** (D / 2) / math.gamma(D / 2 + 1)
    if space.metric_kind is MetricKind.L1:
        return 2.0**D / math.factorial(D)
    raise ConfigurationError(f"no closed-form ball volume for metric {space.metric_kind.value}")


def linear_size(space):
    """Equal-volume ball radius of the box, taking ``C_DX = C_D``."""
    c_d = ball_volume_constant(space)
    return VolumeConstants(C_D=c_d, C_DX=c_d, l_X=(space.volume / c_d) ** (1.0 / space.D))
