import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coarsegrain.errors import ConfigurationError, StructuralError
from coarsegrain.metric import (
    MetricKind,
    MetricSpace,
    ball_volume_constant,
    distance,
    linear_size,
    pairwise_distances,
)


def test_distance_examples():
    line = MetricSpace.interval(0.0, 1.0)
    assert distance(line, 0.2, 0.7) == pytest.approx(0.5)
    sq = MetricSpace.unit_cube(3)
    assert distance(sq, [0.1, 0.2, 0.3], [0.1, 0.2, 0.3]) == 0.0
    prod = MetricSpace((0.0, 0.0), (1.0, 1.0), MetricKind.WEIGHTED_PRODUCT, action_weight=2.0)
    assert distance(prod, [0.2, 0.5], [0.5, 0.6]) == pytest.approx(0.5)


def test_distance_errors():
    sq = MetricSpace.unit_cube(2)
    with pytest.raises(StructuralError):
        distance(sq, [0.1], [0.2, 0.3])
    with pytest.raises(ConfigurationError):
        distance(sq, [0.1, 2.0], [0.2, 0.3])
    # boundary tolerance
    assert distance(sq, [0.0, 1.0 + 5e-10], [0.0, 1.0]) == pytest.approx(5e-10)


def test_bad_spaces():
    with pytest.raises(ConfigurationError):
        MetricSpace((0.0,), (0.0,))
    with pytest.raises(StructuralError):
        MetricSpace((0.0, 0.0), (1.0,))
    with pytest.raises(ConfigurationError):
        MetricSpace((0.0, 0.0), (1.0, 1.0), "weighted_product", action_weight=-1.0)
    with pytest.raises(ConfigurationError):
        MetricSpace((0.0,), (1.0,), "weighted_product")


def test_ball_volume_constants():
    assert ball_volume_constant(MetricSpace.unit_cube(2)) == pytest.approx(math.pi, rel=1e-15)
    assert ball_volume_constant(MetricSpace.unit_cube(3)) == pytest.approx(4 * math.pi / 3, rel=1e-15)
    assert ball_volume_constant(MetricSpace.unit_cube(1)) == pytest.approx(2.0)
    assert ball_volume_constant(MetricSpace.unit_cube(3, MetricKind.L1)) == pytest.approx(8 / 6)
    with pytest.raises(ConfigurationError):
        ball_volume_constant(MetricSpace((0.0, 0.0), (1.0, 1.0), "weighted_product"))


@pytest.mark.parametrize("kind", [MetricKind.EUCLIDEAN, MetricKind.L1])
@pytest.mark.parametrize("D", [1, 2, 3])
def test_ball_volume_monte_carlo(kind, D):
    rng = np.random.default_rng(D)
    pts = rng.uniform(-1, 1, (400_000, D))
    norm = np.sqrt((pts**2).sum(1)) if kind is MetricKind.EUCLIDEAN else np.abs(pts).sum(1)
    mc = 2.0**D * np.mean(norm <= 1.0)
    assert ball_volume_constant(MetricSpace.unit_cube(D, kind)) == pytest.approx(mc, rel=0.01)


def test_linear_size():
    assert linear_size(MetricSpace.interval(0, 1)).l_X == pytest.approx(0.5)
    # equal-volume disc radius for the unit square
    assert linear_size(MetricSpace.unit_cube(2)).l_X == pytest.approx(0.5641895835477563, rel=1e-12)
    assert linear_size(MetricSpace.interval(0, 4)).l_X == pytest.approx(2.0)
    sp = MetricSpace((0, -1, 2), (3, 1, 2.5))
    c = linear_size(sp)
    assert c.C_DX * c.l_X**3 == pytest.approx(sp.volume, rel=1e-12)


coord = st.floats(0.0, 1.0, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from(["euclidean", "l1", "weighted_product"]),
    st.lists(st.tuples(coord, coord, coord), min_size=3, max_size=3),
    st.floats(0.0, 5.0),
)
def test_metric_axioms(kind, pts, C):
    sp = MetricSpace((0, 0, 0), (1, 1, 1), kind, action_weight=C, state_dims=2 if kind == "weighted_product" else None)
    a, b, c = (np.array(p) for p in pts)
    dab, dba = distance(sp, a, b), distance(sp, b, a)
    assert dab >= 0 and dab == pytest.approx(dba, abs=1e-12)
    assert distance(sp, a, c) <= dab + distance(sp, b, c) + 1e-9
    if C > 0 or kind != "weighted_product":
        assert (dab == 0) == np.array_equal(a, b) or dab < 1e-12


def test_pairwise_matches_distance(rng):
    sp = MetricSpace.unit_cube(2, MetricKind.L1)
    A, B = rng.random((5, 2)), rng.random((4, 2))
    M = pairwise_distances(sp, A, B)
    for i in range(5):
        for j in range(4):
            assert M[i, j] == pytest.approx(np.abs(A[i] - B[j]).sum())
