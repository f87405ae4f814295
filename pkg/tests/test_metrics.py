import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reworkopt.metrics import bounds_of, hypervolume, igd, normalize, rpd


def test_normalize_maps_into_unit_square():
    bounds = ((100.0, 100.0), (200.0, 1000.0))
    assert normalize([(150.0, 550.0)], bounds) == [(0.5, 0.5)]
    assert normalize([(100.0, 100.0), (200.0, 1000.0)], bounds) \
        == [(0.0, 0.0), (1.0, 1.0)]


def test_normalize_rejects_flat_axes():
    with pytest.raises(ValueError):
        normalize([(1.0, 1.0)], ((0.0, 5.0), (10.0, 5.0)))
    with pytest.raises(ValueError):
        normalize([(1.0, 1.0)], ((3.0, 0.0), (3.0, 10.0)))


def test_bounds_cover_all_sets():
    a = [(1.0, 9.0), (4.0, 2.0)]
    b = [(0.5, 3.0)]
    assert bounds_of(a, b) == ((0.5, 2.0), (4.0, 9.0))
    with pytest.raises(ValueError):
        bounds_of([], [])


def test_igd_zero_for_identical_sets():
    pts = [(0.1, 0.9), (0.5, 0.5), (0.9, 0.1)]
    assert igd(pts, pts) == 0.0


def test_igd_golden_two_point_case():
    # one reference point matched exactly, the other a unit diagonal away
    ref = [(0.0, 0.0), (1.0, 1.0)]
    approx = [(0.0, 0.0), (2.0, 2.0)]
    assert igd(ref, approx) == pytest.approx((0.0 + math.sqrt(2.0)) / 2,
                                             abs=1e-9)


def test_igd_improves_when_a_closer_point_arrives():
    ref = [(0.0, 0.0), (1.0, 0.0)]
    far = [(3.0, 4.0)]
    nearer = far + [(1.0, 1.0)]
    assert igd(ref, nearer) < igd(ref, far)


def test_igd_rejects_empty_inputs():
    with pytest.raises(ValueError):
        igd([], [(0.0, 0.0)])
    with pytest.raises(ValueError):
        igd([(0.0, 0.0)], [])


def test_hypervolume_single_point_golden():
    assert hypervolume([(0.5, 0.5)]) == pytest.approx(0.25, abs=1e-9)
    assert hypervolume([(0.0, 0.0)]) == pytest.approx(1.0, abs=1e-9)


def test_hypervolume_staircase_golden():
    pts = [(0.2, 0.8), (0.6, 0.4)]
    # (1-0.2)*(1-0.8) + (1-0.6)*(0.8-0.4)
    assert hypervolume(pts) == pytest.approx(0.32, abs=1e-9)
    pts = [(0.2, 0.6), (0.6, 0.2)]
    # (1-0.2)*(1-0.6) + (1-0.6)*(0.6-0.2)
    assert hypervolume(pts) == pytest.approx(0.48, abs=1e-9)


def test_hypervolume_ignores_points_outside_the_box():
    assert hypervolume([(1.0, 0.2)]) == 0.0
    assert hypervolume([(1.5, 0.5), (0.5, 1.5)]) == 0.0
    assert hypervolume([(0.5, 0.5), (2.0, 0.1)]) == pytest.approx(0.25)


def test_hypervolume_absorbs_dominated_points():
    front = [(0.2, 0.6), (0.6, 0.2)]
    padded = front + [(0.7, 0.7), (0.65, 0.3)]
    assert hypervolume(padded) == pytest.approx(hypervolume(front), abs=1e-12)


def test_hypervolume_order_invariant():
    pts = [(0.1, 0.7), (0.3, 0.5), (0.8, 0.2), (0.4, 0.9)]
    base = hypervolume(pts)
    rng = random.Random(5)
    for _ in range(10):
        shuffled = list(pts)
        rng.shuffle(shuffled)
        assert hypervolume(shuffled) == pytest.approx(base, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.floats(0.0, 1.0), st.floats(0.0, 1.0)),
                min_size=1, max_size=8),
       st.tuples(st.floats(0.0, 1.0), st.floats(0.0, 1.0)))
def test_hypervolume_grows_when_a_point_is_added(pts, extra):
    assert hypervolume(pts + [extra]) >= hypervolume(pts) - 1e-12


def test_rpd_golden():
    assert rpd(100.0, 100.0) == 0.0
    assert rpd(110.0, 100.0) == pytest.approx(10.0, abs=1e-9)
    assert rpd(95.0, 100.0) == pytest.approx(-5.0, abs=1e-9)
    with pytest.raises(ValueError):
        rpd(10.0, 0.0)
    with pytest.raises(ValueError):
        rpd(10.0, -3.0)
