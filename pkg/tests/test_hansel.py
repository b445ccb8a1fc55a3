import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.errors import DomainError, GuardExceeded
from src.generators import gp_star_partition, ks_code_cover
from src.graph_core import BicliqueSystem, Side, cover_stats, union_graph
from src.hansel import (
    derandomized_extract,
    enumerate_mean_survivors,
    expected_survivors,
    hansel_lower_bound,
    jensen_bound,
    randomized_extract,
)

from .strategies import partitions

K4_CODE = ks_code_cover(4)
SINGLE_EDGE = BicliqueSystem.from_sets(2, [({1}, {2})])
TWO_EDGES = BicliqueSystem.from_sets(4, [({1}, {2}), ({3}, {4})])


@pytest.mark.parametrize(
    "system, expected",
    [
        (K4_CODE, Fraction(1)),
        (TWO_EDGES, Fraction(2)),
        (BicliqueSystem(3), Fraction(3)),
        (gp_star_partition([1, 1, 1]), Fraction(1)),
    ],
)
def test_expected_survivors(system, expected):
    assert expected_survivors(system) == expected


def test_randomized_extract_on_empty_system_keeps_everything():
    result = randomized_extract(BicliqueSystem(5), seed=17)
    assert result.survivor_list() == [1, 2, 3, 4, 5]


def test_randomized_extract_deletes_the_chosen_side():
    for seed in range(20):
        result = randomized_extract(SINGLE_EDGE, seed)
        expected = [2] if result.deleted_sides == (Side.LEFT,) else [1]
        assert result.survivor_list() == expected


def test_randomized_extract_is_seeded():
    system = ks_code_cover(16)
    assert randomized_extract(system, 5) == randomized_extract(system, 5)


@pytest.mark.parametrize("system, at_least", [(SINGLE_EDGE, 1), (K4_CODE, 1), (TWO_EDGES, 2)])
def test_derandomized_extract_meets_guarantee(system, at_least):
    result = derandomized_extract(system)
    assert result.size >= at_least
    assert union_graph(system).is_independent(result.survivors)


def test_derandomized_extract_on_k4_returns_a_singleton():
    result = derandomized_extract(K4_CODE)
    assert result.size == 1
    assert result.guarantee == 1


def test_derandomized_steps_never_lower_the_expectation():
    result = derandomized_extract(ks_code_cover(12))
    for step in result.steps:
        chosen = step.if_left_deleted if step.deleted is Side.LEFT else step.if_right_deleted
        assert chosen >= step.before
        assert step.if_left_deleted + step.if_right_deleted == 2 * step.before


def test_tie_deletes_left():
    result = derandomized_extract(SINGLE_EDGE)
    assert result.deleted_sides == (Side.LEFT,)
    assert result.survivor_list() == [2]


@pytest.mark.parametrize(
    "system, expected",
    [(K4_CODE, Fraction(1)), (SINGLE_EDGE, Fraction(1)), (BicliqueSystem(3), Fraction(3))],
)
def test_enumerate_mean_survivors(system, expected):
    assert enumerate_mean_survivors(system) == expected


def test_enumeration_is_guarded():
    with pytest.raises(GuardExceeded):
        enumerate_mean_survivors(BicliqueSystem.from_sets(2, [({1}, {2})] * 21))


def test_hansel_lower_bound():
    assert hansel_lower_bound(4, 1) == pytest.approx(8.0)
    assert hansel_lower_bound(8, 2) == pytest.approx(16.0)
    assert hansel_lower_bound(6, 6) == 0.0
    with pytest.raises(DomainError):
        hansel_lower_bound(4, 0)


def test_jensen_bound_under_expectation():
    for k in range(2, 40):
        system = ks_code_cover(k)
        bound = jensen_bound(k, cover_stats(system).weight)
        assert float(expected_survivors(system)) >= bound - 1e-9


@given(partitions(max_m=10))
def test_enumeration_matches_expectation_exactly(system):
    assert enumerate_mean_survivors(system) == expected_survivors(system)


@given(partitions(), st.integers(min_value=0, max_value=2**32))
def test_randomized_survivors_are_independent(system, seed):
    result = randomized_extract(system, seed)
    assert union_graph(system).is_independent(result.survivors)


@given(partitions())
def test_derandomized_extract_beats_jensen(system):
    n = system.universe_n
    result = derandomized_extract(system)
    weight = cover_stats(system).weight
    assert union_graph(system).is_independent(result.survivors)
    assert result.size >= math.ceil(result.guarantee)
    assert result.size >= math.ceil(jensen_bound(n, weight) - 1e-9)


def test_code_covers_up_to_64():
    for k in range(2, 65):
        system = ks_code_cover(k)
        result = derandomized_extract(system)
        assert result.size >= math.ceil(k * 2.0 ** (-cover_stats(system).weight / k) - 1e-9)
        assert union_graph(system).is_independent(result.survivors)
