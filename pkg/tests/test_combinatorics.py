"""Birthday-bound and key-space arithmetic."""

import pytest

from ags.crypto import (
    collision_probability,
    key_space_size,
    smallest_majority_collision_count,
)

from .oracles import product_collision_probability


def test_zero_draws():
    assert collision_probability(0, 365) == 0.0
    assert collision_probability(1, 365) == 0.0


def test_birthday_crossing_at_23():
    assert smallest_majority_collision_count(365) == 23
    for n in range(23):
        assert collision_probability(n, 365) <= 0.5
    assert collision_probability(23, 365) > 0.5


def test_value_at_23_matches_product_oracle():
    ours = collision_probability(23, 365)
    oracle = product_collision_probability(23, 365)
    assert abs(ours - oracle) < 1e-12
    assert abs(ours - 0.5073) < 1e-4


def test_pigeonhole_is_exactly_one():
    assert collision_probability(366, 365) == 1.0
    assert collision_probability(1000, 365) == 1.0


def test_monotone_in_draw_count():
    previous = -1.0
    for n in range(0, 400):
        value = collision_probability(n, 365)
        assert value >= previous
        assert 0.0 <= value <= 1.0
        previous = value


def test_invalid_arguments():
    with pytest.raises(ValueError):
        collision_probability(-1, 365)
    with pytest.raises(ValueError):
        collision_probability(5, 0)


def test_key_space_sizes():
    assert key_space_size(0) == 1
    assert key_space_size(8) == 256
    big = key_space_size(256)
    assert big == 2**256
    assert len(str(big)) == 78
    with pytest.raises(ValueError):
        key_space_size(-1)
