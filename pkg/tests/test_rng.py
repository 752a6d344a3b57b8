from collections import Counter

import pytest

from emsim.rng import SplitMix64


def test_published_vectors_seed_zero():
    # reference outputs of the standard splitmix64 stream from seed 0
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4
    assert rng.next_u64() == 0x06C45D188009454F


def test_published_vectors_other_seed():
    rng = SplitMix64(1234567)
    first = [rng.next_u64() for _ in range(3)]
    again = SplitMix64(1234567)
    assert [again.next_u64() for _ in range(3)] == first
    assert len(set(first)) == 3


def test_random_unit_interval():
    rng = SplitMix64(9)
    xs = [rng.random() for _ in range(1000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert abs(sum(xs) / len(xs) - 0.5) < 0.05


def test_randrange_bounds_and_value_error():
    rng = SplitMix64(5)
    for n in (1, 2, 3, 17):
        assert all(0 <= rng.randrange(n) < n for _ in range(200))
    with pytest.raises(ValueError):
        rng.randrange(0)


def test_randrange_roughly_uniform():
    rng = SplitMix64(11)
    counts = Counter(rng.randrange(4) for _ in range(40000))
    for k in range(4):
        assert abs(counts[k] - 10000) < 500


def test_state_round_trip_and_clone():
    rng = SplitMix64(77)
    rng.next_u64()
    state = rng.getstate()
    a = [rng.next_u64() for _ in range(5)]
    rng.setstate(state)
    b = [rng.next_u64() for _ in range(5)]
    assert a == b
    twin = SplitMix64(0)
    twin.setstate(state)
    assert [twin.next_u64() for _ in range(5)] == a
    rng.setstate(state)
    c = rng.clone()
    assert [c.next_u64() for _ in range(5)] == a
    # the clone advanced; the source did not
    assert rng.getstate() == state


def test_shuffle_and_choice_are_deterministic():
    rng = SplitMix64(3)
    items = list(range(10))
    rng.shuffle(items)
    rng2 = SplitMix64(3)
    items2 = list(range(10))
    rng2.shuffle(items2)
    assert items == items2
    assert sorted(items) == list(range(10))
    assert rng.choice(["a", "b", "c"]) == rng2.choice(["a", "b", "c"])
