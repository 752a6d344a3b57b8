import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emsim.gram import RuleKind, classify_rule, gram_new, gram_step
from emsim.symbols import make_alphabet


@pytest.fixture()
def world():
    a = make_alphabet("addr", ["1", "2", "3"])
    d = make_alphabet("data", ["x", "y"])
    return a, d, gram_new(a, d)


def test_fresh_world_reads_empty(world):
    a, d, g = world
    for addr in a.members:
        g, dout = gram_step(g, addr, d.epsilon)
        assert dout.is_empty


def test_write_echoes_and_read_returns_last_write(world):
    a, d, g = world
    g, dout = gram_step(g, a.symbol("2"), d.symbol("x"))
    assert dout == d.symbol("x")
    g, dout = gram_step(g, a.symbol("2"), d.epsilon)
    assert dout == d.symbol("x")
    g, dout = gram_step(g, a.symbol("2"), d.symbol("y"))
    assert dout == d.symbol("y")
    g, dout = gram_step(g, a.symbol("2"), d.epsilon)
    assert dout == d.symbol("y")
    # the other cells were never written
    g, dout = gram_step(g, a.symbol("1"), d.epsilon)
    assert dout.is_empty


def test_states_are_values_not_aliases(world):
    a, d, g0 = world
    g1, _ = gram_step(g0, a.symbol("1"), d.symbol("x"))
    assert g0.mem != g1.mem
    # a read returns the same state object
    g2, _ = gram_step(g1, a.symbol("1"), d.epsilon)
    assert g2 is g1


def test_rule_classification(world):
    a, d, _ = world
    assert classify_rule(a.symbol("1"), d.symbol("x")) is RuleKind.FIXED
    assert classify_rule(a.symbol("1"), d.epsilon) is RuleKind.VARIABLE
    with pytest.raises(ValueError):
        classify_rule(a.epsilon, d.symbol("x"))


def test_empty_address_rejected(world):
    a, d, g = world
    with pytest.raises(ValueError):
        gram_step(g, a.epsilon, d.symbol("x"))


def test_alphabet_identity_enforced(world):
    a, d, g = world
    other = make_alphabet("data", ["x", "y"])
    with pytest.raises(TypeError):
        gram_step(g, a.symbol("1"), other.symbol("x"))
    with pytest.raises(TypeError):
        gram_step(g, d.symbol("x"), d.symbol("x"))


def test_output_translation_table():
    a = make_alphabet("addr", ["1"])
    d = make_alphabet("data", ["x", "y"])
    g = gram_new(a, d, out_map={d.symbol("x"): d.symbol("y")})
    g, dout = gram_step(g, a.symbol("1"), d.symbol("x"))
    assert dout == d.symbol("y")  # translated on the way out
    g, dout = gram_step(g, a.symbol("1"), d.epsilon)
    assert dout == d.symbol("y")  # memory holds x, the map rewrites reads too


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 2)), max_size=60))
def test_read_after_write_law(ops):
    """A read returns the most recent write to the same address, empty if
    none; checked against a brute-force event log."""
    a = make_alphabet("addr", ["1", "2", "3", "4"])
    d = make_alphabet("data", ["x", "y"])
    g = gram_new(a, d)
    log: list[tuple[int, int]] = []
    for ai, di in ops:
        addr = a.members[ai]
        din = d.epsilon if di == 0 else d.members[di - 1]
        g, dout = gram_step(g, addr, din)
        if di != 0:
            log.append((ai, di))
            assert dout == din  # writes echo
        else:
            last = [w for w in log if w[0] == ai]
            expected = d.epsilon if not last else d.members[last[-1][1] - 1]
            assert dout == expected
