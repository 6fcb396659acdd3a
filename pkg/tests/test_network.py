from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atvltd.instances import FIVE_NODE_MATRIX, random_network
from atvltd.network import (
    Network,
    ParseError,
    format_network,
    join,
    leq,
    local_field,
    meet,
    parse_configuration,
    parse_network,
    parse_rational,
    restricted_out_degree,
    scaled_integers,
    split_weights,
)

X_STAR = (-1, -1, -1, 1, 1)


def test_five_node_file_gives_out_degrees(g5):
    text = format_network(g5)
    net = parse_network(text)
    assert net.out_degrees == tuple(Fraction(v) for v in (1, 3, 2, 2, 3))
    assert net.matrix() == [[Fraction(v) for v in row] for row in FIVE_NODE_MATRIX]


def test_isolated_single_node():
    net = parse_network("n 1\n")
    assert net.n == 1 and net.out_degrees == (0,)


@pytest.mark.parametrize("text, line", [
    ("n 2\ne 1 1 2\n", 2),
    ("n 2\ne 1 2 -1\n", 2),
    ("n 2\ne 1 3 1\n", 2),
    ("n 2\ne 1 2 1\ne 1 2 1\n", 3),
    ("n 2\ne 1 2 1.5e3\n", 2),
    ("e 1 2 1\n", 1),
])
def test_bad_files_name_the_line(text, line):
    with pytest.raises(ParseError) as info:
        parse_network(text)
    assert info.value.line == line


def test_comments_and_fractions():
    net = parse_network("# demo\nn 3\n\ne 1 2 1/2  # half\ne 3 1 2\n")
    assert net.weight(0, 1) == Fraction(1, 2)
    assert net.out_degrees == (Fraction(1, 2), 0, 2)


def test_from_matrix_rejects_diagonal():
    with pytest.raises(ValueError):
        Network.from_matrix([[1, 0], [0, 0]])


def test_restricted_degree_examples(g5):
    assert restricted_out_degree(g5, 1, {2, 3, 4}) == 3
    assert restricted_out_degree(g5, 4, {1, 3}) == 2
    assert restricted_out_degree(g5, 0, set()) == 0


def test_split_weights_examples(g5):
    assert split_weights(g5, 1, X_STAR) == (1, 2)
    assert split_weights(g5, 4, X_STAR) == (2, 1)
    for i in range(5):
        assert split_weights(g5, i, (1,) * 5) == (0, g5.out_degrees[i])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_restricted_degree_is_additive(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    net = random_network(rng, n)
    a = {i for i in range(n) if rng.random() < 0.5}
    b = set(range(n)) - a
    for i in range(n):
        assert restricted_out_degree(net, i, a) + restricted_out_degree(net, i, b) == net.out_degrees[i]
        x = tuple(1 if j in a else -1 for j in range(n))
        wm, wp = split_weights(net, i, x)
        assert wp - wm == local_field(net, i, x)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_format_parse_round_trip(seed):
    rng = np.random.default_rng(seed)
    net = random_network(rng, int(rng.integers(1, 9)))
    text = format_network(net)
    assert parse_network(text) == net
    assert format_network(parse_network(text)) == text


def test_parse_rational_rejects_floats():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("2.5") == Fraction(5, 2)
    with pytest.raises(ValueError):
        parse_rational(0.1)
    with pytest.raises(ValueError):
        parse_rational("1.5/2")
    with pytest.raises(ValueError):
        parse_rational("1/0")


def test_order_operations():
    x, y = (1, -1, -1), (-1, -1, 1)
    assert join(x, y) == (1, -1, 1)
    assert meet(x, y) == (-1, -1, -1)
    assert leq(meet(x, y), x) and leq(x, join(x, y)) and not leq(x, y)
    assert parse_configuration("-1, 1,+1") == (-1, 1, 1)
    with pytest.raises(ValueError):
        parse_configuration("1,0")


def test_scaled_integers_preserve_signs(g5):
    h = (Fraction(1, 3), Fraction(-1, 2), 0, 0, 0)
    scale, out, deg, (hi,) = scaled_integers(g5, h)
    assert scale == 6 and hi[:2] == [2, -3]
    assert deg == [int(6 * w) for w in g5.out_degrees]
