import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from atvltd._oracle import all_configurations, bfs_extreme, moves, reachable
from atvltd.game import is_equilibrium, zero_field
from atvltd.instances import random_configuration, random_field, random_network
from atvltd.lattice import (
    AdmissiblePath,
    NotAnEquilibrium,
    check_path,
    closure,
    enumerate_equilibria,
    ireachable_extremes,
    is_polarizable,
    lattice_ops,
)
from atvltd.network import Network, join, leq, meet

ZERO5 = zero_field(5)
MINUS5, PLUS5 = (-1,) * 5, (1,) * 5
X_STAR = (-1, -1, -1, 1, 1)
H_STAR = (0, -1, 0, 0, 1)


def _instance(seed, max_n=7):
    rng = np.random.default_rng(seed)
    net = random_network(rng, int(rng.integers(1, max_n + 1)))
    return rng, net, random_field(rng, net)


def test_closure_examples(g5):
    end, path = closure(g5, ZERO5, MINUS5, "up", "I")
    assert end == MINUS5 and len(path) == 0

    # h <= w keeps -1 frozen; starting one flip higher the cascade runs to +1
    h = (0, 2, 0, 0, 2)
    assert closure(g5, h, MINUS5, "up", "I")[0] == MINUS5 == bfs_extreme(g5, h, MINUS5, "up", "I")
    start = (-1, -1, -1, 1, 1)
    end, path = closure(g5, h, start, "up", "I")
    assert end == PLUS5 == bfs_extreme(g5, h, start, "up", "I")
    assert check_path(g5, h, path) and path.monotone and path.end == end

    end, path = closure(g5, ZERO5, X_STAR, "up", "BR")
    assert end == PLUS5 == bfs_extreme(g5, ZERO5, X_STAR, "up", "BR")
    assert check_path(g5, ZERO5, path, strict=False)
    assert not check_path(g5, ZERO5, path, strict=True)


def test_closure_rejects_bad_mode(g5):
    with pytest.raises(ValueError):
        closure(g5, ZERO5, MINUS5, "sideways")


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closure_matches_bfs_oracle(seed):
    rng, net, h = _instance(seed)
    x = random_configuration(rng, net.n)
    for direction in ("up", "down"):
        for mode in ("I", "BR"):
            end, path = closure(net, h, x, direction, mode)
            assert end == bfs_extreme(net, h, x, direction, mode)
            assert path.start == x and path.end == end
            assert check_path(net, h, path, strict=mode == "I")
            flips = {a for _, a in path.steps}
            assert flips <= {1 if direction == "up" else -1}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_closure_is_order_independent(seed):
    rng, net, h = _instance(seed, max_n=9)
    x = random_configuration(rng, net.n)
    ref = {(d, m): closure(net, h, x, d, m)[0] for d in ("up", "down") for m in ("I", "BR")}
    for _ in range(50):
        order = [int(v) for v in rng.permutation(net.n)]
        for (d, m), end in ref.items():
            assert closure(net, h, x, d, m, order=order)[0] == end


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_maps_are_monotone(seed):
    rng, net, h = _instance(seed)
    x, y = random_configuration(rng, net.n), random_configuration(rng, net.n)
    lo, hi = meet(x, y), join(x, y)
    for d in ("up", "down"):
        for m in ("I", "BR"):
            assert leq(closure(net, h, lo, d, m)[0], closure(net, h, hi, d, m)[0])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_reachable_extremes_match_oracle(seed):
    rng, net, h = _instance(seed)
    eq = set(enumerate_equilibria(net, h).members)
    x = random_configuration(rng, net.n)
    for mode, strict in (("I", True), ("BR", False)):
        hit = [z for z in reachable(net, h, x, strict=strict) if z in eq]
        least, greatest = ireachable_extremes(net, h, x, mode)
        assert least in hit and greatest in hit
        assert all(leq(least, z) and leq(z, greatest) for z in hit)


def test_extremes_of_fixed_point(g5):
    assert ireachable_extremes(g5, H_STAR, X_STAR) == (X_STAR, X_STAR)
    eq = enumerate_equilibria(g5, ZERO5)
    least, greatest = ireachable_extremes(g5, ZERO5, (-1, 1, -1, 1, -1))
    assert least in eq and greatest in eq


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_equilibria_are_their_own_extremes(seed):
    _, net, h = _instance(seed)
    for x in enumerate_equilibria(net, h).members[:8]:
        assert ireachable_extremes(net, h, x) == (x, x)


def test_lattice_ops_examples(g5):
    assert lattice_ops(g5, ZERO5, PLUS5, MINUS5) == (PLUS5, MINUS5)
    assert lattice_ops(g5, H_STAR, X_STAR, X_STAR) == (X_STAR, X_STAR)
    with pytest.raises(NotAnEquilibrium):
        lattice_ops(g5, ZERO5, X_STAR, PLUS5)


def test_lattice_ops_against_scan():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 25:
        net = random_network(rng, 6)
        h = random_field(rng, net)
        eq = enumerate_equilibria(net, h).members
        if len(eq) < 3:
            continue
        checked += 1
        for x in eq:
            for y in eq:
                jn, mt = lattice_ops(net, h, x, y)
                uppers = [z for z in eq if leq(x, z) and leq(y, z)]
                lowers = [z for z in eq if leq(z, x) and leq(z, y)]
                assert jn in uppers and all(leq(jn, z) for z in uppers)
                assert mt in lowers and all(leq(z, mt) for z in lowers)


def test_enumeration_examples(g5):
    assert set(enumerate_equilibria(g5, ZERO5).members) == {MINUS5, PLUS5}
    assert X_STAR in enumerate_equilibria(g5, H_STAR)
    lone = enumerate_equilibria(Network.from_edges(1, []), (0,))
    assert set(lone.members) == {(-1,), (1,)} and lone.coexistent == ()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_enumeration_matches_direct_test(seed):
    _, net, h = _instance(seed, max_n=6)
    eq = set(enumerate_equilibria(net, h).members)
    assert eq == {x for x in all_configurations(net.n) if is_equilibrium(net, h, x)}


def test_enumeration_cap(g5):
    from atvltd.config import CapExceeded

    with pytest.raises(CapExceeded):
        enumerate_equilibria(g5, ZERO5, cap=4)


def test_polarizable_examples(g5):
    assert is_polarizable(g5, (1, 0, 0, 0, 0))
    assert not is_polarizable(g5, ZERO5)
    assert not is_polarizable(g5, (10,) * 5)


def test_polarizable_fallback_beyond_cap(g5):
    from atvltd.config import Settings, set_settings

    set_settings(Settings(max_enumeration_nodes=3))
    assert is_polarizable(g5, (1, 0, 0, 0, 0))
    assert not is_polarizable(g5, ZERO5)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_improvement_paths_end_in_equilibria(seed):
    # every sink of the strict-improvement move graph is an equilibrium, and
    # with a unique equilibrium every configuration reaches it
    rng, net, h = _instance(seed, max_n=6)
    eq = enumerate_equilibria(net, h)
    for x in all_configurations(net.n):
        if next(moves(net, h, x, strict=True), None) is None:
            assert x in eq
    if len(eq) == 1:
        target = eq.members[0]
        for x in all_configurations(net.n):
            assert target in reachable(net, h, x, strict=True)
            assert target in reachable(net, h, x, strict=False)


def test_path_serialisation():
    p = AdmissiblePath(start=(-1, -1), steps=((1, 1),), monotone=True, improvement=True)
    assert p.to_dict()["steps"] == [[2, 1]]
    assert p.end == (-1, 1) and len(p) == 1
