"""Reference networks and a random instance sampler."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .game import Field, FieldRange
from .network import Network

FIVE_NODE_MATRIX = (
    (0, 1, 0, 0, 0),
    (0, 0, 1, 1, 1),
    (1, 0, 0, 0, 1),
    (0, 1, 0, 0, 1),
    (0, 1, 1, 1, 0),
)


def five_node() -> Network:
    """Five-node worked example; out-degrees (1, 3, 2, 2, 3)."""
    return Network.from_matrix(FIVE_NODE_MATRIX)


def two_node(w1: object, w2: object) -> Network:
    """Two agents linked both ways, ``W[0][1] = w1`` and ``W[1][0] = w2``."""
    return Network.from_edges(2, [(0, 1, w1), (1, 0, w2)])


def seven_node_chain() -> Network:
    """A seven-node graph with out-degrees (3, 1, 3, 3, 3, 3, 3).

    Only the degree vector and the shape of the indecomposability argument
    are known for this example; the edges are a reconstruction.  Node 2
    (0-based 1) points only at node 1; every later node ``k`` sends weight 2
    back into ``{1..k-1}`` and at most 1 forward, which makes the graph
    indecomposable for every field supported on node 1.
    """
    edges = [
        (0, 1, 1), (0, 2, 1), (0, 3, 1),
        (1, 0, 1),
        (2, 0, 1), (2, 1, 1), (2, 3, 1),
        (3, 1, 1), (3, 2, 1), (3, 4, 1),
        (4, 2, 1), (4, 3, 1), (4, 5, 1),
        (5, 3, 1), (5, 4, 1), (5, 6, 1),
        (6, 4, 1), (6, 5, 1), (6, 0, 1),
    ]
    return Network.from_edges(7, edges)


def node_one_range(n: int, alpha: object, beta: object) -> FieldRange:
    """Range ``[(alpha,0,..,0), (beta,0,..,0)]``."""
    lo = [Fraction(0)] * n
    hi = [Fraction(0)] * n
    lo[0] = Fraction(str(alpha)) if isinstance(alpha, float) else Fraction(alpha)
    hi[0] = Fraction(str(beta)) if isinstance(beta, float) else Fraction(beta)
    return FieldRange(tuple(lo), tuple(hi))


# -- random instances ---------------------------------------------------------

_WEIGHTS = (Fraction(1, 2), Fraction(1), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3))


def random_network(rng: np.random.Generator, n: int, density: float | None = None) -> Network:
    """Random digraph with small rational weights."""
    p = rng.uniform(0.25, 0.9) if density is None else density
    edges = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < p:
                edges.append((i, j, _WEIGHTS[rng.integers(len(_WEIGHTS))]))
    return Network.from_edges(n, edges)


def random_field(rng: np.random.Generator, net: Network, spread: float = 1.25) -> Field:
    """Entries drawn on a quarter-integer grid in ``[-spread*w_i - 1, spread*w_i + 1]``."""
    out = []
    for d in net.out_degrees:
        top = int(4 * (spread * float(d) + 1))
        out.append(Fraction(int(rng.integers(-top, top + 1)), 4))
    return tuple(out)


def random_range(rng: np.random.Generator, net: Network, spread: float = 1.25) -> FieldRange:
    a = random_field(rng, net, spread)
    b = random_field(rng, net, spread)
    return FieldRange(tuple(min(u, v) for u, v in zip(a, b)), tuple(max(u, v) for u, v in zip(a, b)))


def random_configuration(rng: np.random.Generator, n: int) -> tuple[int, ...]:
    return tuple(int(v) for v in rng.choice((-1, 1), size=n))


def interior_field(rng: np.random.Generator, r: FieldRange, denominator: int = 8) -> Field:
    """Random rational field inside the range (on a ``1/denominator`` sub-grid of each box side)."""
    out = []
    for lo, hi in zip(r.lower, r.upper):
        t = Fraction(int(rng.integers(0, denominator + 1)), denominator)
        out.append(lo + t * (hi - lo))
    return tuple(out)
