"""Samplers shared by the unit and acceptance tests."""

import itertools

import numpy as np

from atvltd.game import FieldRange
from atvltd.instances import random_network, random_range
from atvltd.robustness import is_indecomposable


def corners(r: FieldRange, rng: np.random.Generator, limit: int = 256):
    """Corner fields of the box; all of them when there are at most ``limit``, else a random sample."""
    free = [i for i in range(r.n) if r.lower[i] != r.upper[i]]
    if 2 ** len(free) <= limit:
        picks = itertools.product((0, 1), repeat=len(free))
    else:
        picks = (tuple(int(b) for b in rng.integers(0, 2, len(free))) for _ in range(limit))
    for bits in picks:
        h = list(r.lower)
        for i, b in zip(free, bits):
            if b:
                h[i] = r.upper[i]
        yield tuple(h)


def indecomposable_instances(rng: np.random.Generator, count: int, max_n: int = 10):
    """``count`` random (network, range) pairs that pass the indecomposability scan."""
    found = 0
    while found < count:
        n = int(rng.integers(2, max_n + 1))
        net = random_network(rng, n)
        r = random_range(rng, net, spread=float(rng.choice([0.25, 0.5, 1.0])))
        if is_indecomposable(net, r):
            found += 1
            yield net, r
