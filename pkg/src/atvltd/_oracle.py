"""Brute-force oracles and the cross-module invariant suite.

Kept separate from the algorithms they check: everything here works on
explicit state graphs (BFS over single-agent moves) or direct enumeration,
never on the closure maps or the Gray-code scans.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from .game import ConsensusKind, FieldRange, classify_field, is_equilibrium, stubborn_set
from .instances import random_configuration, random_field, random_network
from .lattice import closure, enumerate_equilibria, ireachable_extremes, is_polarizable, lattice_ops
from .network import Configuration, Network, join, leq, local_field, meet
from .robustness import is_indecomposable


def _drive(net: Network, h: Sequence[Fraction], x: Sequence[int], i: int) -> Fraction:
    return local_field(net, i, x) + h[i]


def moves(
    net: Network, h: Sequence[Fraction], x: Configuration, strict: bool, direction: str | None = None
) -> Iterator[Configuration]:
    """Single-agent flips that raise (``strict``) or do not lower the mover's utility."""
    for i in range(net.n):
        if direction == "up" and x[i] == 1 or direction == "down" and x[i] == -1:
            continue
        score = x[i] * _drive(net, h, x, i)  # utility change of the flip is -2*score
        if score < 0 or (not strict and score == 0):
            y = list(x)
            y[i] = -x[i]
            yield tuple(y)


def reachable(
    net: Network, h: Sequence[Fraction], x: Configuration, strict: bool = True, direction: str | None = None
) -> set[Configuration]:
    seen = {tuple(x)}
    queue = deque(seen)
    while queue:
        cur = queue.popleft()
        for y in moves(net, h, cur, strict, direction):
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return seen


def bfs_extreme(net: Network, h: Sequence[Fraction], x: Configuration, direction: str, mode: str) -> Configuration:
    """Join (``up``) or meet (``down``) of everything reachable by monotone moves."""
    found = reachable(net, h, x, strict=mode == "I", direction=direction)
    combine = join if direction == "up" else meet
    it = iter(found)
    acc = next(it)
    for y in it:
        acc = combine(acc, y)
    return acc


def all_configurations(n: int) -> Iterator[Configuration]:
    for k in range(1 << n):
        yield tuple(1 if (k >> i) & 1 else -1 for i in range(n))


@dataclass
class Check:
    name: str
    failures: int = 0
    trials: int = 0
    example: str = ""

    def record(self, ok: bool, detail: Callable[[], str]) -> None:
        self.trials += 1
        if not ok:
            self.failures += 1
            if not self.example:
                self.example = detail()

    @property
    def passed(self) -> bool:
        return self.failures == 0


def run_oracle_suite(max_n: int = 8, instances: int = 200, seed: int = 0) -> list[Check]:
    """Equilibrium-lattice and classification invariants on random instances.

    (a) the enumerated equilibria form a lattice under join/meet maps,
    (b) the closures from the consensus configurations hit the extremes,
    (c) reachable extremes are enumerated equilibria,
    (d) polarizable iff not indecomposable for the point range,
    (e) the consensus class matches the stubborn-set pattern.
    """
    rng = np.random.default_rng(seed)
    checks = {k: Check(k) for k in ("a_lattice", "b_extremes", "c_reachable", "d_polarization", "e_stubborn")}
    for _ in range(instances):
        n = int(rng.integers(1, max_n + 1))
        net = random_network(rng, n)
        h = random_field(rng, net)
        eq = enumerate_equilibria(net, h)
        members = set(eq.members)
        tag = lambda: f"W={net.matrix()} h={h}"  # noqa: E731

        ok = bool(members) and eq.least in members and eq.greatest in members
        ok = ok and all(leq(eq.least, m) and leq(m, eq.greatest) for m in members)
        for x in eq.members:
            for y in eq.members:
                jn, mt = lattice_ops(net, h, x, y)
                uppers = [z for z in members if leq(x, z) and leq(y, z)]
                lowers = [z for z in members if leq(z, x) and leq(z, y)]
                ok = ok and jn in members and mt in members
                ok = ok and all(leq(jn, z) for z in uppers) and all(leq(z, mt) for z in lowers)
        checks["a_lattice"].record(ok, tag)

        lo = closure(net, h, (-1,) * n, "up", "I")[0]
        hi = closure(net, h, (1,) * n, "down", "I")[0]
        checks["b_extremes"].record(lo == eq.least and hi == eq.greatest, tag)

        x = random_configuration(rng, n)
        ok = True
        for mode in ("I", "BR"):
            least, greatest = ireachable_extremes(net, h, x, mode)
            ok = ok and least in members and greatest in members and leq(least, greatest)
        checks["c_reachable"].record(ok, tag)

        pol = is_polarizable(net, h)
        checks["d_polarization"].record(pol == (not is_indecomposable(net, FieldRange(h, h))), tag)

        kind = classify_field(net, h).consensus_kind
        sp, sm = bool(stubborn_set(net, h, 1)), bool(stubborn_set(net, h, -1))
        expected = {
            (False, False): ConsensusKind.REGULAR,
            (True, False): ConsensusKind.BIASED_PLUS,
            (False, True): ConsensusKind.BIASED_MINUS,
            (True, True): ConsensusKind.FRUSTRATED,
        }[(sp, sm)]
        consensus_eq = (is_equilibrium(net, h, (1,) * n), is_equilibrium(net, h, (-1,) * n))
        by_eq = {
            (True, True): ConsensusKind.REGULAR,
            (True, False): ConsensusKind.BIASED_PLUS,
            (False, True): ConsensusKind.BIASED_MINUS,
            (False, False): ConsensusKind.FRUSTRATED,
        }[consensus_eq]
        checks["e_stubborn"].record(kind == expected == by_eq, tag)
    return list(checks.values())
