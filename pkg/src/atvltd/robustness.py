"""Robust indecomposability and robust improvement paths.

A labelled partition ``V = V+ | V-`` *decomposes* the network over a field
range when no agent wants to leave its side under the least favourable
field, i.e. for every ``i`` in ``V^s``::

    w_i^s + s*h_i^s >= w_i^{-s}

where ``s*h^s`` reads ``+h_upper_i`` on the plus side and ``-h_lower_i`` on
the minus side.  The network is indecomposable when no nontrivial partition
decomposes it.  Partitions are labelled: swapping the sides changes which
bound is used, so all ``2**n - 2`` of them are scanned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .config import require_cap
from .game import Field, FieldRange, as_field, is_equilibrium, stubborn_set
from .lattice import AdmissiblePath, closure
from .network import Configuration, Network, check_configuration, consensus, scaled_integers


def gray_flips(m: int) -> Iterator[int]:
    """Bit flipped at each step of the reflected Gray code over ``m`` bits.

    Step ``k`` (1-based) flips bit ``ctz(k)``; ``2**m - 1`` steps visit every
    nonzero mask once.
    """
    for k in range(1, 1 << m):
        yield (k & -k).bit_length() - 1


@dataclass(frozen=True)
class Indecomposability:
    """Result of :func:`is_indecomposable`; truthy iff indecomposable."""

    indecomposable: bool
    partition_plus: frozenset[int] | None = None
    partition_minus: frozenset[int] | None = None

    def __bool__(self) -> bool:
        return self.indecomposable


@dataclass(frozen=True)
class DecompositionWitness:
    partition_plus: frozenset[int]
    partition_minus: frozenset[int]
    field_star: Field
    config_star: Configuration

    def to_dict(self, one_based: bool = True) -> dict:
        from .network import format_rational

        off = 1 if one_based else 0
        return {
            "partition_plus": sorted(i + off for i in self.partition_plus),
            "partition_minus": sorted(i + off for i in self.partition_minus),
            "h_star": [format_rational(v) for v in self.field_star],
            "x_star": list(self.config_star),
        }


class NotIndecomposable(ValueError):
    def __init__(self, result: Indecomposability):
        self.result = result
        plus = sorted(i + 1 for i in result.partition_plus or ())
        minus = sorted(i + 1 for i in result.partition_minus or ())
        super().__init__(f"network decomposes over the range: V+={plus} V-={minus}")


def _check_range(net: Network, rng: FieldRange) -> None:
    if rng.n != net.n:
        raise ValueError(f"range has dimension {rng.n}, network has {net.n} nodes")


def is_indecomposable(net: Network, rng: FieldRange, cap: int | None = None) -> Indecomposability:
    """Scan all nontrivial labelled partitions in Gray-code order.

    Each step moves one node across; only that node and its in-neighbours
    change status, so the scan keeps a running count of nodes that would
    leave their side.  The first decomposing partition met is returned.
    """
    _check_range(net, rng)
    n = net.n
    require_cap(n, cap, "indecomposability check", "max_partition_nodes")
    _, out, deg, (lo, hi) = scaled_integers(net, rng.lower, rng.upper)
    in_edges: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, row in enumerate(out):
        for j, w in row:
            in_edges[j].append((i, w))

    plus = [False] * n
    wplus = [0] * n

    def stays(i: int) -> bool:
        if plus[i]:
            return 2 * wplus[i] + hi[i] - deg[i] >= 0
        return deg[i] - 2 * wplus[i] - lo[i] >= 0

    status = [stays(i) for i in range(n)]
    leaving = status.count(False)
    size = 0
    for b in gray_flips(n):
        plus[b] = not plus[b]
        size += 1 if plus[b] else -1
        sign = 1 if plus[b] else -1
        touched = [b]
        for i, w in in_edges[b]:
            wplus[i] += sign * w
            touched.append(i)
        for i in touched:
            now = stays(i)
            if now != status[i]:
                leaving += -1 if now else 1
                status[i] = now
        if leaving == 0 and 0 < size < n:
            vp = frozenset(i for i in range(n) if plus[i])
            return Indecomposability(False, vp, frozenset(range(n)) - vp)
    return Indecomposability(True)


def partition_decomposes(net: Network, rng: FieldRange, partition_plus: Iterable[int]) -> bool:
    """Direct (non-incremental) test of one labelled partition."""
    _check_range(net, rng)
    vp = set(partition_plus)
    for i in range(net.n):
        s = 1 if i in vp else -1
        same = sum((w for j, w in net.out_edges[i] if (j in vp) == (s == 1)), Fraction(0))
        other = net.out_degrees[i] - same
        if same + s * rng.bound(s)[i] < other:
            return False
    return True


def decomposition_witness(net: Network, rng: FieldRange, cap: int | None = None) -> DecompositionWitness | None:
    """Field in the range and coexistent configuration that is frozen under it, if any."""
    res = is_indecomposable(net, rng, cap)
    if res:
        return None
    vp = res.partition_plus
    assert vp is not None and res.partition_minus is not None
    h_star = tuple(rng.upper[i] if i in vp else rng.lower[i] for i in range(net.n))
    x_star = tuple(1 if i in vp else -1 for i in range(net.n))
    if not is_equilibrium(net, h_star, x_star):
        raise AssertionError("decomposing partition did not yield an equilibrium")
    return DecompositionWitness(vp, res.partition_minus, h_star, x_star)


def robust_consensus_path(net: Network, rng: FieldRange, x: Sequence[int]) -> AdmissiblePath:
    """Single flip sequence from ``x`` to a consensus that strictly improves under every field in the range.

    Takes the field that is worst for each agent's current action, finds the
    extremal equilibria reachable from ``x`` under it, and replays the
    monotone climb under the lower bound (or the anti-monotone descent under
    the upper bound).  Lower/upper bounds are the tightest fields for an
    up/down flip, so a strict improvement there is one everywhere.  When both
    consensus configurations are reachable the climb to +1 is returned.
    """
    _check_range(net, rng)
    x = check_configuration(x, net.n)
    res = is_indecomposable(net, rng)
    if not res:
        raise NotIndecomposable(res)
    n = net.n
    hx = rng.for_configuration(x)
    up, _ = closure(net, hx, x, "up", "I")
    down, _ = closure(net, hx, x, "down", "I")
    greatest, _ = closure(net, hx, up, "down", "I")
    least, _ = closure(net, hx, down, "up", "I")
    if greatest == consensus(n, 1):
        end, path = closure(net, rng.lower, x, "up", "I")
        target = 1
    elif least == consensus(n, -1):
        end, path = closure(net, rng.upper, x, "down", "I")
        target = -1
    else:
        raise AssertionError("reachable equilibria are not consensus despite indecomposability")
    if end != consensus(n, target):
        raise AssertionError("closure under the range bound missed the consensus")
    return path


def cohesive_check(net: Network, subset: Iterable[int], r: Fraction | int | str) -> tuple[bool, bool]:
    """``(cohesive, closed)``: every member keeps ``>= r`` of its out-weight inside the
    subset; the complement is ``(1 - r)``-cohesive."""
    r = as_field([r])[0]
    if not 0 <= r <= 1:
        raise ValueError("r must lie in [0, 1]")
    members = frozenset(subset)
    if any(not 0 <= i < net.n for i in members):
        raise IndexError("subset contains an unknown node")
    rest = frozenset(range(net.n)) - members

    def cohesive(s: frozenset[int], q: Fraction) -> bool:
        return all(
            sum((w for j, w in net.out_edges[i] if j in s), Fraction(0)) >= q * net.out_degrees[i] for i in s
        )

    return cohesive(members, r), cohesive(rest, 1 - r)


def unique_biased_check(net: Network, h: Sequence[Fraction], a: int, cap: int | None = None) -> bool:
    """Whether ``a*1`` is the unique equilibrium, via the subset criterion.

    Needs some ``a``-stubborn agent, and every nonempty ``R`` among the
    remaining agents must contain a node with ``w_i^R < w_i^{V-R} + a*h_i``.
    """
    h = as_field(h, net.n)
    stub = stubborn_set(net, h, a)
    if not stub:
        return False
    free = [i for i in range(net.n) if i not in stub]
    require_cap(len(free), cap, "biased-uniqueness check", "max_subset_nodes")
    if not free:
        return True
    _, out, deg, (hint,) = scaled_integers(net, h)
    pos = {v: k for k, v in enumerate(free)}
    in_free: list[list[tuple[int, int]]] = [[] for _ in free]
    for i in free:
        for j, w in out[i]:
            if j in pos:
                in_free[pos[j]].append((pos[i], w))
    m = len(free)
    member = [False] * m
    w_r = [0] * m

    # node k in R is "escaping" when 2*w^R - w - a*h < 0
    def escaping(k: int) -> bool:
        i = free[k]
        return 2 * w_r[k] - deg[i] - a * hint[i] < 0

    esc = [False] * m
    count = 0
    size = 0
    for b in gray_flips(m):
        member[b] = not member[b]
        size += 1 if member[b] else -1
        sign = 1 if member[b] else -1
        touched = [b]
        for k, w in in_free[b]:
            w_r[k] += sign * w
            touched.append(k)
        for k in touched:
            now = member[k] and escaping(k)
            if now != esc[k]:
                count += 1 if now else -1
                esc[k] = now
        if size > 0 and count == 0:
            return False
    return True
