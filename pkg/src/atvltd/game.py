"""Network coordination game with an external field.

Player ``i`` earns ``u_i(x) = x_i * (sum_j W_ij x_j + h_i)``.  The game is
supermodular, its best responses are threshold rules, and its pure Nash
equilibria are exactly the fixed points of the linear threshold dynamics
under a constant field.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .network import Configuration, Network, check_configuration, local_field, parse_rational_any

Field = tuple[Fraction, ...]


def as_field(values: Sequence[object], n: int | None = None) -> Field:
    h = tuple(parse_rational_any(v) for v in values)
    if n is not None and len(h) != n:
        raise ValueError(f"field has length {len(h)}, expected {n}")
    return h


def zero_field(n: int) -> Field:
    return (Fraction(0),) * n


@dataclass(frozen=True)
class FieldRange:
    """Hyper-rectangle ``{h : lower <= h <= upper}`` of admissible fields."""

    lower: Field
    upper: Field

    def __post_init__(self) -> None:
        object.__setattr__(self, "lower", as_field(self.lower))
        object.__setattr__(self, "upper", as_field(self.upper))
        if len(self.lower) != len(self.upper):
            raise ValueError("range bounds have different lengths")
        if any(a > b for a, b in zip(self.lower, self.upper)):
            raise ValueError("range needs lower <= upper entrywise")

    @classmethod
    def point(cls, h: Sequence[object]) -> "FieldRange":
        return cls(as_field(h), as_field(h))

    @property
    def n(self) -> int:
        return len(self.lower)

    def contains(self, h: Sequence[Fraction]) -> bool:
        return len(h) == self.n and all(a <= v <= b for a, v, b in zip(self.lower, h, self.upper))

    def bound(self, s: int) -> Field:
        """``upper`` for ``s=+1``, ``lower`` for ``s=-1``."""
        return self.upper if s == 1 else self.lower

    def for_configuration(self, x: Sequence[int]) -> Field:
        """Field taking, at each agent, the bound on the side of its current action."""
        return tuple(self.upper[i] if v == 1 else self.lower[i] for i, v in enumerate(x))


class ConsensusKind(enum.Enum):
    REGULAR = "Regular"
    BIASED_PLUS = "BiasedPlus"
    BIASED_MINUS = "BiasedMinus"
    FRUSTRATED = "Frustrated"
    MIXED = "Mixed"  # classify_range only: no robust class applies

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class GameClass:
    consensus_kind: ConsensusKind
    polarizable: bool
    robust: bool = False

    def __str__(self) -> str:
        if self.robust:
            kind = "Mixed" if self.consensus_kind is ConsensusKind.MIXED else f"Robustly {self.consensus_kind}"
            pol = "polarizable for some field" if self.polarizable else "robustly unpolarizable"
            return f"{kind}, {pol}"
        pol = "polarizable" if self.polarizable else "unpolarizable"
        return f"{self.consensus_kind}, {pol}"


def _check(net: Network, h: Sequence[Fraction], x: Sequence[int] | None = None) -> None:
    if len(h) != net.n:
        raise ValueError(f"field has length {len(h)}, expected {net.n}")
    if x is not None:
        check_configuration(x, net.n)


def utility(net: Network, h: Sequence[Fraction], x: Sequence[int], i: int) -> Fraction:
    _check(net, h, x)
    return x[i] * (local_field(net, i, x) + h[i])


def best_response(net: Network, h: Sequence[Fraction], x: Sequence[int], i: int) -> frozenset[int]:
    """Best-response set of agent ``i`` against ``x_{-i}``.

    ``sign(sum_j W_ij x_j + h_i)``, i.e. compare ``w_i^+(x)`` with the
    threshold ``(w_i - h_i)/2``; a tie gives both actions.  This form stays
    defined for agents with zero out-degree.
    """
    _check(net, h, x)
    drive = local_field(net, i, x) + h[i]
    if drive > 0:
        return frozenset({1})
    if drive < 0:
        return frozenset({-1})
    return frozenset({-1, 1})


def is_equilibrium(net: Network, h: Sequence[Fraction], x: Sequence[int], strict: bool = False) -> bool:
    """Nash test ``u_i(x) >= 0`` for all ``i`` (``> 0`` when ``strict``).

    ``u_i(x) > 0`` is the same as a singleton best response ``{x_i}``, so
    isolated agents with zero field are never strict.
    """
    _check(net, h, x)
    for i in range(net.n):
        u = x[i] * (local_field(net, i, x) + h[i])
        if u < 0 or (strict and u == 0):
            return False
    return True


def stubborn_set(net: Network, h: Sequence[Fraction], a: int) -> frozenset[int]:
    """Agents for which action ``a`` is strictly dominant: ``a*h_i > w_i``."""
    _check(net, h)
    if a not in (1, -1):
        raise ValueError("action must be +1 or -1")
    return frozenset(i for i in range(net.n) if a * h[i] > net.out_degrees[i])


def _geq(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    return all(a >= b for a, b in zip(u, v))


def _consensus_kind(w: Sequence[Fraction], h: Sequence[Fraction]) -> ConsensusKind:
    neg_h = [-v for v in h]
    if _geq(w, h) and _geq(w, neg_h):
        return ConsensusKind.REGULAR
    if _geq(w, neg_h) and not _geq(w, h):
        return ConsensusKind.BIASED_PLUS
    if _geq(w, h) and not _geq(w, neg_h):
        return ConsensusKind.BIASED_MINUS
    return ConsensusKind.FRUSTRATED


def classify_field(net: Network, h: Sequence[Fraction]) -> GameClass:
    """Regular / biased / frustrated by the out-degree inequalities, plus polarizability."""
    from .robustness import is_indecomposable

    h = as_field(h, net.n)
    kind = _consensus_kind(net.out_degrees, h)
    return GameClass(kind, polarizable=not is_indecomposable(net, FieldRange(h, h)))


def robust_consensus_kind(net: Network, rng: FieldRange) -> ConsensusKind:
    w = net.out_degrees
    lo, hi = rng.lower, rng.upper
    neg = lambda v: [-a for a in v]  # noqa: E731
    if _geq(w, hi) and _geq(w, neg(lo)):
        return ConsensusKind.REGULAR
    # a = +1 looks at h^-, a = -1 at h^+
    if _geq(w, neg(lo)) and not _geq(w, lo):
        return ConsensusKind.BIASED_PLUS
    if _geq(w, hi) and not _geq(w, neg(hi)):
        return ConsensusKind.BIASED_MINUS
    if not _geq(w, neg(hi)) and not _geq(w, lo):
        return ConsensusKind.FRUSTRATED
    return ConsensusKind.MIXED


def classify_range(net: Network, rng: FieldRange) -> GameClass:
    """Class that holds for every field in the range, or ``MIXED``."""
    from .robustness import is_indecomposable

    if rng.n != net.n:
        raise ValueError("range dimension does not match network")
    return GameClass(
        robust_consensus_kind(net, rng),
        polarizable=not is_indecomposable(net, rng),
        robust=True,
    )
