"""Exact-weight directed networks and +/-1 configurations.

Weights are stored as :class:`fractions.Fraction` so that every sign test
downstream (update rule, equilibrium test, partition conditions) is exact.
Agents are indexed ``0..n-1`` in the Python API; the edge-list file format
and CLI output use ``1..n``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

Configuration = tuple[int, ...]

_RATIONAL_RE = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)(/\d+)?$")


class ParseError(ValueError):
    """Malformed input document; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"3"``, ``"-0.5"`` or ``"3/7"`` into an exact Fraction.

    Floats are rejected: they are usually the sign of an accidental
    round-trip through binary arithmetic.
    """
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    if not _RATIONAL_RE.match(s) or ("/" in s and "." in s):
        raise ValueError(f"not a decimal or fraction: {text!r}")
    try:
        return Fraction(s)
    except ZeroDivisionError:
        raise ValueError(f"zero denominator: {text!r}") from None


def parse_rational_any(value: object) -> Fraction:
    """Like :func:`parse_rational` but also accepts ints and Fractions directly."""
    return parse_rational(value) if isinstance(value, str) else Fraction(value)  # type: ignore[arg-type]


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Network:
    """Weighted digraph with zero diagonal and nonnegative weights.

    ``W[i][j] > 0`` is a link from ``i`` to ``j``: agent ``j`` influences
    agent ``i``.  Only positive weights are stored.
    """

    n: int
    out_edges: tuple[tuple[tuple[int, Fraction], ...], ...]
    in_edges: tuple[tuple[tuple[int, Fraction], ...], ...] = field(repr=False, compare=False)
    out_degrees: tuple[Fraction, ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, object]]) -> "Network":
        """Build from ``(i, j, weight)`` triples with 0-based ids.

        Zero weights are accepted and dropped; duplicates, self-loops and
        negative weights raise ``ValueError``.
        """
        if n < 1:
            raise ValueError("a network needs at least one node")
        weights: dict[tuple[int, int], Fraction] = {}
        for i, j, w in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"node id out of range in edge ({i}, {j})")
            if i == j:
                raise ValueError(f"self-loop at node {i}")
            wq = parse_rational_any(w)
            if wq < 0:
                raise ValueError(f"negative weight on edge ({i}, {j})")
            if (i, j) in weights:
                raise ValueError(f"duplicate edge ({i}, {j})")
            weights[(i, j)] = wq
        out: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
        inn: list[list[tuple[int, Fraction]]] = [[] for _ in range(n)]
        for (i, j), w in sorted(weights.items()):
            if w > 0:
                out[i].append((j, w))
                inn[j].append((i, w))
        return cls(
            n=n,
            out_edges=tuple(tuple(row) for row in out),
            in_edges=tuple(tuple(col) for col in inn),
            out_degrees=tuple(sum((w for _, w in row), Fraction(0)) for row in out),
        )

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[object]]) -> "Network":
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("weight matrix must be square")
        return cls.from_edges(
            n, ((i, j, w) for i, r in enumerate(rows) for j, w in enumerate(r) if parse_rational_any(w) != 0)
        )

    def weight(self, i: int, j: int) -> Fraction:
        for k, w in self.out_edges[i]:
            if k == j:
                return w
        return Fraction(0)

    def edges(self) -> list[tuple[int, int, Fraction]]:
        return [(i, j, w) for i, row in enumerate(self.out_edges) for j, w in row]

    def matrix(self) -> list[list[Fraction]]:
        m = [[Fraction(0)] * self.n for _ in range(self.n)]
        for i, j, w in self.edges():
            m[i][j] = w
        return m

    def denominator_lcm(self) -> int:
        return lcm(1, *(w.denominator for _, _, w in self.edges()))


def _check_node(net: Network, node: int) -> None:
    if not 0 <= node < net.n:
        raise IndexError(f"node {node} out of range for n={net.n}")


def restricted_out_degree(net: Network, node: int, subset: Iterable[int]) -> Fraction:
    """Total weight of links from ``node`` into ``subset``."""
    _check_node(net, node)
    members = set(subset)
    return sum((w for j, w in net.out_edges[node] if j in members), Fraction(0))


def split_weights(net: Network, node: int, x: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Return ``(w_minus, w_plus)``: out-weight of ``node`` towards -1 and +1 agents."""
    _check_node(net, node)
    check_configuration(x, net.n)
    w_plus = sum((w for j, w in net.out_edges[node] if x[j] == 1), Fraction(0))
    return net.out_degrees[node] - w_plus, w_plus


def local_field(net: Network, node: int, x: Sequence[int]) -> Fraction:
    """``sum_j W[node][j] * x[j]``."""
    return sum((w * x[j] for j, w in net.out_edges[node]), Fraction(0))


# -- configurations ---------------------------------------------------------

def check_configuration(x: Sequence[int], n: int | None = None) -> Configuration:
    cfg = tuple(x)
    if n is not None and len(cfg) != n:
        raise ValueError(f"configuration has length {len(cfg)}, expected {n}")
    if any(v not in (1, -1) for v in cfg):
        raise ValueError("configuration entries must be -1 or +1")
    return cfg


def consensus(n: int, a: int) -> Configuration:
    if a not in (1, -1):
        raise ValueError("action must be +1 or -1")
    return (a,) * n


def is_consensus(x: Sequence[int]) -> bool:
    return all(v == x[0] for v in x)


def positive_part(x: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, v in enumerate(x) if v == 1)


def negative_part(x: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, v in enumerate(x) if v == -1)


def join(x: Sequence[int], y: Sequence[int]) -> Configuration:
    return tuple(max(a, b) for a, b in zip(x, y, strict=True))


def meet(x: Sequence[int], y: Sequence[int]) -> Configuration:
    return tuple(min(a, b) for a, b in zip(x, y, strict=True))


def leq(x: Sequence[int], y: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(x, y, strict=True))


def magnetization(x: Sequence[int]) -> int:
    return sum(x)


def parse_configuration(text: str, n: int | None = None) -> Configuration:
    """Parse ``"-1,-1,1"`` (commas and/or whitespace)."""
    parts = [p for p in re.split(r"[,\s]+", text.strip()) if p]
    try:
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"bad configuration {text!r}") from exc
    return check_configuration(values, n)


# -- edge-list files ----------------------------------------------------------

def parse_network(text: str) -> Network:
    """Parse the line-oriented edge-list format::

        # comment
        n 5
        e 1 2 1
        e 3 5 1/2
    """
    n: int | None = None
    edges: list[tuple[int, int, Fraction]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if n is None:
            if len(tok) != 2 or tok[0] != "n":
                raise ParseError("expected 'n <count>' header", lineno)
            try:
                n = int(tok[1])
            except ValueError:
                raise ParseError(f"bad node count {tok[1]!r}", lineno) from None
            if n < 1:
                raise ParseError("node count must be positive", lineno)
            continue
        if tok[0] != "e" or len(tok) != 4:
            raise ParseError(f"expected 'e <i> <j> <weight>', got {line!r}", lineno)
        try:
            i, j = int(tok[1]), int(tok[2])
        except ValueError:
            raise ParseError("node ids must be integers", lineno) from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise ParseError(f"node id out of range 1..{n}", lineno)
        if i == j:
            raise ParseError(f"self-loop at node {i}", lineno)
        try:
            w = parse_rational(tok[3])
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from None
        if w < 0:
            raise ParseError("negative weight", lineno)
        if (i, j) in seen:
            raise ParseError(f"duplicate edge ({i}, {j}), first on line {seen[(i, j)]}", lineno)
        seen[(i, j)] = lineno
        edges.append((i - 1, j - 1, w))
    if n is None:
        raise ParseError("missing 'n <count>' header")
    return Network.from_edges(n, edges)


def format_network(net: Network) -> str:
    """Canonical edge-list text; ``parse_network`` inverts it."""
    lines = [f"n {net.n}"]
    lines += [f"e {i + 1} {j + 1} {format_rational(w)}" for i, j, w in net.edges()]
    return "\n".join(lines) + "\n"


def scaled_integers(net: Network, *vectors: Sequence[Fraction]) -> tuple[int, list[list[tuple[int, int]]], list[int], list[list[int]]]:
    """Rescale weights and vectors by a common denominator.

    Returns ``(scale, out_int, degrees_int, vectors_int)``.  Multiplying
    every quantity by the same positive integer preserves all comparisons,
    which lets hot loops run on Python ints instead of Fractions.
    """
    scale = lcm(net.denominator_lcm(), *(Fraction(v).denominator for vec in vectors for v in vec))
    out = [[(j, int(w * scale)) for j, w in row] for row in net.out_edges]
    deg = [int(d * scale) for d in net.out_degrees]
    vecs = [[int(Fraction(v) * scale) for v in vec] for vec in vectors]
    return scale, out, deg, vecs
