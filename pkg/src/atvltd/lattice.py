"""Improvement paths, the four monotone closure maps, and the equilibrium lattice.

For a supermodular game the maps

* ``up``/``I``    : greatest configuration reachable by a monotone improvement path,
* ``down``/``I``  : least configuration reachable by an anti-monotone improvement path,
* ``up``/``BR``   : same with weak (best-response) improvements,
* ``down``/``BR`` : likewise downwards,

are computed greedily: an agent that may flip towards the target action keeps
that option while others flip the same way, so any maximal greedy sweep ends
at the extremal configuration.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

import numpy as np

from .config import require_cap
from .game import Field, as_field, is_equilibrium, utility
from .network import Configuration, Network, check_configuration, join, meet, scaled_integers

Direction = Literal["up", "down"]
Mode = Literal["I", "BR"]


class NotAnEquilibrium(ValueError):
    pass


@dataclass(frozen=True)
class AdmissiblePath:
    """Start configuration plus a list of single-agent flips ``(agent, new_action)``."""

    start: Configuration
    steps: tuple[tuple[int, int], ...] = ()
    monotone: bool = False
    anti_monotone: bool = False
    improvement: bool = False
    best_response: bool = False

    def __len__(self) -> int:
        return len(self.steps)

    def configurations(self) -> list[Configuration]:
        out = [self.start]
        cur = list(self.start)
        for i, a in self.steps:
            cur[i] = a
            out.append(tuple(cur))
        return out

    @property
    def end(self) -> Configuration:
        return self.configurations()[-1]

    def to_dict(self, one_based: bool = True) -> dict:
        off = 1 if one_based else 0
        return {
            "start": list(self.start),
            "steps": [[i + off, a] for i, a in self.steps],
            "end": list(self.end),
            "mode": {
                "monotone": self.monotone,
                "anti_monotone": self.anti_monotone,
                "improvement": self.improvement,
                "best_response": self.best_response,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def check_path(net: Network, h: Sequence[Fraction], path: AdmissiblePath, strict: bool = True) -> bool:
    """Whether every flip of ``path`` is a (strict or weak) improvement under ``h``."""
    configs = path.configurations()
    for (i, a), before, after in zip(path.steps, configs, configs[1:]):
        if before[i] == a:
            return False
        gain = utility(net, h, after, i) - utility(net, h, before, i)
        if gain < 0 or (strict and gain == 0):
            return False
    return True


class _Drive:
    """Integer-scaled local fields ``sum_j W_ij x_j + h_i`` kept up to date under flips."""

    def __init__(self, net: Network, h: Sequence[Fraction], x: Sequence[int]):
        _, out, _, (hint,) = scaled_integers(net, h)
        self.x = list(x)
        self.in_edges = [[] for _ in range(net.n)]
        for i, row in enumerate(out):
            for j, w in row:
                self.in_edges[j].append((i, w))
        self.drive = [hint[i] + sum(w * self.x[j] for j, w in row) for i, row in enumerate(out)]

    def flip(self, j: int) -> list[int]:
        self.x[j] = -self.x[j]
        delta = 2 * self.x[j]
        touched = []
        for i, w in self.in_edges[j]:
            self.drive[i] += delta * w
            touched.append(i)
        return touched


def closure(
    net: Network,
    h: Sequence[Fraction],
    x: Sequence[int],
    direction: Direction = "up",
    mode: Mode = "I",
    order: Iterable[int] | None = None,
) -> tuple[Configuration, AdmissiblePath]:
    """Extremal configuration reachable by a (anti-)monotone I- or BR-path, with a witness.

    ``order`` sets the initial sweep order; the end point does not depend on it.
    """
    if direction not in ("up", "down") or mode not in ("I", "BR"):
        raise ValueError(f"bad direction/mode {direction!r}/{mode!r}")
    h = as_field(h, net.n)
    x = check_configuration(x, net.n)
    target = 1 if direction == "up" else -1
    weak = mode == "BR"
    st = _Drive(net, h, x)

    def eligible(i: int) -> bool:
        if st.x[i] == target:
            return False
        d = target * st.drive[i]
        return d >= 0 if weak else d > 0

    queue = deque(range(net.n) if order is None else order)
    queued = [False] * net.n
    for i in queue:
        queued[i] = True
    steps = []
    while queue:
        i = queue.popleft()
        queued[i] = False
        if not eligible(i):
            continue
        for k in st.flip(i):
            if not queued[k] and st.x[k] != target:
                queued[k] = True
                queue.append(k)
        steps.append((i, target))
    end = tuple(st.x)
    path = AdmissiblePath(
        start=x,
        steps=tuple(steps),
        monotone=direction == "up",
        anti_monotone=direction == "down",
        improvement=not weak,
        best_response=True,
    )
    return end, path


def _map(net, h, x, direction, mode) -> Configuration:
    return closure(net, h, x, direction, mode)[0]


def ireachable_extremes(
    net: Network, h: Sequence[Fraction], x: Sequence[int], mode: Mode = "I"
) -> tuple[Configuration, Configuration]:
    """Least and greatest equilibria reachable from ``x`` by I-paths (or BR-paths)."""
    up = _map(net, h, x, "up", mode)
    down = _map(net, h, x, "down", mode)
    greatest = _map(net, h, up, "down", "I")
    least = _map(net, h, down, "up", "I")
    return least, greatest


def lattice_ops(
    net: Network, h: Sequence[Fraction], x_star: Sequence[int], y_star: Sequence[int]
) -> tuple[Configuration, Configuration]:
    """``(join, meet)`` of two equilibria inside the equilibrium lattice."""
    for cfg in (x_star, y_star):
        if not is_equilibrium(net, h, cfg):
            raise NotAnEquilibrium(f"{tuple(cfg)} is not an equilibrium")
    return _map(net, h, join(x_star, y_star), "up", "I"), _map(net, h, meet(x_star, y_star), "down", "I")


@dataclass(frozen=True)
class EquilibriumSet:
    members: tuple[Configuration, ...]
    least: Configuration
    greatest: Configuration

    def __contains__(self, x: object) -> bool:
        return tuple(x) in set(self.members)  # type: ignore[arg-type]

    def __len__(self) -> int:
        return len(self.members)

    @property
    def coexistent(self) -> tuple[Configuration, ...]:
        return tuple(m for m in self.members if len(set(m)) > 1)

    def to_dict(self) -> dict:
        return {
            "members": [list(m) for m in self.members],
            "least": list(self.least),
            "greatest": list(self.greatest),
        }


_CHUNK = 1 << 15


def _equilibrium_masks(net: Network, h: Field) -> list[int]:
    """Bitmasks (bit i set <=> x_i = +1) of configurations with every utility >= 0."""
    n = net.n
    _, out, deg, (hint,) = scaled_integers(net, h)
    bound = max((d + abs(v) for d, v in zip(deg, hint)), default=0)
    found: list[int] = []
    if bound < 2**62:
        W = np.zeros((n, n), dtype=np.int64)
        for i, row in enumerate(out):
            for j, w in row:
                W[i, j] = w
        hv = np.array(hint, dtype=np.int64)
        shifts = np.arange(n, dtype=np.int64)
        total = 1 << n
        for start in range(0, total, _CHUNK):
            ks = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
            X = ((ks[:, None] >> shifts) & 1) * 2 - 1
            U = X * (X @ W.T + hv)
            found.extend(int(k) for k in ks[(U >= 0).all(axis=1)])
        return found
    for k in range(1 << n):  # pragma: no cover - huge integer weights
        x = [1 if (k >> i) & 1 else -1 for i in range(n)]
        if all(x[i] * (hint[i] + sum(w * x[j] for j, w in out[i])) >= 0 for i in range(n)):
            found.append(k)
    return found


def enumerate_equilibria(net: Network, h: Sequence[Fraction], cap: int | None = None) -> EquilibriumSet:
    """All pure Nash equilibria by brute force over the ``2**n`` configurations."""
    require_cap(net.n, cap, "equilibrium enumeration", "max_enumeration_nodes")
    h = as_field(h, net.n)
    masks = _equilibrium_masks(net, h)
    members = tuple(tuple(1 if (k >> i) & 1 else -1 for i in range(net.n)) for k in masks)
    if not members:
        raise AssertionError("a coordination game always has an equilibrium")
    least = members[0]
    greatest = members[0]
    for m in members[1:]:
        least, greatest = meet(least, m), join(greatest, m)
    return EquilibriumSet(members, least, greatest)


def is_polarizable(net: Network, h: Sequence[Fraction], cap: int | None = None) -> bool:
    """Whether some equilibrium is coexistent (not a consensus).

    Enumerates when ``n`` is within the enumeration cap, otherwise falls back
    to the partition criterion.
    """
    from .config import get_settings
    from .robustness import is_indecomposable

    limit = get_settings().max_enumeration_nodes if cap is None else cap
    if net.n <= limit:
        return bool(enumerate_equilibria(net, h, cap=limit).coexistent)
    h = as_field(h, net.n)
    from .game import FieldRange

    return not is_indecomposable(net, FieldRange(h, h))
