"""Event-driven simulation of asynchronous linear threshold dynamics with a
piecewise-constant external field.

Every agent carries a rate-1 Poisson clock.  When agent ``i`` ticks at time
``t`` it moves to ``+1`` if ``sum_j W_ij x_j + h_i(t) > 0``, to ``-1`` if the
sum is negative, and keeps its state on a tie.  Times are floats; every
state decision is made on exact (integer-rescaled rational) quantities, and
breakpoint lookups compare floats with Fractions exactly.
"""

from __future__ import annotations

import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Iterator, Sequence, Union

import numpy as np

from .game import Field, FieldRange, as_field
from .network import Configuration, Network, check_configuration, is_consensus, local_field

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class FieldSchedule:
    """Right-continuous piecewise-constant field ``h(t)``.

    ``breakpoints`` is a list of ``(time, field)`` starting at time 0.  With
    a ``period`` the pattern repeats, and all breakpoint times must be
    smaller than the period.
    """

    breakpoints: tuple[tuple[Fraction, Field], ...]
    period: Fraction | None = None
    range: FieldRange | None = None

    def __post_init__(self) -> None:
        bps = tuple((Fraction(t), as_field(h)) for t, h in self.breakpoints)
        object.__setattr__(self, "breakpoints", bps)
        if not bps:
            raise ValueError("schedule needs at least one breakpoint")
        if bps[0][0] != 0:
            raise ValueError("first breakpoint must be at time 0")
        for (t0, _), (t1, _) in zip(bps, bps[1:]):
            if t1 <= t0:
                raise ValueError("breakpoint times must be strictly increasing")
        n = len(bps[0][1])
        if any(len(h) != n for _, h in bps):
            raise ValueError("all fields in a schedule must have the same length")
        if self.period is not None:
            p = Fraction(self.period)
            object.__setattr__(self, "period", p)
            if p <= 0 or bps[-1][0] >= p:
                raise ValueError("period must exceed every breakpoint time")
        if self.range is not None:
            if self.range.n != n:
                raise ValueError("attached range has the wrong dimension")
            for t, h in bps:
                if not self.range.contains(h):
                    raise ValueError(f"field at t={t} lies outside the attached range")

    @classmethod
    def constant(cls, h: Sequence[object]) -> "FieldSchedule":
        return cls(((Fraction(0), as_field(h)),))

    @property
    def n(self) -> int:
        return len(self.breakpoints[0][1])

    @property
    def is_constant(self) -> bool:
        return len(self.breakpoints) == 1

    def field_at(self, t: Fraction | float | int) -> Field:
        t = Fraction(t)
        if t < 0:
            raise ValueError("negative time")
        if self.period is not None:
            t = t % self.period
        current = self.breakpoints[0][1]
        for bt, h in self.breakpoints:
            if bt <= t:
                current = h
            else:
                break
        return current

    def segments(self) -> Iterator[tuple[Fraction, int]]:
        """Absolute ``(start_time, breakpoint_index)`` pairs in time order (endless if periodic)."""
        if self.period is None:
            for k, (t, _) in enumerate(self.breakpoints):
                yield t, k
            return
        base = Fraction(0)
        while True:
            for k, (t, _) in enumerate(self.breakpoints):
                yield base + t, k
            base += self.period

    def envelope(self) -> FieldRange:
        """Attached range, else the bounding box of the scheduled fields."""
        if self.range is not None:
            return self.range
        fields = [h for _, h in self.breakpoints]
        return FieldRange(tuple(map(min, zip(*fields))), tuple(map(max, zip(*fields))))


def oscillation_schedule(rng: FieldRange, tau: Fraction | int | str) -> FieldSchedule:
    """``upper`` on ``[2k tau, (2k+1) tau)``, ``lower`` on ``[(2k+1) tau, (2k+2) tau)``."""
    tau = as_field([tau])[0]
    if tau <= 0:
        raise ValueError("tau must be positive")
    if rng.lower == rng.upper:
        return FieldSchedule(((Fraction(0), rng.upper),), range=rng)
    return FieldSchedule(((Fraction(0), rng.upper), (tau, rng.lower)), period=2 * tau, range=rng)


@dataclass(frozen=True)
class RateMap:
    rates: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.rates)

    def active(self) -> list[int]:
        return [i for i, r in enumerate(self.rates) if r]


def transition_rates(net: Network, h: Sequence[Fraction], x: Sequence[int]) -> RateMap:
    """Rate 1 for agents whose flip strictly increases their utility, else 0."""
    x = check_configuration(x, net.n)
    return RateMap(tuple(1 if x[i] * (local_field(net, i, x) + h[i]) < 0 else 0 for i in range(net.n)))


@dataclass
class Trajectory:
    seed: int
    x0: Configuration
    horizon: float
    events: list[tuple[float, int, int]] = field(default_factory=list)
    samples: list[tuple[float, int]] = field(default_factory=list)
    hitting_time_consensus: float | None = None
    absorption_time: float | None = None
    absorbed_state: int | None = None
    ticks: int = 0
    hitting_tick: int | None = None
    final: Configuration = ()

    def consensus_visits(self) -> dict[int, int]:
        """Number of entries into each consensus configuration (the start counts)."""
        visits = {1: 0, -1: 0}
        x = list(self.x0)
        if is_consensus(x):
            visits[x[0]] += 1
        total = sum(x)
        n = len(x)
        for _, _, s in self.events:
            total += 2 * s
            if abs(total) == n:
                visits[1 if total > 0 else -1] += 1
        return visits

    def to_csv(self) -> str:
        rows = ["event,time,agent,new_state,magnetization"]
        rows.append(f"0,{self.samples[0][0]!r},,,{self.samples[0][1]}")
        for k, ((t, i, s), (_, m)) in enumerate(zip(self.events, self.samples[1:]), start=1):
            rows.append(f"{k},{t!r},{i + 1},{s},{m}")
        return "\n".join(rows) + "\n"


def mix_seed(base_seed: int, index: int) -> int:
    """SplitMix64 finaliser applied to ``base_seed + (index + 1) * golden``, mod 2**64."""
    z = (base_seed + (index + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


class _Draws:
    """Block-buffered standard exponential / uniform pairs from one generator."""

    def __init__(self, seed: int, block: int = 4096):
        self._rng = np.random.default_rng(seed & MASK64)
        self._block = block
        self._e: list[float] = []
        self._u: list[float] = []
        self._k = 0

    def next(self) -> tuple[float, float]:
        if self._k == len(self._e):
            self._e = self._rng.standard_exponential(self._block).tolist()
            self._u = self._rng.random(self._block).tolist()
            self._k = 0
        k = self._k
        self._k += 1
        return self._e[k], self._u[k]


def _absorbable(net: Network, envelope: FieldRange) -> dict[int, bool]:
    """Consensus ``a`` can never be left when ``w_i + a*h_i >= 0`` for every field in the envelope."""
    w = net.out_degrees
    return {
        1: all(wi + lo >= 0 for wi, lo in zip(w, envelope.lower)),
        -1: all(wi - hi >= 0 for wi, hi in zip(w, envelope.upper)),
    }


def simulate(
    net: Network,
    schedule: FieldSchedule,
    x0: Sequence[int],
    horizon: float | int | Fraction,
    seed: int,
    method: str = "ticks",
    stop_on_absorption: bool = True,
) -> Trajectory:
    """Simulate one run up to ``horizon``.

    ``method="ticks"`` draws every clock tick of the superposed rate-``n``
    process and picks the ticking agent uniformly.  ``method="jump"`` draws
    only the ticks that change the state (rate = number of agents that
    would flip), i.e. the embedded jump chain with exponential holding
    times; both give the same law.  While no agent can flip, either method
    jumps straight to the next field breakpoint.

    The run stops early once it sits in a consensus configuration that no
    field of the schedule's envelope can destabilise, unless
    ``stop_on_absorption`` is false.
    """
    if method not in ("ticks", "jump"):
        raise ValueError("method must be 'ticks' or 'jump'")
    n = net.n
    if schedule.n != n:
        raise ValueError("schedule dimension does not match the network")
    x = list(check_configuration(x0, n))
    horizon_q = Fraction(horizon)
    if horizon_q < 0:
        raise ValueError("horizon must be nonnegative")

    scale = lcm(net.denominator_lcm(), *(v.denominator for _, h in schedule.breakpoints for v in h))
    out = [[(j, int(w * scale)) for j, w in row] for row in net.out_edges]
    in_edges: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i, row in enumerate(out):
        for j, w in row:
            in_edges[j].append((i, w))
    fields = [[int(v * scale) for v in h] for _, h in schedule.breakpoints]
    absorbable = _absorbable(net, schedule.envelope())

    local = [sum(w * x[j] for j, w in row) for row in out]
    traj = Trajectory(seed=seed, x0=tuple(x), horizon=float(horizon_q))
    mag = sum(x)
    traj.samples.append((0.0, mag))

    segs = schedule.segments()
    next(segs)
    cur = 0
    nxt = next(segs, None)

    def refresh(hf: list[int]) -> tuple[list[bool], list[int], dict[int, int]]:
        unstable = [x[i] * (local[i] + hf[i]) < 0 for i in range(n)]
        lst = [i for i in range(n) if unstable[i]]
        return unstable, lst, {i: k for k, i in enumerate(lst)}

    hf = fields[cur]
    unstable, active, pos = refresh(hf)

    def set_status(i: int, flag: bool) -> None:
        if flag == unstable[i]:
            return
        unstable[i] = flag
        if flag:
            pos[i] = len(active)
            active.append(i)
        else:
            k = pos.pop(i)
            last = active.pop()
            if last != i:
                active[k] = last
                pos[last] = k

    if abs(mag) == n:
        traj.hitting_time_consensus = 0.0
        traj.hitting_tick = 0
        if absorbable[x[0]]:
            traj.absorption_time = 0.0
            traj.absorbed_state = x[0]

    draws = _Draws(seed)
    t = 0.0
    while traj.absorbed_state is None or not stop_on_absorption:
        if not active:
            # frozen until the field changes
            if nxt is None or nxt[0] > horizon_q:
                break
            t = float(nxt[0])
            cur = nxt[1]
            nxt = next(segs, None)
            hf = fields[cur]
            unstable, active, pos = refresh(hf)
            continue
        e, u = draws.next()
        rate = n if method == "ticks" else len(active)
        t_new = t + e / rate
        if nxt is not None and method == "jump" and t_new >= nxt[0]:
            t = float(nxt[0])
            cur = nxt[1]
            nxt = next(segs, None)
            hf = fields[cur]
            unstable, active, pos = refresh(hf)
            continue
        if t_new > horizon_q:
            break
        t = t_new
        if nxt is not None and t >= nxt[0]:
            while nxt is not None and t >= nxt[0]:
                cur = nxt[1]
                nxt = next(segs, None)
            hf = fields[cur]
            unstable, active, pos = refresh(hf)
        traj.ticks += 1
        if method == "ticks":
            i = min(int(u * n), n - 1)
            if not unstable[i]:
                continue
        else:
            i = active[min(int(u * len(active)), len(active) - 1)]
        x[i] = -x[i]
        delta = 2 * x[i]
        mag += delta
        set_status(i, False)
        for k, w in in_edges[i]:
            local[k] += delta * w
            set_status(k, x[k] * (local[k] + hf[k]) < 0)
        traj.events.append((t, i, x[i]))
        traj.samples.append((t, mag))
        if abs(mag) == n:
            if traj.hitting_time_consensus is None:
                traj.hitting_time_consensus = t
                traj.hitting_tick = traj.ticks
            if absorbable[x[0]] and traj.absorbed_state is None:
                traj.absorption_time = t
                traj.absorbed_state = x[0]
    traj.final = tuple(x)
    return traj


# -- Monte Carlo ----------------------------------------------------------------

X0Sampler = Union[str, Sequence[int], Callable[[np.random.Generator], Sequence[int]]]


def _initial(sampler: X0Sampler, n: int, run_seed: int) -> Configuration:
    if isinstance(sampler, str):
        if sampler != "uniform":
            raise ValueError(f"unknown x0 sampler {sampler!r}")
        rng = np.random.default_rng(mix_seed(run_seed, 0))
        return tuple(int(v) for v in rng.choice((-1, 1), size=n))
    if callable(sampler):
        rng = np.random.default_rng(mix_seed(run_seed, 0))
        return check_configuration(sampler(rng), n)
    return check_configuration(sampler, n)


@dataclass
class HittingSummary:
    runs: int
    absorbed_plus: int
    absorbed_minus: int
    not_absorbed: int
    reached_consensus: int
    absorption_times: list[float]
    hitting_times: list[float]
    hitting_ticks: list[int]
    seeds: list[int]

    @property
    def fraction_plus(self) -> float:
        return self.absorbed_plus / self.runs

    @property
    def fraction_minus(self) -> float:
        return self.absorbed_minus / self.runs

    def to_dict(self) -> dict:
        def stats(v: list[float]) -> dict:
            if not v:
                return {"count": 0}
            return {"count": len(v), "mean": statistics.fmean(v), "median": statistics.median(v),
                    "min": min(v), "max": max(v)}

        return {
            "runs": self.runs,
            "absorbed_plus": self.absorbed_plus,
            "absorbed_minus": self.absorbed_minus,
            "not_absorbed": self.not_absorbed,
            "reached_consensus": self.reached_consensus,
            "fraction_plus": self.fraction_plus,
            "fraction_minus": self.fraction_minus,
            "absorption_time": stats(self.absorption_times),
            "hitting_time": stats(self.hitting_times),
            "absorption_times": self.absorption_times,
            "seeds": self.seeds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _one_run(args) -> Trajectory:
    net, schedule, sampler, horizon, run_seed, method = args
    return simulate(net, schedule, _initial(sampler, net.n, run_seed), horizon, run_seed, method)


def run_batch(
    net: Network,
    schedule: FieldSchedule,
    x0_sampler: X0Sampler,
    runs: int,
    horizon: float | int | Fraction,
    base_seed: int,
    method: str = "ticks",
    workers: int | None = None,
) -> list[Trajectory]:
    """Runs ``k = 0..runs-1`` with seeds ``mix_seed(base_seed, k)``, returned in run order."""
    if runs < 1:
        raise ValueError("runs must be at least 1")
    jobs = [(net, schedule, x0_sampler, horizon, mix_seed(base_seed, k), method) for k in range(runs)]
    if workers and workers > 1 and not callable(x0_sampler):
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_one_run, jobs))
    return [_one_run(job) for job in jobs]


def summarize(trajectories: Sequence[Trajectory]) -> HittingSummary:
    return HittingSummary(
        runs=len(trajectories),
        absorbed_plus=sum(t.absorbed_state == 1 for t in trajectories),
        absorbed_minus=sum(t.absorbed_state == -1 for t in trajectories),
        not_absorbed=sum(t.absorbed_state is None for t in trajectories),
        reached_consensus=sum(t.hitting_time_consensus is not None for t in trajectories),
        absorption_times=[t.absorption_time for t in trajectories if t.absorption_time is not None],
        hitting_times=[t.hitting_time_consensus for t in trajectories if t.hitting_time_consensus is not None],
        hitting_ticks=[t.hitting_tick for t in trajectories if t.hitting_tick is not None],
        seeds=[t.seed for t in trajectories],
    )


def hitting_stats(
    net: Network,
    schedule: FieldSchedule,
    x0_sampler: X0Sampler,
    runs: int,
    horizon: float | int | Fraction,
    base_seed: int,
    method: str = "ticks",
    workers: int | None = None,
) -> HittingSummary:
    return summarize(run_batch(net, schedule, x0_sampler, runs, horizon, base_seed, method, workers))
