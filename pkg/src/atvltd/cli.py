"""Command-line interface.

Exit codes: 0 success / property holds, 1 the checked property is false,
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import config
from .game import FieldRange, classify_field, classify_range
from .io import format_schedule, parse_field, parse_range, parse_schedule
from .lattice import enumerate_equilibria
from .network import ParseError, parse_configuration, parse_network
from .robustness import NotIndecomposable, decomposition_witness, is_indecomposable, robust_consensus_path
from .simulation import FieldSchedule, hitting_stats, oscillation_schedule, simulate

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(doc: object) -> str:
    return json.dumps(doc, sort_keys=True) + "\n"


def _network(args):
    return parse_network(_read(args.network))


def _field_range(args, n: int) -> FieldRange:
    if getattr(args, "range", None):
        return parse_range(_read(args.range), n)
    if getattr(args, "h", None):
        h = parse_field(_read(args.h), n)
        return FieldRange(h, h)
    raise InputError("give --h or --range")


def _schedule(args, n: int) -> FieldSchedule:
    if args.schedule:
        rng = parse_range(_read(args.range), n) if args.range else None
        return parse_schedule(_read(args.schedule), n, rng)
    if args.h:
        return FieldSchedule.constant(parse_field(_read(args.h), n))
    raise InputError("give --schedule or --h")


def cmd_classify(args) -> int:
    net = _network(args)
    if args.range:
        print(classify_range(net, parse_range(_read(args.range), net.n)))
    elif args.h:
        print(classify_field(net, parse_field(_read(args.h), net.n)))
    else:
        raise InputError("give --h or --range")
    return EXIT_OK


def cmd_equilibria(args) -> int:
    net = _network(args)
    h = parse_field(_read(args.h), net.n)
    _emit(_json(enumerate_equilibria(net, h, cap=args.cap).to_dict()), args.out)
    return EXIT_OK


def cmd_indecomposable(args) -> int:
    net = _network(args)
    res = is_indecomposable(net, _field_range(args, net.n))
    if res:
        print("indecomposable")
        return EXIT_OK
    print("decomposable")
    print(_json({
        "partition_plus": sorted(i + 1 for i in res.partition_plus),
        "partition_minus": sorted(i + 1 for i in res.partition_minus),
    }), end="")
    return EXIT_FALSE


def cmd_witness(args) -> int:
    net = _network(args)
    wit = decomposition_witness(net, _field_range(args, net.n))
    if wit is None:
        print("null")
        return EXIT_FALSE
    _emit(_json(wit.to_dict()), args.out)
    return EXIT_OK


def cmd_robust_path(args) -> int:
    net = _network(args)
    rng = _field_range(args, net.n)
    x = parse_configuration(args.x0, net.n)
    try:
        path = robust_consensus_path(net, rng, x)
    except NotIndecomposable as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_FALSE
    _emit(_json(path.to_dict()), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    net = _network(args)
    sched = _schedule(args, net.n)
    x0 = parse_configuration(args.x0, net.n)
    traj = simulate(net, sched, x0, _horizon(args.horizon), args.seed, method=args.method)
    _emit(traj.to_csv(), args.out)
    return EXIT_OK


def cmd_oscillate(args) -> int:
    n = parse_network(_read(args.network)).n if args.network else None
    rng = parse_range(_read(args.range), n)
    _emit(format_schedule(oscillation_schedule(rng, args.tau)), args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    net = _network(args)
    sched = _schedule(args, net.n)
    sampler = "uniform" if args.x0 == "uniform" else parse_configuration(args.x0, net.n)
    summary = hitting_stats(net, sched, sampler, args.runs, _horizon(args.horizon), args.seed,
                            method=args.method, workers=args.workers)
    _emit(summary.to_json(), args.out)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    from ._oracle import run_oracle_suite

    checks = run_oracle_suite(args.max_n, args.instances, args.seed)
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        line = f"{status} {c.name}: {c.trials - c.failures}/{c.trials}"
        if c.example:
            line += f"  first failure: {c.example}"
        print(line)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FALSE


def _horizon(text: str):
    from .network import parse_rational

    try:
        return parse_rational(text)
    except ValueError as exc:
        raise InputError(f"--horizon: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="atvltd", description=__doc__.splitlines()[0])
    p.add_argument("--config", help="TOML file with scan caps (max_partition_nodes, ...)")
    sub = p.add_subparsers(dest="command", required=True)

    def net_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("network", help="edge-list file")
        sp.set_defaults(func=func)
        return sp

    sp = net_cmd("classify", cmd_classify, "regular/biased/frustrated and polarizability")
    sp.add_argument("--h")
    sp.add_argument("--range")

    sp = net_cmd("equilibria", cmd_equilibria, "enumerate all pure equilibria")
    sp.add_argument("--h", required=True)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--out")

    sp = net_cmd("indecomposable", cmd_indecomposable, "check (h-,h+)-indecomposability")
    sp.add_argument("--h")
    sp.add_argument("--range")

    sp = net_cmd("witness", cmd_witness, "field and coexistent configuration frozen under it")
    sp.add_argument("--h")
    sp.add_argument("--range")
    sp.add_argument("--out")

    sp = net_cmd("robust-path", cmd_robust_path, "improvement path to consensus valid for every field in the range")
    sp.add_argument("--h")
    sp.add_argument("--range")
    sp.add_argument("--x0", required=True)
    sp.add_argument("--out")

    for name, func, help_ in (("simulate", cmd_simulate, "one seeded run, CSV out"),
                              ("stats", cmd_stats, "Monte Carlo absorption statistics, JSON out")):
        sp = net_cmd(name, func, help_)
        sp.add_argument("--schedule")
        sp.add_argument("--range", help="range the schedule must respect")
        sp.add_argument("--h", help="constant field instead of a schedule")
        sp.add_argument("--horizon", default="100")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--method", choices=("ticks", "jump"), default="ticks")
        sp.add_argument("--out")
        if name == "simulate":
            sp.add_argument("--x0", required=True)
        else:
            sp.add_argument("--x0", default="uniform")
            sp.add_argument("--runs", type=int, default=100)
            sp.add_argument("--workers", type=int)

    sp = sub.add_parser("oscillate", help="periodic schedule alternating the range bounds")
    sp.add_argument("network", nargs="?", help="optional, to check dimensions")
    sp.add_argument("--range", required=True)
    sp.add_argument("--tau", required=True)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_oscillate)

    sp = sub.add_parser("oracle-check", help="run the brute-force invariant suite")
    sp.add_argument("--max-n", type=int, default=8)
    sp.add_argument("--instances", type=int, default=200)
    sp.add_argument("--seed", type=int, default=None)
    sp.set_defaults(func=cmd_oracle_check)
    return p


def _glue_x0(argv: list[str]) -> list[str]:
    # "--x0 -1,1" would otherwise be read as an unknown option
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok == "--x0":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--x0={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_x0(list(sys.argv[1:] if argv is None else argv)))
    try:
        config.set_settings(config.load_settings(args.config))
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            args.seed = config.get_settings().seed
        return args.func(args)
    except (InputError, ParseError, config.CapExceeded, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
