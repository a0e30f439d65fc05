"""Command-line interface: simulate, compare, analyze-ap.

Exit codes: 0 success, 1 usage or parse failure, 2 a blocked run hit a state
that does not factor (PBlockError), 3 a stabilizer run hit a non-Clifford
gate.  stdout is deterministic for fixed flags and seed; timing goes to
stderr.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import dataclass

from .exact import ExactScalar
from .circuits import Circuit, CircuitError, parse_circuit
from .dense import dense_run, dense_marginal, WidthCapExceeded
from .blocked import PBlockError, run_blocked_full
from .approx import ApproxConfig, run_approx
from .stabilizer import NonCliffordGate, run_stabilizer
from .sampling import (OutcomeDistribution, CoinSource, dist_distance,
                       sample_outcome)
from . import ap as ap_mod

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PBLOCK = 2
EXIT_NONCLIFFORD = 3


@dataclass
class RunReport:
    engine: str
    circuit_path: str
    p: int | None
    distribution: OutcomeDistribution | None
    sample_bits: tuple[int, ...]
    ledger_summary: str | None
    wall_time: float
    digit_stats: int | None


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _CliError(EXIT_USAGE, f"usage error: {message}")


def _format_prob(label: str, value) -> str:
    if isinstance(value, ExactScalar):
        return f"{label} = {value.to_text()} ({value.to_float():.12f})"
    return f"{label} = {value:.12f} ({value:.12f})"


def _load_circuit(path: str) -> Circuit:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _CliError(EXIT_USAGE, f"cannot read {path}: {exc}")
    try:
        return parse_circuit(text)
    except CircuitError as exc:
        raise _CliError(EXIT_USAGE, f"{path}: {exc}")


def _run_engine(engine: str, circuit: Circuit, args):
    """Returns (distribution, ledger, digit_stats)."""
    if engine == "blocked":
        if args.p is None:
            raise _CliError(EXIT_USAGE, "--p is required for --engine blocked")
        state, dist = run_blocked_full(circuit, args.p, args.eager_split)
        return dist, None, state.digit_count()
    if engine == "dense":
        state = dense_run(circuit)
        dist = dense_marginal(state, circuit.measured_qubit)
        digits = max(a.digit_count() for a in state.amps)
        return dist, None, digits
    if engine == "approx":
        if args.p is None:
            raise _CliError(EXIT_USAGE, "--p is required for --engine approx")
        cfg = ApproxConfig(args.p, args.epsilon, args.eta, args.seed)
        dist, ledger, cert = run_approx(circuit, cfg)
        return dist, (ledger, cert), None
    if engine == "stabilizer":
        return run_stabilizer(circuit), None, None
    raise _CliError(EXIT_USAGE, f"unknown engine {engine!r}")


def cmd_simulate(args) -> RunReport:
    circuit = _load_circuit(args.circuit)
    started = time.perf_counter()
    try:
        dist, ledger_info, digits = _run_engine(args.engine, circuit, args)
    except PBlockError as exc:
        raise _CliError(EXIT_PBLOCK, f"not p-blocked: {exc}")
    except NonCliffordGate as exc:
        raise _CliError(EXIT_NONCLIFFORD, str(exc))
    except (WidthCapExceeded, ValueError) as exc:
        raise _CliError(EXIT_USAGE, str(exc))
    wall = time.perf_counter() - started

    print(_format_prob("p0", dist.p0))
    print(_format_prob("p1", dist.p1))
    if digits is not None:
        print(f"digits = {digits}")
    ledger_summary = None
    if ledger_info is not None:
        ledger, cert = ledger_info
        ledger_summary = cert.summary()
        print(ledger_summary)
        if args.ledger:
            with open(args.ledger, "w", encoding="utf-8") as fh:
                fh.write("\n".join(ledger.export_lines()))
                fh.write("\n" + cert.summary() + "\n")
    bits: tuple[int, ...] = ()
    if args.samples:
        if not dist.is_exact():
            raise _CliError(EXIT_USAGE,
                            "sampling needs an exact distribution")
        coins = CoinSource(args.seed)
        drawn = [sample_outcome(dist, args.eta, coins)
                 for _ in range(args.samples)]
        bits = tuple(drawn)
        for b in drawn:
            print(b)
        print(f"samples={args.samples} zeros={drawn.count(0)} "
              f"ones={drawn.count(1)} seed={args.seed}")
    print(f"wall_time={wall:.3f}s", file=sys.stderr)
    return RunReport(args.engine, args.circuit, args.p, dist, bits,
                     ledger_summary, wall, digits)


def cmd_compare(args) -> int:
    circuit = _load_circuit(args.circuit)
    engines = [e.strip() for e in args.engines.split(",") if e.strip()]
    if len(engines) < 2:
        raise _CliError(EXIT_USAGE, "--engines needs at least two entries")
    results: dict[str, OutcomeDistribution] = {}
    failures: dict[str, int] = {}
    for engine in engines:
        try:
            dist, _, _ = _run_engine(engine, circuit, args)
            results[engine] = dist
            print(_format_prob(f"{engine} p0", dist.p0))
        except PBlockError as exc:
            failures[engine] = EXIT_PBLOCK
            print(f"{engine}: not p-blocked ({exc})")
        except NonCliffordGate as exc:
            failures[engine] = EXIT_NONCLIFFORD
            print(f"{engine}: {exc}")
        except (WidthCapExceeded, ValueError) as exc:
            failures[engine] = EXIT_USAGE
            print(f"{engine}: {exc}")
    names = [e for e in engines if e in results]
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            da, db = results[a], results[b]
            gap = dist_distance(da, db)
            verdict = ""
            if da.is_exact() and db.is_exact():
                verdict = " MATCH" if da.exact_eq(db) else " MISMATCH"
            print(f"dist({a},{b}) = {gap:.12f}{verdict}")
    if failures:
        return failures[next(iter(failures))]
    return EXIT_OK


def cmd_analyze_ap(args) -> int:
    if args.census:
        result = ap_mod.census(args.rbits, args.trials, args.p, args.n,
                               args.seed)
        print(result.line())
        return EXIT_OK
    if args.pair:
        try:
            x0, x1 = (int(v) for v in args.pair.split(","))
            state = ap_mod.build_pair(x0, x1, args.n)
        except (ValueError, ap_mod.BadArgs, ap_mod.RangeOverflow) as exc:
            raise _CliError(EXIT_USAGE, f"bad --pair: {exc}")
    else:
        if args.x0 is None or args.r is None or args.count is None:
            raise _CliError(EXIT_USAGE,
                            "need --x0/--r/--count (or --pair / --census)")
        try:
            state = ap_mod.build_ap(args.x0, args.r, args.count, args.n)
        except (ap_mod.BadArgs, ap_mod.RangeOverflow) as exc:
            raise _CliError(EXIT_USAGE, str(exc))
    parts = ap_mod.analyze_blockedness(state, args.p)
    if parts is None:
        print(f"NOT {args.p}-BLOCKED")
    else:
        print(ap_mod.format_partition(parts))
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="pblocksim",
                     description="exact simulators for block-factored "
                                 "quantum circuits")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one engine on a circuit file")
    sim.add_argument("--engine", required=True,
                     choices=["blocked", "approx", "dense", "stabilizer"])
    sim.add_argument("--circuit", required=True)
    sim.add_argument("--p", type=int, default=None)
    sim.add_argument("--epsilon", type=float, default=0.0)
    sim.add_argument("--eta", type=float, default=1e-6)
    sim.add_argument("--samples", type=int, default=0)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--eager-split", action="store_true")
    sim.add_argument("--ledger", default=None)

    cmp_ = sub.add_parser("compare", help="run several engines and compare")
    cmp_.add_argument("--engines", required=True,
                      help="comma-separated engine list")
    cmp_.add_argument("--circuit", required=True)
    cmp_.add_argument("--p", type=int, default=None)
    cmp_.add_argument("--epsilon", type=float, default=0.0)
    cmp_.add_argument("--eta", type=float, default=1e-6)
    cmp_.add_argument("--seed", type=int, default=0)
    cmp_.add_argument("--eager-split", action="store_true")

    ana = sub.add_parser("analyze-ap",
                         help="blockedness of progression/pair states")
    ana.add_argument("--n", type=int, required=True)
    ana.add_argument("--p", type=int, required=True)
    ana.add_argument("--x0", type=int, default=None)
    ana.add_argument("--r", type=int, default=None)
    ana.add_argument("--count", type=int, default=None)
    ana.add_argument("--pair", default=None)
    ana.add_argument("--census", action="store_true")
    ana.add_argument("--rbits", type=int, default=8)
    ana.add_argument("--trials", type=int, default=100)
    ana.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "simulate":
            cmd_simulate(args)
            return EXIT_OK
        if args.command == "compare":
            return cmd_compare(args)
        if args.command == "analyze-ap":
            return cmd_analyze_ap(args)
        return EXIT_USAGE
    except _CliError as exc:
        print(exc.message, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
