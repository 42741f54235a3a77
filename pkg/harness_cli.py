"""
Command-line harness for Maximum Nim Grundy numbers and the Josephus bridge.

Subcommands:
    grundy      Grundy values by oracle, Levine descent or floor-k recursion
    josephus    order | survivor | rank | at, by simulation or bridge queries
    verify      exhaustive check of JJ_k(n, m) == G(nk - m) over a grid
    bench       timing of simulation versus bridge queries
    play        play Maximum Nim against the optimal engine

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 overflow/infeasible, 4 internal invariant violation.
"""

import argparse
import hashlib
import json
import logging
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import pandas as pd
from dotenv import load_dotenv
from tqdm import tqdm

from grundy_bridge import (
    at_query,
    full_order_fast,
    rank_query,
    stage_fold_holds,
    survivor_classic,
    survivor_fast,
)
from grundy_core import (
    ORACLE_LIMIT,
    BoundExceededError,
    CheckedOverflowError,
    GrundyError,
    InfeasibleError,
    InvalidArgumentError,
    InvariantViolationError,
    Method,
    RuleFunction,
    grundy,
    grundy_floor_k,
    grundy_table,
    optimal_moves,
)
from josephus_sim import (
    EliminationTrace,
    Engine,
    jj_values,
    simulate,
    trace_to_csv,
    trace_to_json,
    write_trace,
)

load_dotenv()

logger = logging.getLogger(__name__)

# Configuration
LOG_LEVEL = os.getenv("HARNESS_LOG_LEVEL", "WARNING").upper()
SIM_LIMIT = int(os.getenv("JOSEPHUS_SIM_LIMIT", "5000000"))
NAIVE_LIMIT = int(os.getenv("JOSEPHUS_NAIVE_LIMIT", "200000"))
# Pointer steps the naive engine may take, estimated as n * min(k, n)
NAIVE_WORK_LIMIT = int(os.getenv("JOSEPHUS_NAIVE_WORK_LIMIT", "100000000"))
ORDER_SIM_DEFAULT_MAX = 100000
REPORT_SCHEMA = 1

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_INVARIANT = 4

BENCH_METHODS = (
    "simulate-naive",
    "simulate-ostree",
    "bridge-rank",
    "bridge-order",
    "survivor-classic",
    "survivor-fast",
)
ORDER_METHODS = ("simulate-naive", "simulate-ostree", "bridge-order")
SURVIVOR_METHODS = ("survivor-classic", "survivor-fast")


# ============================================================================
# Output helpers
# ============================================================================

def _use_color() -> bool:
    return os.getenv("NO_COLOR") is None and sys.stdout.isatty()


def _style(text: str, code: str) -> str:
    """Wrap text in an ANSI SGR code unless NO_COLOR is set or stdout is not a terminal."""
    if not _use_color():
        return text
    return f"\033[{code}m{text}\033[0m"


def _ok(text: str) -> str:
    return _style("[OK]", "32") + f" {text}"


def _fail(text: str) -> str:
    return _style("[FAIL]", "31") + f" {text}"


def _dump_json(data: Dict[str, Any]) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: Optional[Path]) -> None:
    """Print text, or write it to out (parents created)."""
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as f:
        f.write(text if text.endswith("\n") else text + "\n")
    print(_ok(f"Output written to: {out}"))


def _progress(iterable, total: int, desc: str, quiet: bool):
    return tqdm(iterable, total=total, desc=desc, disable=quiet, file=sys.stderr, leave=False)


# ============================================================================
# grundy
# ============================================================================

def _rule_from_args(args: argparse.Namespace) -> RuleFunction:
    if args.rule_file:
        return RuleFunction.load(args.rule_file)
    return RuleFunction.floor_div(args.k)


def cmd_grundy(args: argparse.Namespace) -> int:
    f = _rule_from_args(args)
    method = Method(args.method) if args.method else None

    if args.x is not None:
        value = grundy(args.x, f, method)
        if args.format == "json":
            _emit(_dump_json({"schema": REPORT_SCHEMA, "rule": str(f), "x": args.x, "grundy": value}), args.out)
        else:
            _emit(str(value), args.out)
        return EXIT_OK

    lo, hi = args.range
    if lo < 0 or lo > hi:
        raise InvalidArgumentError(f"--range needs 0 <= LO <= HI, got {lo} {hi}")
    if method is Method.ORACLE:
        table = grundy_table(hi, f)
        values = [table[x] for x in range(lo, hi + 1)]
    else:
        values = [grundy(x, f, method) for x in range(lo, hi + 1)]

    frame = pd.DataFrame({"x": range(lo, hi + 1), "grundy": values})
    if args.format == "json":
        _emit(_dump_json({"schema": REPORT_SCHEMA, "rule": str(f), "values": frame.to_dict("records")}), args.out)
    else:
        _emit(frame.to_csv(index=False), args.out)
    return EXIT_OK


# ============================================================================
# josephus
# ============================================================================

def _require(value: Optional[int], flag: str, action: str) -> int:
    if value is None:
        raise InvalidArgumentError(f"{flag} is required for 'josephus {action}'")
    return value


def _check_simulation(label: str, engine: Engine, n: int, k: int) -> None:
    """
    Raises:
        InfeasibleError: If n is above the engine's limit, or the naive walk would exceed NAIVE_WORK_LIMIT
    """
    limit = NAIVE_LIMIT if engine is Engine.NAIVE else SIM_LIMIT
    if n > limit:
        raise InfeasibleError(f"{label} limited to n <= {limit}, got n={n}")
    if engine is Engine.NAIVE and n * min(k, n) > NAIVE_WORK_LIMIT:
        raise InfeasibleError(
            f"{label} limited to n * min(k, n) <= {NAIVE_WORK_LIMIT}, got n={n}, k={k}"
        )


def _simulated(n: int, k: int, sim_engine: str) -> EliminationTrace:
    engine = Engine(sim_engine)
    _check_simulation(f"simulation with engine {engine.value}", engine, n, k)
    return simulate(n, k, engine)


def cmd_josephus(args: argparse.Namespace) -> int:
    n, k, action = args.n, args.k, args.action
    engine = args.engine
    if engine is None:
        engine = "sim" if action == "order" and n <= ORDER_SIM_DEFAULT_MAX else "fast"

    if action == "order":
        if engine == "sim":
            trace = _simulated(n, k, args.sim_engine)
        else:
            if n > SIM_LIMIT:
                raise InfeasibleError(f"full order limited to n <= {SIM_LIMIT}, got n={n}")
            order = full_order_fast(n, k, jobs=args.jobs)
            trace = EliminationTrace(n=n, k=k, order=order, survivor=order[-1])

        if args.out is not None:
            # text format defers to the file suffix, falling back to CSV
            fmt = args.format if args.format != "text" else None
            write_trace(trace, args.out, fmt)
            print(_ok(f"Trace written to: {args.out}"))
        elif args.format == "csv":
            _emit(trace_to_csv(trace), None)
        elif args.format == "json":
            _emit(trace_to_json(trace), None)
        else:
            _emit(" ".join(map(str, trace.order)), None)
        return EXIT_OK

    if action == "survivor":
        answer = survivor_fast(n, k) if engine == "fast" else _simulated(n, k, args.sim_engine).survivor
        payload = {"n": n, "k": k, "survivor": answer}
    elif action == "rank":
        m = _require(args.m, "--m", action)
        if engine == "fast":
            result = rank_query(n, k, m)
            answer = result.answer
            payload = {"n": n, "k": k, "m": m, "rank": answer, "grundy_chain_length": result.grundy_chain_length}
        else:
            answer = _simulated(n, k, args.sim_engine).position_of(m)
            payload = {"n": n, "k": k, "m": m, "rank": answer}
    else:
        i = _require(args.i, "--i", action)
        if engine == "fast":
            result = at_query(n, k, i)
            answer = result.answer
            payload = {"n": n, "k": k, "i": i, "removed": answer, "grundy_chain_length": result.grundy_chain_length}
        else:
            if not 1 <= i <= n:
                raise InvalidArgumentError(f"i must be in 1..{n}, got {i}")
            answer = _simulated(n, k, args.sim_engine).order[i - 1]
            payload = {"n": n, "k": k, "i": i, "removed": answer}

    if args.format == "json":
        payload.update({"schema": REPORT_SCHEMA, "engine": engine})
        _emit(_dump_json(payload), args.out)
    elif args.format == "csv":
        _emit(pd.DataFrame([payload]).to_csv(index=False), args.out)
    else:
        _emit(str(answer), args.out)
    return EXIT_OK


# ============================================================================
# verify
# ============================================================================

@dataclass
class Counterexample:
    n: int
    k: int
    m: int
    expected: int
    got: int


@dataclass
class VerificationCell:
    n: int
    k: int
    passed: bool
    counterexample: Optional[Counterexample] = None


@dataclass
class LemmaCheck:
    name: str
    checked: int = 0
    failures: int = 0
    first_failure: Optional[Dict[str, int]] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def fail(self, **detail: int) -> None:
        self.failures += 1
        if self.first_failure is None:
            self.first_failure = detail


@dataclass
class VerificationReport:
    """Outcome of a JJ_k(n, m) == G(nk - m) check over a grid."""
    k_min: int
    k_max: int
    n_min: int
    n_max: int
    cells: List[VerificationCell] = field(default_factory=list)
    lemmas: List[LemmaCheck] = field(default_factory=list)
    checked: int = 0
    elapsed_seconds: float = 0.0

    @property
    def failed_cells(self) -> List[VerificationCell]:
        return [c for c in self.cells if not c.passed]

    @property
    def first_counterexample(self) -> Optional[Counterexample]:
        failed = self.failed_cells
        return failed[0].counterexample if failed else None

    @property
    def passed(self) -> bool:
        return not self.failed_cells and all(lemma.passed for lemma in self.lemmas)

    def to_dict(self) -> Dict[str, Any]:
        first = self.first_counterexample
        return {
            "schema": REPORT_SCHEMA,
            "kind": "verification",
            "grid": {"k_min": self.k_min, "k_max": self.k_max, "n_min": self.n_min, "n_max": self.n_max},
            "cells": [asdict(c) for c in self.cells],
            "first_counterexample": asdict(first) if first else None,
            "lemmas": [dict(asdict(lemma), passed=lemma.passed) for lemma in self.lemmas],
            "totals": {
                "checked": self.checked,
                "cells": len(self.cells),
                "failed_cells": len(self.failed_cells),
                "elapsed_seconds": self.elapsed_seconds,
            },
            "passed": self.passed,
        }


def verify_cell(n: int, k: int) -> VerificationCell:
    """Compare JJ_k(n, m) from simulation with G(nk - m) for every m in 1..n."""
    jj = jj_values(simulate(n, k))
    nk = n * k
    for m in range(1, n + 1):
        got = grundy_floor_k(nk - m, k)
        if got != jj[m]:
            return VerificationCell(n, k, False, Counterexample(n, k, m, jj[m], got))
    return VerificationCell(n, k, True)


def _verify_cell_args(cell: Tuple[int, int]) -> VerificationCell:
    return verify_cell(*cell)


def check_lemmas(k_min: int, k_max: int, n_min: int, n_max: int) -> List[LemmaCheck]:
    """
    Numeric checks of the supporting identities over the grid's position range.

    Covers the floor identity x - x//k - 1 == floor((k-1)x/k) for non-multiples,
    anchors G(vk) = v, floor-k recursion against the mex oracle, the bijection
    of G onto 0..n-1 over the window nk-n..nk-1, and the stage folding.
    """
    identity = LemmaCheck("floor_identity")
    anchors = LemmaCheck("anchors")
    oracle = LemmaCheck("floor_k_vs_oracle")
    bijection = LemmaCheck("window_bijection")
    folding = LemmaCheck("stage_fold")

    for k in range(k_min, k_max + 1):
        top = n_max * k
        for x in range(top + 1):
            if x % k:
                identity.checked += 1
                if x - x // k - 1 != (k - 1) * x // k:
                    identity.fail(x=x, k=k)
        for v in range(n_max + 1):
            anchors.checked += 1
            if grundy_floor_k(v * k, k) != v:
                anchors.fail(v=v, k=k)

        limit = min(top, ORACLE_LIMIT)
        table = grundy_table(limit, RuleFunction.floor_div(k))
        for x, expected in enumerate(table):
            oracle.checked += 1
            if grundy_floor_k(x, k) != expected:
                oracle.fail(x=x, k=k)

        for n in range(n_min, n_max + 1):
            bijection.checked += 1
            values = sorted(grundy_floor_k(x, k) for x in range(n * k - n, n * k))
            if values != list(range(n)):
                bijection.fail(n=n, k=k)
            folding.checked += 1
            if not stage_fold_holds(n, k):
                folding.fail(n=n, k=k)

    return [identity, anchors, oracle, bijection, folding]


def run_verification(
    k_min: int,
    k_max: int,
    n_min: int,
    n_max: int,
    jobs: int = 1,
    lemmas: bool = False,
    quiet: bool = True,
) -> VerificationReport:
    """
    Check JJ_k(n, m) == G(nk - m) for k in [k_min, k_max], n in [n_min, n_max].

    Raises:
        InvalidArgumentError: If a range is empty or out of bounds
    """
    if k_min < 2 or k_min > k_max:
        raise InvalidArgumentError(f"need 2 <= k-min <= k-max, got {k_min}..{k_max}")
    if n_min < 1 or n_min > n_max:
        raise InvalidArgumentError(f"need 1 <= n-min <= n-max, got {n_min}..{n_max}")

    report = VerificationReport(k_min, k_max, n_min, n_max)
    grid = [(n, k) for k in range(k_min, k_max + 1) for n in range(n_min, n_max + 1)]
    logger.info(f"Verifying {len(grid)} cells with {jobs} job(s)")
    start = time.perf_counter()

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = pool.map(_verify_cell_args, grid, chunksize=max(1, len(grid) // (jobs * 8)))
            report.cells = list(_progress(cells, len(grid), "verify", quiet))
    else:
        report.cells = [verify_cell(n, k) for n, k in _progress(grid, len(grid), "verify", quiet)]

    report.checked = sum(n for n, _ in grid)
    if lemmas:
        report.lemmas = check_lemmas(k_min, k_max, n_min, n_max)
    report.elapsed_seconds = round(time.perf_counter() - start, 6)

    for cell in report.failed_cells:
        logger.error(f"Counterexample: {cell.counterexample}")
    return report


def cmd_verify(args: argparse.Namespace) -> int:
    report = run_verification(
        args.k_min, args.k_max, args.n_min, args.n_max,
        jobs=args.jobs, lemmas=args.lemmas, quiet=args.quiet,
    )
    data = report.to_dict()

    if args.format == "json" and args.out is None:
        _emit(_dump_json(data), None)
    else:
        cells = len(report.cells)
        grid = f"k in [{report.k_min}, {report.k_max}], n in [{report.n_min}, {report.n_max}]"
        if report.failed_cells:
            print(_fail(f"{len(report.failed_cells)}/{cells} cells failed ({grid})"))
            print(f"  First counterexample: {asdict(report.first_counterexample)}")
        else:
            print(_ok(f"{report.checked:,} checks across {cells} cells passed ({grid})"))
        for lemma in report.lemmas:
            line = f"{lemma.name}: {lemma.checked:,} checked, {lemma.failures} failed"
            print(_ok(line) if lemma.passed else _fail(line))
        print(f"Elapsed: {report.elapsed_seconds:.3f}s")
        if args.out is not None:
            _emit(_dump_json(data), args.out)

    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


# ============================================================================
# bench
# ============================================================================

@dataclass
class BenchReport:
    """Timing record for one method on one query set."""
    method: str
    n: int
    k: int
    queries: int
    status: str = "ok"
    samples: int = 0
    median_seconds: Optional[float] = None
    p95_seconds: Optional[float] = None
    chain_median: Optional[float] = None
    chain_max: Optional[int] = None
    chain_constant: Optional[float] = None
    answer: Optional[str] = None
    detail: Optional[str] = None


def _digest(values: Sequence[int]) -> str:
    return hashlib.sha256(",".join(map(str, values)).encode()).hexdigest()[:16]


def _timed(fn: Callable[[], Any], repeat: int) -> Tuple[List[float], Any]:
    times = []
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return times, result


def _fill_times(record: BenchReport, times: List[float]) -> None:
    series = pd.Series(times, dtype="float64")
    record.samples = len(times)
    record.median_seconds = float(series.median())
    record.p95_seconds = float(series.quantile(0.95))


def _fill_chains(record: BenchReport, chains: List[int]) -> None:
    series = pd.Series(chains, dtype="int64")
    record.chain_median = float(series.median())
    record.chain_max = int(series.max())
    scale = record.k * math.log(record.n * record.k) if record.n * record.k > 1 else 1.0
    record.chain_constant = round(record.chain_max / scale, 6)


def bench_method(method: str, n: int, k: int, ms: List[int], repeat: int = 3) -> BenchReport:
    """
    Time one method. Whole-run methods are repeated; bridge-rank is timed per query.

    Raises:
        InfeasibleError: If the method would have to materialize a circle above its limit
    """
    record = BenchReport(method=method, n=n, k=k, queries=len(ms))

    if method in ("simulate-naive", "simulate-ostree"):
        engine = Engine.NAIVE if method == "simulate-naive" else Engine.OSTREE
        _check_simulation(method, engine, n, k)
        times, trace = _timed(lambda: simulate(n, k, engine), repeat)
        record.answer = _digest(trace.order)
    elif method == "bridge-order":
        if n > SIM_LIMIT:
            raise InfeasibleError(f"{method} limited to n <= {SIM_LIMIT}, got n={n}")
        times, order = _timed(lambda: full_order_fast(n, k), repeat)
        record.answer = _digest(order)
    elif method == "survivor-classic":
        if n > SIM_LIMIT:
            raise InfeasibleError(f"{method} limited to n <= {SIM_LIMIT}, got n={n}")
        times, survivor = _timed(lambda: survivor_classic(n, k), repeat)
        record.answer = str(survivor)
    elif method == "survivor-fast":
        times, survivor = _timed(lambda: survivor_fast(n, k), repeat)
        record.answer = str(survivor)
        _fill_chains(record, [at_query(n, k, n).grundy_chain_length])
    elif method == "bridge-rank":
        times, ranks, chains = [], [], []
        for m in ms:
            start = time.perf_counter()
            result = rank_query(n, k, m)
            times.append(time.perf_counter() - start)
            ranks.append(result.answer)
            chains.append(result.grundy_chain_length)
        record.answer = _digest(ranks)
        _fill_chains(record, chains)
    else:
        raise InvalidArgumentError(f"unknown bench method: {method}")

    _fill_times(record, times)
    return record


def _agreement(records: List[BenchReport]) -> Dict[str, Optional[bool]]:
    """Whether methods producing the same quantity agree (None when fewer than two ran)."""
    answers = {r.method: r.answer for r in records if r.status == "ok"}

    def agree(group: Sequence[str]) -> Optional[bool]:
        present = [answers[m] for m in group if m in answers]
        return len(set(present)) == 1 if len(present) > 1 else None

    return {"order": agree(ORDER_METHODS), "survivor": agree(SURVIVOR_METHODS)}


def run_bench(
    n: int,
    k: int,
    methods: Sequence[str],
    queries: int = 1000,
    seed: int = 0,
    repeat: int = 3,
    quiet: bool = True,
) -> Dict[str, Any]:
    """Benchmark the selected methods on one seeded query set; infeasible methods are recorded, not raised."""
    if n < 1 or k < 2:
        raise InvalidArgumentError(f"need n >= 1 and k >= 2, got n={n}, k={k}")
    if queries < 1:
        raise InvalidArgumentError(f"--queries must be >= 1, got {queries}")
    if repeat < 1:
        raise InvalidArgumentError(f"--repeat must be >= 1, got {repeat}")
    rng = random.Random(seed)
    ms = [rng.randint(1, n) for _ in range(queries)]

    records = []
    for method in _progress(methods, len(methods), "bench", quiet):
        try:
            records.append(bench_method(method, n, k, ms, repeat=repeat))
        except InfeasibleError as e:
            logger.warning(f"{method}: {e}")
            records.append(BenchReport(method=method, n=n, k=k, queries=queries, status="infeasible", detail=str(e)))

    return {
        "schema": REPORT_SCHEMA,
        "kind": "bench",
        "params": {"n": n, "k": k, "queries": queries, "seed": seed, "repeat": repeat},
        "records": [asdict(r) for r in records],
        "agreement": _agreement(records),
    }


def _format_bench(report: Dict[str, Any]) -> str:
    lines = [f"{'Method':<18} {'Status':<11} {'Median':>12} {'P95':>12} {'Chain max':>10} {'c':>8}"]
    lines.append("-" * 76)
    for r in report["records"]:
        median = f"{r['median_seconds'] * 1e6:,.1f} us" if r["median_seconds"] is not None else "-"
        p95 = f"{r['p95_seconds'] * 1e6:,.1f} us" if r["p95_seconds"] is not None else "-"
        chain = str(r["chain_max"]) if r["chain_max"] is not None else "-"
        c = f"{r['chain_constant']:.3f}" if r["chain_constant"] is not None else "-"
        lines.append(f"{r['method']:<18} {r['status']:<11} {median:>12} {p95:>12} {chain:>10} {c:>8}")
    for key, value in report["agreement"].items():
        if value is not None:
            lines.append(_ok(f"{key} outputs agree") if value else _fail(f"{key} outputs differ"))
    return "\n".join(lines)


def cmd_bench(args: argparse.Namespace) -> int:
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    unknown = [m for m in methods if m not in BENCH_METHODS]
    if unknown:
        raise InvalidArgumentError(f"unknown bench method(s): {', '.join(unknown)}")

    report = run_bench(args.n, args.k, methods, queries=args.queries, seed=args.seed,
                       repeat=args.repeat, quiet=args.quiet)

    if args.format == "json" and args.out is None:
        _emit(_dump_json(report), None)
    else:
        print(_format_bench(report))
        if args.out is not None:
            _emit(_dump_json(report), args.out)

    if any(r["status"] == "infeasible" for r in report["records"]):
        return EXIT_INFEASIBLE
    if any(v is False for v in report["agreement"].values()):
        return EXIT_INVARIANT
    return EXIT_OK


# ============================================================================
# play
# ============================================================================

def engine_move(x: int, f: RuleFunction) -> int:
    """Smallest winning removal, or 1 stone from a losing position."""
    winning = optimal_moves(x, f)
    return min(winning) if winning else 1


def play_session(
    n: int,
    k: int,
    human_first: bool,
    input_fn: Optional[Callable[[str], str]] = None,
    output: Callable[[str], None] = print,
) -> str:
    """
    Text Maximum Nim session against the engine.

    Returns:
        "human" or "engine" for the winner, or "aborted" on EOF
    """
    input_fn = input_fn or input
    f = RuleFunction.floor_div(k)
    x = n
    human_turn = human_first

    while True:
        cap = f(x)
        who = "You" if human_turn else "Engine"
        if cap == 0:
            winner = "engine" if human_turn else "human"
            output(f"Pile: {x}. {who} cannot move (at most floor({x}/{k}) = 0 stones).")
            output(_style("Engine wins." if winner == "engine" else "You win!", "1"))
            return winner

        if not human_turn:
            u = engine_move(x, f)
            output(f"Pile: {x}. Engine removes {u}.")
            x -= u
            human_turn = True
            continue

        while True:
            try:
                reply = input_fn(f"Pile: {x}. Remove how many stones (1-{cap})? ")
            except EOFError:
                output("\nSession ended.")
                return "aborted"
            try:
                u = int(reply.strip())
            except ValueError:
                output(f"Enter a whole number between 1 and {cap}.")
                continue
            if 1 <= u <= cap:
                break
            output(f"Illegal move: remove between 1 and {cap} stones.")
        x -= u
        human_turn = False


def cmd_play(args: argparse.Namespace) -> int:
    if args.n < 0 or args.k < 2:
        raise InvalidArgumentError(f"need n >= 0 and k >= 2, got n={args.n}, k={args.k}")
    play_session(args.n, args.k, args.human_first)
    return EXIT_OK


# ============================================================================
# Entry point
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json", "csv"], default="text", help="Output format")
    common.add_argument("--out", type=Path, help="Write output/report to this path")
    common.add_argument("--jobs", type=int, default=1, help="Worker processes for sweeps")
    common.add_argument("--seed", type=int, default=0, help="Seed for random query sets")
    common.add_argument("--verbose", action="store_true", help="Log at INFO level")
    common.add_argument("--quiet", action="store_true", help="Hide progress bars")

    parser = argparse.ArgumentParser(
        prog="grundy-josephus",
        description="Maximum Nim Grundy numbers and fast Josephus queries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("grundy", parents=[common], help="Grundy values of Maximum Nim")
    rule = p.add_mutually_exclusive_group(required=True)
    rule.add_argument("--k", type=int, help="Rule function floor(x/k)")
    rule.add_argument("--rule-file", type=Path, help="JSON rule file")
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--x", type=int, help="Single position")
    where.add_argument("--range", type=int, nargs=2, metavar=("LO", "HI"), help="Positions LO..HI as CSV")
    p.add_argument("--method", choices=[m.value for m in Method], help="Evaluator (default: fastest applicable)")
    p.set_defaults(handler=cmd_grundy)

    p = sub.add_parser("josephus", parents=[common], help="Josephus queries")
    p.add_argument("action", choices=["order", "survivor", "rank", "at"])
    p.add_argument("--n", type=int, required=True, help="Circle size")
    p.add_argument("--k", type=int, required=True, help="Step")
    p.add_argument("--m", type=int, help="Number to rank (rank)")
    p.add_argument("--i", type=int, help="Removal step (at)")
    p.add_argument("--engine", choices=["sim", "fast"], help="Simulation or Grundy bridge")
    p.add_argument("--sim-engine", choices=[e.value for e in Engine], default=Engine.OSTREE.value,
                   help="Simulation engine when --engine sim")
    p.set_defaults(handler=cmd_josephus)

    p = sub.add_parser("verify", parents=[common], help="Check JJ_k(n,m) = G(nk-m) over a grid")
    p.add_argument("--k-min", type=int, default=2)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--lemmas", action="store_true", help="Also check the supporting lemmas")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bench", parents=[common], help="Time simulation against bridge queries")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--queries", type=int, default=1000, help="Random m values for bridge-rank")
    p.add_argument("--methods", default="bridge-rank,survivor-fast",
                   help=f"Comma-separated subset of: {', '.join(BENCH_METHODS)}")
    p.add_argument("--repeat", type=int, default=3, help="Repetitions for whole-run methods")
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("play", parents=[common], help="Play Maximum Nim against the engine")
    p.add_argument("--n", type=int, required=True, help="Initial pile")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--human-first", action="store_true")
    p.set_defaults(handler=cmd_play)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    level = logging.INFO if args.verbose else getattr(logging, LOG_LEVEL, logging.WARNING)
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")

    try:
        return args.handler(args)
    except InvalidArgumentError as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE
    except (CheckedOverflowError, BoundExceededError, InfeasibleError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except InvariantViolationError as e:
        print(f"[ERROR] internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INVARIANT
    except (GrundyError, ValueError, OSError) as e:
        print(f"[ERROR] {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
