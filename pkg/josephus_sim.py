"""
Josephus simulator: every k-th number is removed from a circle of 1..n.

Counting starts at number 1, so the first removal is k whenever k <= n. After
each removal the count restarts at the next remaining number. Removal runs
until the circle is empty, which makes the survivor the n-th removal and
gives it JJ_k(n, survivor) = 0.

Two engines produce identical traces:
- naive: linked pointer walk, O(n*k)
- ostree: order-statistic list jumping (k-1) mod remaining, O(n log n)
"""

import json
import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import pandas as pd
from sortedcontainers import SortedList

from grundy_core import InvalidArgumentError, check_range

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["i", "removed", "round"]


class Engine(Enum):
    NAIVE = "naive"
    OSTREE = "ostree"


@dataclass(frozen=True)
class EliminationTrace:
    """Complete removal order of a circle of n numbers with step k."""
    n: int
    k: int
    order: Tuple[int, ...]
    survivor: int
    rounds: Optional[Tuple[int, ...]] = None

    def position_of(self, m: int) -> int:
        """1-based removal step of number m (the survivor is step n)."""
        _check_member(self.n, m, "m")
        return self.order.index(m) + 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "order": list(self.order),
            "survivor": self.survivor,
            "rounds": list(self.rounds) if self.rounds is not None else None,
        }


def _check_params(n: int, k: int) -> None:
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    check_range(n * k, "n*k")


def _check_member(n: int, value: int, what: str) -> None:
    if not 1 <= value <= n:
        raise InvalidArgumentError(f"{what} must be in 1..{n}, got {value}")


# ============================================================================
# Engines
# ============================================================================

def _simulate_naive(n: int, k: int) -> List[int]:
    # nxt[j] is the number after j on the circle; index 0 unused
    nxt = list(range(1, n + 2))
    nxt[n] = 1
    prev = n
    order = []
    for remaining in range(n, 0, -1):
        for _ in range((k - 1) % remaining):
            prev = nxt[prev]
        victim = nxt[prev]
        nxt[prev] = nxt[victim]
        order.append(victim)
    return order


def _simulate_ostree(n: int, k: int) -> List[int]:
    remaining = SortedList(range(1, n + 1))
    idx = 0
    order = []
    while remaining:
        idx = (idx + k - 1) % len(remaining)
        order.append(remaining.pop(idx))
    return order


_ENGINES = {
    Engine.NAIVE: _simulate_naive,
    Engine.OSTREE: _simulate_ostree,
}


def simulate(n: int, k: int, engine: Engine = Engine.OSTREE) -> EliminationTrace:
    """
    Run the Josephus process on 1..n removing every k-th number.

    Args:
        n: Circle size (>= 1)
        k: Step (>= 2)
        engine: Simulation engine; both return identical traces

    Returns:
        EliminationTrace whose last entry is the survivor

    Raises:
        InvalidArgumentError: If n < 1 or k < 2
    """
    _check_params(n, k)
    order = _ENGINES[engine](n, k)
    logger.debug(f"simulate n={n} k={k} engine={engine.value} survivor={order[-1]}")
    return EliminationTrace(n=n, k=k, order=tuple(order), survivor=order[-1])


# ============================================================================
# JJ by definition
# ============================================================================

def jj_values(trace: EliminationTrace) -> Dict[int, int]:
    """JJ_k(n, m) = n - i for every m, where m is the i-th removal."""
    return {m: trace.n - i for i, m in enumerate(trace.order, 1)}


def jj_by_definition(n: int, k: int, m: int) -> int:
    """JJ_k(n, m) from a full simulation. The survivor gets 0."""
    _check_params(n, k)
    _check_member(n, m, "m")
    return n - simulate(n, k).position_of(m)


def first_stage(n: int, k: int) -> Tuple[int, ...]:
    """Numbers removed before the count first wraps: k, 2k, ..., tk with t = n // k."""
    _check_params(n, k)
    return tuple(range(k, n + 1, k))


# ============================================================================
# Rounds
# ============================================================================

def label_rounds(trace: EliminationTrace) -> EliminationTrace:
    """
    Return a copy of trace with round labels filled in.

    A new round starts every time the count wraps from the highest remaining
    number back to the lowest, so one count may open several rounds when k
    exceeds the circle. The survivor keeps the round of the last real removal.

    Raises:
        ValueError: If the order is not the one simulate(n, k) produces
    """
    remaining = SortedList(range(1, trace.n + 1))
    rounds = []
    current = 1
    start = 0
    for victim in trace.order[:-1]:
        wraps, idx = divmod(start + trace.k - 1, len(remaining))
        if remaining[idx] != victim:
            raise ValueError(
                f"trace order diverges from simulation at removal {len(rounds) + 1}: "
                f"expected {remaining[idx]}, got {victim}"
            )
        current += wraps
        rounds.append(current)
        remaining.pop(idx)
        start = idx
    rounds.append(current)
    return replace(trace, rounds=tuple(rounds))


# ============================================================================
# Export
# ============================================================================

def trace_to_frame(trace: EliminationTrace) -> pd.DataFrame:
    if trace.rounds is None:
        trace = label_rounds(trace)
    return pd.DataFrame({
        "i": range(1, trace.n + 1),
        "removed": trace.order,
        "round": trace.rounds,
    }, columns=CSV_COLUMNS)


def trace_to_csv(trace: EliminationTrace, path: Optional[Union[str, Path]] = None) -> Optional[str]:
    """Write trace as CSV `i,removed,round`; returns the text when path is None."""
    frame = trace_to_frame(trace)
    if path is None:
        return frame.to_csv(index=False)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    return None


def trace_to_json(trace: EliminationTrace) -> str:
    if trace.rounds is None:
        trace = label_rounds(trace)
    return json.dumps(trace.to_dict(), indent=2) + "\n"


def write_trace(trace: EliminationTrace, path: Union[str, Path], fmt: Optional[str] = None) -> Path:
    """
    Export a trace to CSV or JSON.

    Args:
        trace: Trace to export
        path: Output file
        fmt: "csv" or "json"; inferred from the suffix when omitted

    Returns:
        The written path
    """
    path = Path(path)
    fmt = fmt or path.suffix.lstrip(".").lower() or "csv"
    if fmt == "csv":
        trace_to_csv(trace, path)
    elif fmt == "json":
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            f.write(trace_to_json(trace))
    else:
        raise InvalidArgumentError(f"unsupported trace format: {fmt}")
    logger.info(f"Trace n={trace.n} k={trace.k} written to {path}")
    return path
