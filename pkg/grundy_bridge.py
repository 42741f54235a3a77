"""
Fast Josephus queries through Maximum Nim Grundy numbers.

With f(x) = floor(x/k), the number m is removed at step i = n - G(nk - m).
Running the floor-k descent upward (inverse_step) from the anchor v*k,
where G(v*k) = v, finds the number removed at any given step without building
the circle. Both directions cost one Grundy chain, roughly k*log(n*k) steps.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Tuple

from grundy_core import (
    InvalidArgumentError,
    InvariantViolationError,
    check_range,
    floor_k_descent,
    grundy_floor_k,
)

logger = logging.getLogger(__name__)

# Below this many queries a process pool costs more than it saves
PARALLEL_MIN_N = 20000


@dataclass(frozen=True)
class BridgeQueryResult:
    """Answer of one bridge query plus the Grundy chain length it took."""
    n: int
    k: int
    answer: int
    grundy_chain_length: int
    m: Optional[int] = None
    i: Optional[int] = None


def _check_query(n: int, k: int) -> int:
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    return check_range(n * k, "n*k")


# ============================================================================
# Rank of a number
# ============================================================================

def rank_query(n: int, k: int, m: int) -> BridgeQueryResult:
    nk = _check_query(n, k)
    if not 1 <= m <= n:
        raise InvalidArgumentError(f"m must be in 1..{n}, got {m}")
    value, steps = floor_k_descent(nk - m, k)
    return BridgeQueryResult(n=n, k=k, m=m, answer=n - value, grundy_chain_length=steps)


def elimination_rank(n: int, k: int, m: int) -> int:
    """1-based step at which m is removed (survivor ranked n)."""
    return rank_query(n, k, m).answer


# ============================================================================
# Number removed at a step
# ============================================================================

def inverse_step(y: int, k: int) -> int:
    """
    Unique x with x % k != 0 and x - x//k - 1 == y.

    Writing x = q*k + r with 1 <= r <= k-1 gives y = q*(k-1) + r - 1, so
    q, r-1 = divmod(y, k-1).
    """
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    check_range(y, "y")
    q, r = divmod(y, k - 1)
    x = check_range(q * k + r + 1, "inverse_step")
    if x % k == 0 or x - x // k - 1 != y:
        raise InvariantViolationError(f"inverse_step roundtrip failed for y={y}, k={k}")
    return x


def at_query(n: int, k: int, i: int) -> BridgeQueryResult:
    nk = _check_query(n, k)
    if not 1 <= i <= n:
        raise InvalidArgumentError(f"i must be in 1..{n}, got {i}")

    # Anchor: G(v*k) = v. Climb while below the window nk-n .. nk-1.
    x = (n - i) * k
    window_low = nk - n
    steps = 0
    while x < window_low:
        # inverse_step inlined; overshoot is checked below
        q, r = divmod(x, k - 1)
        x = q * k + r + 1
        steps += 1
    if x > nk - 1:
        raise InvariantViolationError(
            f"Grundy chain overshot window for n={n}, k={k}, i={i}: x={x} > {nk - 1}"
        )
    return BridgeQueryResult(n=n, k=k, i=i, answer=nk - x, grundy_chain_length=steps)


def eliminated_at(n: int, k: int, i: int) -> int:
    """Number removed at step i (step n is the survivor)."""
    return at_query(n, k, i).answer


def survivor_fast(n: int, k: int) -> int:
    """Survivor of the Josephus circle; the unique m with G(nk - m) = 0."""
    return eliminated_at(n, k, n)


def _order_chunk(steps: range, n: int, k: int) -> List[int]:
    return [eliminated_at(n, k, i) for i in steps]


def full_order_fast(n: int, k: int, jobs: int = 1) -> Tuple[int, ...]:
    """
    Complete removal order, one bridge query per step.

    Args:
        n: Circle size
        k: Step
        jobs: Worker processes; chunks are reassembled in step order

    Returns:
        Tuple (eliminated_at(n, k, 1), ..., eliminated_at(n, k, n))
    """
    _check_query(n, k)
    if jobs <= 1 or n < PARALLEL_MIN_N:
        return tuple(_order_chunk(range(1, n + 1), n, k))

    size = -(-n // jobs)
    chunks = [range(lo, min(lo + size, n + 1)) for lo in range(1, n + 1, size)]
    logger.info(f"full_order_fast n={n} k={k} across {len(chunks)} chunks")
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(partial(_order_chunk, n=n, k=k), chunks)
        return tuple(m for part in parts for m in part)


# ============================================================================
# Cross-checks
# ============================================================================

def survivor_classic(n: int, k: int) -> int:
    """Survivor by the textbook recurrence J(j) = (J(j-1) + k) mod j. O(n)."""
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    j = 0
    for size in range(2, n + 1):
        j = (j + k) % size
    return j + 1


def stage_fold_holds(n: int, k: int) -> bool:
    """
    Check the first-stage/second-stage folding of the Grundy window.

    The first stage removes k, 2k, ..., tk (t = n // k) and G(nk - sk) = n - s
    there. Counting then restarts at tk + 1, leaving a circle of n - t numbers;
    a number at 1-based position p of that circle satisfies
    G(nk - m) = G((n - t)k - p).
    """
    nk = _check_query(n, k)
    t = n // k
    for s in range(1, t + 1):
        if grundy_floor_k(nk - s * k, k) != n - s:
            logger.warning(f"first stage mismatch n={n} k={k} s={s}")
            return False

    second = [m for m in range(t * k + 1, n + 1)]
    second += [m for m in range(1, t * k) if m % k]
    base = (n - t) * k
    for p, m in enumerate(second, 1):
        if grundy_floor_k(nk - m, k) != grundy_floor_k(base - p, k):
            logger.warning(f"stage fold mismatch n={n} k={k} m={m} p={p}")
            return False
    return True
