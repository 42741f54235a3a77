"""
Grundy numbers for Maximum Nim.

A single pile of x stones; a move removes between 1 and f(x) stones, where the
rule function f satisfies f(0) = 0 and 0 <= f(m) - f(m-1) <= 1. This module
holds three evaluators that must always agree:

- grundy_oracle: brute-force mex recursion over every position 0..x
- grundy_levine: the jump-point descent valid for any rule function
- grundy_floor_k: the closed descent for f(x) = floor(x / k)

It also owns the shared error hierarchy used by the Josephus and bridge modules.
"""

import json
import logging
import os
import random
from dataclasses import dataclass, field
from enum import Enum
from itertools import accumulate, count
from pathlib import Path
from typing import Callable, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple, Union

from dotenv import load_dotenv

load_dotenv()

logger = logging.getLogger(__name__)

# Configuration
ORACLE_LIMIT = int(os.getenv("GRUNDY_ORACLE_LIMIT", "100000"))
MAX_CHECKED_INT = 2**63 - 1


# ============================================================================
# Errors
# ============================================================================

class GrundyError(Exception):
    """Base class for every error raised by the Grundy/Josephus modules."""


class BoundExceededError(GrundyError):
    """Position is above the oracle limit; use a fast evaluator instead."""


class CheckedOverflowError(GrundyError, OverflowError):
    """A value left the checked integer range [0, 2**63 - 1]."""


class InvalidRuleFunctionError(GrundyError, ValueError):
    """Rule function breaks f(0) = 0 or the 0 <= f(m) - f(m-1) <= 1 step condition."""


class InvalidArgumentError(GrundyError, ValueError):
    """Query parameter out of range (n < 1, k < 2, m or i outside 1..n)."""


class InvariantViolationError(GrundyError, AssertionError):
    """An internal invariant failed. Never expected to fire."""


class InfeasibleError(GrundyError):
    """Requested method cannot run at the requested scale."""


def check_range(value: int, what: str = "value") -> int:
    """Return value unchanged, or raise CheckedOverflowError outside [0, MAX_CHECKED_INT]."""
    if value < 0 or value > MAX_CHECKED_INT:
        raise CheckedOverflowError(f"{what}={value} outside checked range [0, 2**63 - 1]")
    return value


# ============================================================================
# Rule functions
# ============================================================================

class RuleKind(Enum):
    """Descriptor of a rule function."""
    FLOOR_DIV = "floor_div"     # f(x) = x // k
    TABULATED = "tabulated"     # f given by increments in {0, 1}


@dataclass(frozen=True)
class RuleFunction:
    """
    Removal cap f for Maximum Nim.

    Tabulated rule functions are stored as their increment sequence, so
    f(m) = increments[0] + ... + increments[m-1] and validity holds by
    construction. They are defined on 0..len(increments).
    """
    kind: RuleKind
    k: Optional[int] = None
    increments: Tuple[int, ...] = ()
    _values: Tuple[int, ...] = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        if self.kind is RuleKind.FLOOR_DIV:
            if self.k is None or self.k < 2:
                raise InvalidRuleFunctionError(f"FloorDiv needs k >= 2, got k={self.k}")
        else:
            bad = [d for d in self.increments if d not in (0, 1)]
            if bad:
                raise InvalidRuleFunctionError(f"increments must be 0 or 1, got {bad[0]!r}")
            object.__setattr__(self, "_values", (0, *accumulate(self.increments)))

    @classmethod
    def floor_div(cls, k: int) -> "RuleFunction":
        return cls(RuleKind.FLOOR_DIV, k=k)

    @classmethod
    def tabulated(cls, increments: Iterable[int]) -> "RuleFunction":
        return cls(RuleKind.TABULATED, increments=tuple(increments))

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "RuleFunction":
        """
        Build a tabulated rule function from f(0), f(1), ... directly.

        Raises:
            InvalidRuleFunctionError: If f(0) != 0 or any step leaves {0, 1}
        """
        values = list(values)
        if not values or values[0] != 0:
            raise InvalidRuleFunctionError("rule function must satisfy f(0) = 0")
        steps = [b - a for a, b in zip(values, values[1:])]
        for m, step in enumerate(steps, 1):
            if step not in (0, 1):
                raise InvalidRuleFunctionError(
                    f"step condition violated at m={m}: f(m) - f(m-1) = {step}"
                )
        return cls.tabulated(steps)

    @classmethod
    def random(cls, length: int, rng: Optional[random.Random] = None, p: float = 0.5) -> "RuleFunction":
        """Random valid rule function on 0..length; each increment is 1 with probability p."""
        rng = rng or random.Random()
        return cls.tabulated(1 if rng.random() < p else 0 for _ in range(length))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RuleFunction":
        """
        Load a rule file.

        Accepted JSON shapes: a bare list of increments, {"increments": [...]},
        {"values": [...]} or {"k": 3} for FloorDiv.
        """
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)

        if isinstance(data, list):
            return cls.tabulated(data)
        if isinstance(data, dict):
            if "k" in data:
                return cls.floor_div(int(data["k"]))
            if "increments" in data:
                return cls.tabulated(data["increments"])
            if "values" in data:
                return cls.from_values(data["values"])
        raise InvalidRuleFunctionError(f"unrecognised rule file layout: {path}")

    @property
    def domain_limit(self) -> Optional[int]:
        """Largest pile size the rule function is defined on (None when unbounded)."""
        if self.kind is RuleKind.FLOOR_DIV:
            return None
        return len(self.increments)

    def __call__(self, m: int) -> int:
        if m < 0:
            raise InvalidArgumentError(f"pile size must be non-negative, got {m}")
        if self.kind is RuleKind.FLOOR_DIV:
            return m // self.k
        if m >= len(self._values):
            raise InvalidArgumentError(
                f"pile size {m} outside tabulated range 0..{len(self.increments)}"
            )
        return self._values[m]

    def __str__(self) -> str:
        if self.kind is RuleKind.FLOOR_DIV:
            return f"FloorDiv({self.k})"
        return f"Tabulated(len={len(self.increments)})"


RuleLike = Callable[[int], int]


# ============================================================================
# Mex recursion
# ============================================================================

def mex(s: Iterable[int]) -> int:
    """Smallest non-negative integer not in s."""
    s = s if isinstance(s, (set, frozenset)) else set(s)
    return next(v for v in count() if v not in s)


def moves(x: int, f: RuleLike) -> FrozenSet[int]:
    """Positions reachable from x in one move: {x - u : 1 <= u <= f(x)}."""
    return frozenset(range(x - f(x), x))


def grundy_table(limit: int, f: RuleLike) -> Tuple[int, ...]:
    """
    Grundy numbers of positions 0..limit by the mex recursion.

    This is the oracle's memo table. Cost is quadratic in the worst case,
    hence the ORACLE_LIMIT cap.

    Raises:
        BoundExceededError: If limit exceeds ORACLE_LIMIT
    """
    if limit > ORACLE_LIMIT:
        raise BoundExceededError(
            f"x={limit} above oracle limit {ORACLE_LIMIT}; use the levine or floork evaluator"
        )
    table: List[int] = []
    for y in range(limit + 1):
        fy = f(y)
        # move(y) is the window y-fy .. y-1
        table.append(mex(set(table[y - fy:y])) if fy else 0)
    return tuple(table)


def grundy_oracle(x: int, f: RuleLike) -> int:
    """Ground-truth Grundy number of position x (see grundy_table)."""
    return grundy_table(x, f)[x]


# ============================================================================
# Fast evaluators
# ============================================================================

def grundy_levine(x: int, f: RuleLike) -> int:
    """
    Grundy number for any valid rule function by descending jump points.

    While f(x) == f(x-1) the value equals G(x - f(x) - 1); at a jump point
    (f(x) > f(x-1)) the value is f(x).

    Raises:
        InvalidRuleFunctionError: If a step outside {0, 1} is met on the way down
    """
    while x > 0:
        fx = f(x)
        fprev = f(x - 1)
        step = fx - fprev
        if step not in (0, 1):
            raise InvalidRuleFunctionError(
                f"step condition violated at m={x}: f(m) - f(m-1) = {step}"
            )
        if fprev > x - 1:
            raise InvalidRuleFunctionError(f"f(m) > m at m={x - 1}: f(m) = {fprev}")
        if step == 1:
            return fx
        x -= fx + 1
    if f(0) != 0:
        raise InvalidRuleFunctionError(f"rule function must satisfy f(0) = 0, got {f(0)}")
    return 0


class Descent(NamedTuple):
    """Result of the floor-k descent: Grundy value and iteration count."""
    value: int
    steps: int


def floor_k_descent(x: int, k: int) -> Descent:
    """
    Floor-k Grundy recursion with its chain length.

    Iterates x <- floor((k-1)x/k) while x is not a multiple of k, then returns
    x/k. For non-multiples floor((k-1)x/k) == x - x//k - 1, which is the form
    used here so no intermediate exceeds x.
    """
    if k < 2:
        raise InvalidArgumentError(f"k must be >= 2, got {k}")
    check_range(x, "x")
    steps = 0
    while x % k:
        x = x - x // k - 1
        steps += 1
    return Descent(x // k, steps)


def grundy_floor_k(x: int, k: int) -> int:
    """Grundy number of Maximum Nim with f(x) = floor(x/k)."""
    return floor_k_descent(x, k).value


class Method(Enum):
    ORACLE = "oracle"
    LEVINE = "levine"
    FLOORK = "floork"


def grundy(x: int, f: RuleFunction, method: Optional[Method] = None) -> int:
    """
    Grundy number by the named evaluator, or the applicable fast one.

    Default is the floor-k recursion for FloorDiv and Levine otherwise.
    """
    if x < 0:
        raise InvalidArgumentError(f"position must be non-negative, got {x}")
    check_range(x, "x")
    if method is None:
        method = Method.FLOORK if f.kind is RuleKind.FLOOR_DIV else Method.LEVINE

    if method is Method.ORACLE:
        return grundy_oracle(x, f)
    if method is Method.LEVINE:
        return grundy_levine(x, f)
    if f.kind is not RuleKind.FLOOR_DIV:
        raise InvalidArgumentError(f"floork evaluator needs a FloorDiv rule function, got {f}")
    return grundy_floor_k(x, f.k)


# ============================================================================
# P/N positions
# ============================================================================

def is_p_position(x: int, f: RuleFunction) -> bool:
    """True iff the player to move from x loses under optimal play (G(x) == 0)."""
    return grundy(x, f) == 0


def optimal_moves(x: int, f: RuleFunction) -> FrozenSet[int]:
    """Removal counts u that move x to a P-position; empty iff x is a P-position."""
    return frozenset(u for u in range(1, f(x) + 1) if grundy(x - u, f) == 0)
