#!/usr/bin/env python3
"""
Walk through the n=10, k=3 circle end to end.

1. Simulate the circle and label rounds
2. Read JJ_3(10, m) off the removal order
3. Recompute every value from Grundy numbers and the bridge queries
"""

from grundy_bridge import at_query, elimination_rank
from grundy_core import RuleFunction, grundy_floor_k, grundy_table
from josephus_sim import jj_values, label_rounds, simulate


def main():
    """Print the worked example and its Grundy counterpart."""
    n, k = 10, 3

    print("=" * 70)
    print(f"JOSEPHUS CIRCLE n={n}, k={k} AND MAXIMUM NIM f(x) = x // {k}")
    print("=" * 70)

    # =========================================================================
    # STEP 1: Simulate
    # =========================================================================

    trace = label_rounds(simulate(n, k))
    print(f"\n[STEP 1] Removal order: {list(trace.order[:-1])}, survivor {trace.survivor}\n")
    for i, (m, r) in enumerate(zip(trace.order, trace.rounds), 1):
        print(f"  step {i:>2}: remove {m:>2} (round {r})")

    # =========================================================================
    # STEP 2: JJ by definition against G(nk - m)
    # =========================================================================

    print(f"\n[STEP 2] JJ_{k}({n}, m) against G({n * k} - m)\n")
    jj = jj_values(trace)
    table = grundy_table(n * k, RuleFunction.floor_div(k))
    print(f"  {'m':>3} {'JJ':>4} {'G(nk-m)':>8} {'oracle':>7}")
    for m in range(1, n + 1):
        g = grundy_floor_k(n * k - m, k)
        mark = "" if g == jj[m] == table[n * k - m] else "  MISMATCH"
        print(f"  {m:>3} {jj[m]:>4} {g:>8} {table[n * k - m]:>7}{mark}")

    # =========================================================================
    # STEP 3: Bridge queries
    # =========================================================================

    print("\n[STEP 3] Bridge queries\n")
    for m in (3, 5, 10, 4):
        print(f"  rank of {m:>2}: {elimination_rank(n, k, m)}")
    result = at_query(n, k, n)
    print(f"  survivor via Grundy chain: {result.answer} ({result.grundy_chain_length} inverse steps)")


if __name__ == "__main__":
    main()
