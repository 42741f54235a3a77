#!/usr/bin/env python3
"""
Fit the chain-length constant c in steps <= c * k * log(n*k).

Samples bridge rank and step queries over a spread of n for each k and prints
the worst ratio seen. Usage:

    python scripts/chain_length_fit.py --k 2 3 5 7 --samples 2000
"""

import argparse
import math
import random
from typing import List

import pandas as pd
from tqdm import tqdm

from grundy_bridge import at_query, rank_query


def fit(ks: List[int], samples: int, seed: int) -> pd.DataFrame:
    rng = random.Random(seed)
    rows = []
    for k in ks:
        for _ in tqdm(range(samples), desc=f"k={k}", leave=False):
            n = int(10 ** rng.uniform(1, 12))
            rank = rank_query(n, k, rng.randint(1, n))
            step = at_query(n, k, rng.randint(1, n))
            scale = k * math.log(n * k)
            rows.append({
                "k": k,
                "n": n,
                "rank_chain": rank.grundy_chain_length,
                "at_chain": step.grundy_chain_length,
                "ratio": max(rank.grundy_chain_length, step.grundy_chain_length) / scale,
            })
    return pd.DataFrame(rows)


def main():
    parser = argparse.ArgumentParser(description="Fit the Grundy chain-length constant")
    parser.add_argument("--k", type=int, nargs="+", default=[2, 3, 5, 7, 10])
    parser.add_argument("--samples", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    frame = fit(args.k, args.samples, args.seed)
    summary = frame.groupby("k").agg(
        rank_max=("rank_chain", "max"),
        at_max=("at_chain", "max"),
        c=("ratio", "max"),
    )
    print(summary.to_string())
    print(f"\n[OK] fitted c = {frame['ratio'].max():.3f}")


if __name__ == "__main__":
    main()
