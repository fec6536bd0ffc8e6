"""Large sieve ratios for the family over a dyadic grid.

The ratio divides the best lower estimate of the operator norm by
(M + N + (MN)^(2/3)) (MN)^eps.  A flat log-log trend is what the inequality predicts.

    python3 demos/large_sieve_grid.py
"""

from nthsieve.characters import default_setup
from nthsieve.sieve import large_sieve_ratio, log_slope

GRID = (8, 16, 32, 64)

for n in (3, 4):
    st = default_setup(n)
    for j in range(1, n):
        stats = [large_sieve_ratio(M, N, 100, 0.1, st, seed=0, j=j) for M in GRID for N in GRID]
        print(f"n = {n}, j = {j}")
        print("      N=" + "".join(f"{N:>9d}" for N in GRID))
        for i, M in enumerate(GRID):
            print(f"  M={M:<3d} " + "".join(f"{s.ratio:9.4f}" for s in stats[4 * i:4 * i + 4]))
        print(f"  log-log slope {log_slope(stats):+.3f}\n")
