"""Record the regression baselines shipped in nthsieve/data/baselines.json.

Run once after a validated build; the acceptance suite and the CLI then treat the
stored numbers as upper limits (with 5% slack).

    python3 demos/record_baselines.py
"""

import json
import time
from pathlib import Path

from nthsieve.characters import default_setup
from nthsieve.lfunctions import second_moment
from nthsieve.sieve import large_sieve_ratio

OUT = Path(__file__).resolve().parents[1] / "src" / "nthsieve" / "data" / "baselines.json"
GRID = (8, 16, 32, 64)


def main():
    data = {"second_moment": {}, "sieve": {}, "meta": {}}
    t0 = time.perf_counter()
    st = default_setup(3)
    for N in (50, 100, 200):
        for t in (0, 5):
            r = second_moment(N, t, st)
            data["second_moment"][f"n3:N{N}:t{t}"] = r.normalized(0.1, 2)
            print(f"second moment N={N} t={t}: {r.moment:.6g} normalized {r.normalized(0.1, 2):.6g}")
    for n in (3, 4):
        st = default_setup(n)
        for j in range(1, n):
            stats = [large_sieve_ratio(M, N, 200, 0.1, st, seed=0, j=j) for M in GRID for N in GRID]
            data["sieve"][f"n{n}:j{j}"] = max(s.ratio for s in stats)
            print(f"sieve n={n} j={j}: max ratio {data['sieve'][f'n{n}:j{j}']:.6g}")
    data["meta"] = {"seed": 0, "trials": 200, "epsilon": 0.1, "grid": list(GRID),
                    "seconds": round(time.perf_counter() - t0, 1)}
    OUT.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
