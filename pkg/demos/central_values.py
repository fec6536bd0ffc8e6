"""Central values L(1/2, chi_a) over the family, their second moment and how many vanish.

    python3 demos/central_values.py [N]
"""

import sys

from nthsieve.characters import default_setup
from nthsieve.lfunctions import nonvanishing_count, second_moment

N = float(sys.argv[1]) if len(sys.argv) > 1 else 100
st = default_setup(3)

for t in (0.0, 5.0):
    rep = second_moment(N, t, st)
    print(f"t = {t:g}: {len(rep.records)} characters, moment {rep.moment:.4f}, "
          f"normalized by N^1.1 (1+|t|)^1.1: {rep.normalized(0.1, 2):.4f}")
    if t == 0:
        k, frac = nonvanishing_count(N, st, report=rep)
        print(f"        {k} central values detectably non-zero ({frac:.1%})")
        small = sorted(rep.records, key=lambda r: abs(r.L.value))[:5]
        for r in small:
            print(f"        smallest: N a = {r.norm:4d}  |L| = {abs(r.L.value):.3e}  err {r.L.err:.1e}")
