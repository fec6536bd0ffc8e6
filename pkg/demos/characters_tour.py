"""A walk through the arithmetic layer for n = 3.

    python3 demos/characters_tour.py
"""

import itertools

from nthsieve.algebra import IdealK, canonical_decompose, prime_ideals_upto
from nthsieve.characters import chi, default_setup, power_residue_symbol, reciprocity_factor
from nthsieve.lfunctions import family

st = default_setup(3)
print(st.describe())
print()

# cubic residue symbols at the first few split primes
primes = [P for P in prime_ideals_upto(3, 40) if st.in_IS(P) and P.norm > 4]
print("symbol (x / p) as a power of zeta, x = 2, 5, 1 + 3w")
x_values = [IdealK.of(2, 0, 3).gen, IdealK.of(5, 0, 3).gen, IdealK.of(1, 3, 3).gen]
for P in primes:
    row = [power_residue_symbol(x, P) for x in x_values]
    print(f"  p = ({P.gen}), N p = {P.norm:3d}: " + "  ".join(str(v) for v in row))
print()

# conductors sit between the squarefree kernel and c times it
print("conductor of chi_a for a few squarefree a")
for a in family(120, st, squarefree=True)[1:9]:
    f = chi(a, st).conductor
    a0 = canonical_decompose(a).squarefull_part.radical()
    print(f"  N a = {a.norm:4d}  N cond = {f.norm:6d}  N cond / N a0 = {f.norm // a0.norm}")
print()

# the reciprocity factor only sees ray classes
cells = {}
for a, b in itertools.combinations(family(120, st, squarefree=True)[1:], 2):
    if a.coprime_to(b):
        key = (tuple(st.class_of(a)), tuple(st.class_of(b)))
        cells.setdefault(key, set()).add(reciprocity_factor(a, b, st).k)
print(f"reciprocity factor on {len(cells)} class pairs; all constant: {all(len(v) == 1 for v in cells.values())}")
