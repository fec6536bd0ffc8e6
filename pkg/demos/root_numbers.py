"""Root numbers of primitive characters and the smoothed functional equation.

For every primitive character of small conductor the script prints the Gauss-sum
root number and how well the two sides of the smoothed identity agree.

    python3 demos/root_numbers.py [max_norm]
"""

import sys

from nthsieve.characters import default_setup, primitive_characters
from nthsieve.lfunctions import gauss_epsilon, smoothed_sum_sides

max_norm = int(sys.argv[1]) if len(sys.argv) > 1 else 60

for n in (3, 4):
    st = default_setup(n)
    corpus = primitive_characters(max_norm, st)
    print(f"n = {n}: {len(corpus)} primitive characters with conductor norm <= {max_norm}")
    print(f"{'N f':>6} {'ell':>4} {'eps':>24} {'residual M=10':>14} {'M=100':>10}")
    for ch in corpus:
        eps = gauss_epsilon(ch).value
        res = [smoothed_sum_sides(ch, "gamma:2", M).residual for M in (10, 100)]
        print(f"{ch.conductor.norm:6d} {ch.ell:4d} {eps.real:+.8f}{eps.imag:+.8f}i {res[0]:14.1e} {res[1]:10.1e}")
    print()
