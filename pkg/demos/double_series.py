"""The double Dirichlet series in its region of absolute convergence, its archimedean
factors and the smooth weights used to cut it off.

    python3 demos/double_series.py
"""

import numpy as np

from nthsieve.characters import default_setup
from nthsieve.mds import WeightSpec, gamma_factor, quotient_check, v_decay_constant, weight_H, weight_V, z_eval

st = default_setup(3)

print("Z_1(s, w) with trivial twists, cutoffs 200 x 200")
for s, w in ((2, 2), (3, 3), (2 + 1j, 3 - 2j)):
    z = z_eval(1, s, w, None, None, (200, 200), st)
    print(f"  s = {s}, w = {w}: {z.value:.10f}  (err <= {z.err:.1e})")
print()

print("Gamma factors and the quotient identity at s = 0.3 + 2i, w = 0.6 - 1i")
s, w = 0.3 + 2j, 0.6 - 1j
print(f"  G1 = {gamma_factor(1, s, w):.6e}")
print(f"  G2(1-s, w+s-1/2) = {gamma_factor(2, 1 - s, w + s - 0.5):.6e}")
print(f"  quotient residual {quotient_check(s, w):.1e}")
print()

spec = WeightSpec(t=2.0, u=-1.0)
print(f"H at 0: {complex(weight_H(spec, 0)):.12f}; at its zeros: "
      + ", ".join(f"{abs(complex(weight_H(spec, z))):.1e}" for z in spec.zeros))
y = np.array([0.01, 0.1, 1.0, 10.0, 100.0])
for sign in (1, -1):
    v = weight_V(spec, sign, y)
    c = v_decay_constant(spec, sign)
    print(f"V{'+' if sign > 0 else '-'}(y) at y = {", ".join(f"{v:g}" for v in y)}:")
    print("   " + "  ".join(f"{x.real:+.3e}" for x in v) + f"   decay constant {c:.2e}")
