#!/usr/bin/env python3
"""The scalar inequalities behind the exponential selection argument.

The primitive phi(a, m) integrates exp(s^(1/(m-1))); its Young-type pairing
with b (log+ b)^(m-1) and a prefix-power inequality are what turn the
selection criterion into the endpoint L (log L)^(c-1) bound.  This script
checks the primitive against closed forms and quadrature and samples both
gaps aggressively.
"""

import math

import numpy as np
from scipy.integrate import quad

from dyadicmax import elementary_ineq_gap, phi, young_gap

print("phi(a, 2) has the closed form e^a - 1")
for a in (0.5, 1.0, 2.0, 5.0):
    series = phi(a, 2)
    closed = math.expm1(a)
    print(f"  a={a:4.1f}: series {series:.12f}  closed {closed:.12f}  "
          f"diff {abs(series - closed):.2e}")

print()
print("phi(1, 3) = 2 exactly (substituting u = sqrt(s) gives 2 int u e^u du)")
numeric, err = quad(lambda s: math.exp(math.sqrt(s)), 0.0, 1.0)
print(f"  series {phi(1.0, 3):.15f}   quadrature {numeric:.15f}")

print()
print("phi grows strictly faster than the identity")
for m in (2, 3, 5):
    a = np.linspace(0.1, 4.0, 5)
    gaps = [phi(float(x), m) - x for x in a]
    print(f"  m={m}: min margin over samples {min(gaps):.4f}")

print()
print("Young-type gap phi(a) + b (log+ b)^(m-1) - ab stays nonnegative")
rng = np.random.default_rng(123)
worst = math.inf
worst_at = None
for _ in range(20000):
    a = float(rng.uniform(0, 10))
    b = float(rng.uniform(1e-9, 10))
    m = int(rng.choice([2, 3, 4]))
    gap = young_gap(a, b, m)
    if gap < worst:
        worst, worst_at = gap, (round(a, 3), round(b, 3), m)
print(f"  20000 samples: min gap {worst:.6f} at (a, b, m) = {worst_at}")
print(f"  equality is approached near b = exp(a^(1/(m-1)))")

print()
print("prefix-power inequality: (sum a_i)^s <= s sum a_i (prefix_i)^(s-1)")
worst = math.inf
for _ in range(5000):
    seq = rng.uniform(0, 5, size=int(rng.integers(1, 40)))
    s = float(rng.uniform(1.000001, 4.0))
    worst = min(worst, elementary_ineq_gap(seq, s))
print(f"  5000 random sequences: min gap {worst:.6f}")
print(f"  ones fixture (1,1,1) at s=2: gap {elementary_ineq_gap([1, 1, 1], 2.0)}")
print(f"  a single term at s: gap is (s-1) a^s, e.g. "
      f"{elementary_ineq_gap([2.0], 1.5):.6f} for a=2, s=1.5")
