"""
The fuzzy Hamming distance between weight vectors
==================================================

Instead of counting components that differ (the crisp Hamming
distance), each component gets a difference membership
1 - exp(-alpha * (x - y)^2) in [0, 1), and the distance is the fuzzy
cardinality of that membership set: a fuzzy number over 0..n grading
"how many components differ". Defuzzifying picks k_star, the level with
the top grade; the membership sum (sigma count) breaks ties.
"""

import numpy as np

from colorsig import FhdParams, fhd, fhd_compare

x = np.array([40.35, 101.0, 0.0, 70.2])
params = FhdParams(alpha=1.0)

# Identical vectors: every membership is 0, so level 0 holds all the
# grade and the distance defuzzifies to 0.
self_dist = fhd(x, x, params)
print("self distance:   k* =", self_dist.k_star, " card =", self_dist.card)

# Perturb one component a little and one a lot.
y = x.copy()
y[0] += 0.4   # small nudge: membership well below 1
y[3] = 0.0    # wiped out: membership saturates at 1
dist = fhd(x, y, params)
print("\ntwo components changed:")
print("  memberships =", np.round(dist.memberships, 6))
print("  cardinality =", np.round(dist.card, 6))
print("  k* =", dist.k_star, " sigma =", round(dist.sigma_count, 6))

# alpha controls how fast a difference saturates. Small alpha is
# forgiving; large alpha flags any difference as a full mismatch.
print("\nmembership of a 0.5-sized difference at various alpha:")
for alpha in (0.1, 1.0, 10.0, 100.0):
    d = fhd(np.array([0.5]), np.array([0.0]), FhdParams(alpha=alpha))
    print(f"  alpha={alpha:<6} mu={d.memberships[0]:.4f}  k*={d.k_star}")

# Ranking compares (k_star, sigma) lexicographically, so distances with
# the same integer level still order by how strongly components differ.
near = fhd(x, x + np.array([0.3, 0, 0, 0]), params)
far = fhd(x, x + np.array([0.5, 0, 0, 0]), params)
print("\nnear vs far (same k*):", fhd_compare(near, far), "(negative = nearer first)")

# The normalized mode divides differences by the weight span (101)
# before the membership, useful when full-scale weights saturate alpha=1.
raw = fhd(np.array([101.0]), np.array([0.0]), params)
scaled = fhd(np.array([101.0]), np.array([0.0]), FhdParams(alpha=1.0, normalize=True))
print("\nfull-span difference, literal:   mu =", raw.memberships[0])
print("full-span difference, normalized: mu =", round(scaled.memberships[0], 6))
