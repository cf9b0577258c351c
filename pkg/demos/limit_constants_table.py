"""The limiting fraction beta/n for each tree family, evaluated numerically.

Builds the constants grid (indexed by chi/rho), shows the closed forms the
quadrature must reproduce, and spot-checks one family against a quick
simulation.
"""

import math

from treedim import (
    OffspringPmf,
    PAParams,
    RngSpec,
    c_general,
    c_gw,
    c_mary,
    c_rrt,
    md_report,
    sample_pa_tree,
)

print("chi/rho   constant   (model)")
grid = [
    (2.0, -1, "binary search tree"),
    (3.0, -1, "3-slot increasing tree"),
    (5.0, -1, "5-slot increasing tree"),
    (1.0, 0, "random recursive tree"),
    (2.0, 1, "rich-get-richer, rho = 2"),
    (1.0, 1, "rich-get-richer, rho = 1"),
    (0.1, 1, "rich-get-richer, rho = 1/10"),
]
for rho, chi, label in grid:
    c = c_general(rho, chi)
    print(f"{chi / rho:7.2f}   {c.value:.5f}    {label} [{c.method}]")

print("\nClosed forms pin the quadrature:")
literal = (3 * math.exp(4) - 48 * math.exp(2) + 233) / 384
print(f"  BST literal  (3e^4 - 48e^2 + 233)/384 = {literal:.10f}")
print(f"  c_mary(2)                             = {c_mary(2).value:.10f}")
print(f"  random recursive trees                = {c_rrt().value:.9f}")

print("\nCritical branching trees conditioned on their size:")
for pmf, label in [
    (OffspringPmf.poisson(1.0), "Poisson(1)  (uniform labeled trees)"),
    (OffspringPmf.from_probs([0.5, 0.0, 0.5]), "half-half on {0, 2}"),
    (OffspringPmf.geometric(0.5), "geometric(1/2)"),
]:
    print(f"  {label:36} c = {c_gw(pmf).value:.8f}")

print("\nQuick simulation check (200 binary search trees with 2000 nodes):")
spec = RngSpec(5150)
total = 0.0
for i in range(200):
    tree = sample_pa_tree(PAParams(2.0, -1), 2000, spec.stream(i))
    total += md_report(tree).beta / tree.n
print(f"  mean beta/n = {total / 200:.5f}  vs constant {c_mary(2).value:.5f}")
