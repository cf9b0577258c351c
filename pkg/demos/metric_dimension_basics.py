"""How many distance sensors does a tree need?

Walks through resolving sets and the leaves-minus-branch-points formula on
hand-built trees, then cross-checks the linear-time answer against the
exhaustive oracle on a batch of random trees.
"""

from treedim import (
    RngSpec,
    brute_force_md,
    build_from_parents,
    is_resolving,
    md_report,
    sample_uniform_tree,
    serialize,
)

print("A path needs a single sensor at one end:")
path = build_from_parents([None, 0, 1, 2, 3])
print(serialize(path))
print("  resolving with {0}?", is_resolving(path, {0}))
print("  md_report:", md_report(path))

print("\nA star needs all but one of its leaves:")
star = build_from_parents([None, 0, 0, 0])
print("  one leaf alone fails (two others look identical):", is_resolving(star, {1}))
print("  two leaves succeed:", is_resolving(star, {1, 2}))
report = md_report(star)
print(f"  leaves {report.leaves}, branch points {report.exterior_major}, beta {report.beta}")

print("\nThe formula: beta = #leaves - #exterior major vertices (non-paths).")
spider = build_from_parents([None, 0, 1, 0, 3, 0, 5])
report = md_report(spider)
print(f"  spider with three legs of two: beta = {len(report.leaves)} - "
      f"{len(report.exterior_major)} = {report.beta}")

print("\nExhaustive subset search agrees on random trees:")
spec = RngSpec(2024)
for i in range(5):
    rng = spec.stream(i)
    tree = sample_uniform_tree(int(rng.integers(4, 13)), rng)
    beta, witness = brute_force_md(tree)
    fast = md_report(tree).beta
    print(f"  n={tree.n:2d}  formula {fast}  oracle {beta}  witness {list(witness)}")
    assert fast == beta
