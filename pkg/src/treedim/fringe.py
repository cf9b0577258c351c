"""Subtree-property predicates and counters.

A subtree property may inspect only the subtree hanging below a vertex,
away from the root.  Three canonical properties are used throughout:

* ``is_pl``   -- the subtree is a single vertex;
* ``is_line`` -- every vertex of the subtree has at most one child;
* ``is_pk``   -- the vertex has at least two children and at least one
  child's subtree is a line.

Counting all three over a whole tree takes one bottom-up pass with
memoized per-vertex summaries (subtree size and line flag).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import IsPath, VertexOutOfRange
from .metric_dimension import md_report
from .tree import RootedTree, is_path


def _check_vertex(tree: RootedTree, v: int) -> None:
    if not 0 <= v < tree.n:
        raise VertexOutOfRange(f"vertex {v} outside 0..{tree.n - 1}")


def subtree_sizes(tree: RootedTree) -> list[int]:
    """Size of the hanging subtree of each vertex, in one bottom-up pass."""
    sizes = [1] * tree.n
    for v in reversed(tree.topological_order()):
        for c in tree.children[v]:
            sizes[v] += sizes[c]
    return sizes


def line_flags(tree: RootedTree) -> list[bool]:
    """Per-vertex flag: is the hanging subtree a line (single vertex counts)."""
    flags = [False] * tree.n
    for v in reversed(tree.topological_order()):
        kids = tree.children[v]
        flags[v] = len(kids) == 0 or (len(kids) == 1 and flags[kids[0]])
    return flags


def is_line(tree: RootedTree, v: int) -> bool:
    """True iff every vertex in the subtree below ``v`` has at most one child."""
    _check_vertex(tree, v)
    while True:
        kids = tree.children[v]
        if len(kids) == 0:
            return True
        if len(kids) > 1:
            return False
        v = kids[0]


def is_pl(tree: RootedTree, v: int) -> bool:
    """True iff the subtree below ``v`` is a single vertex."""
    _check_vertex(tree, v)
    return len(tree.children[v]) == 0


def is_pk(tree: RootedTree, v: int) -> bool:
    """True iff ``v`` has >= 2 children and some child's subtree is a line."""
    _check_vertex(tree, v)
    kids = tree.children[v]
    if len(kids) < 2:
        return False
    return any(is_line(tree, c) for c in kids)


def count_subtree_property(tree: RootedTree, predicate) -> int:
    """Number of vertices whose hanging subtree satisfies ``predicate``.

    ``predicate`` is a callable ``(tree, v) -> bool`` that may only inspect
    the subtree below ``v``.  The three canonical predicates are recognised
    and counted via one memoized bottom-up pass; any other callable is
    evaluated per vertex.
    """
    if predicate is is_pl:
        return sum(1 for c in tree.children if len(c) == 0)
    if predicate is is_line:
        return sum(line_flags(tree))
    if predicate is is_pk:
        flags = line_flags(tree)
        return sum(
            1
            for kids in tree.children
            if len(kids) >= 2 and any(flags[c] for c in kids)
        )
    return sum(1 for v in range(tree.n) if predicate(tree, v))


def fringe_size_counts(tree: RootedTree) -> dict[int, int]:
    """Histogram ``size -> count`` of hanging-subtree sizes; counts sum to n."""
    return dict(Counter(subtree_sizes(tree)))


@dataclass(frozen=True)
class EpsilonAudit:
    """Bookkeeping for the leaf/branch decomposition of the metric dimension.

    ``epsilon = beta - (n_pl - n_pk)`` measures how far the subtree-property
    counts drift from the exact leaves-minus-exterior-major formula; it is
    bounded by 2 in absolute value (each of the two count identities can be
    off by at most one, both only through root-adjacent configurations).
    """

    n_pl: int
    n_pk: int
    leaves: int
    exterior: int
    beta: int
    epsilon: int


def epsilon_audit(tree: RootedTree) -> EpsilonAudit:
    """Compare subtree-property counts against the exact formula.

    Raises :class:`IsPath` for path trees, whose metric dimension is 1
    directly and which the decomposition does not target.
    """
    if is_path(tree):
        raise IsPath("epsilon audit targets non-path trees")
    report = md_report(tree)
    n_pl = count_subtree_property(tree, is_pl)
    n_pk = count_subtree_property(tree, is_pk)
    return EpsilonAudit(
        n_pl=n_pl,
        n_pk=n_pk,
        leaves=len(report.leaves),
        exterior=len(report.exterior_major),
        beta=report.beta,
        epsilon=report.beta - (n_pl - n_pk),
    )
