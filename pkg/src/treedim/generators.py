"""Seeded samplers for every random tree family in scope.

All samplers take a ``numpy.random.Generator`` and are bit-reproducible:
:class:`RngSpec` derives one independent stream per trial index as a pure
function of ``(master_seed, trial)``.

Families:

* critical branching trees conditioned on their size (exact, via the
  cycle-lemma rotation of the offspring walk);
* uniform labeled trees (random Pruefer sequence, uniformly rooted);
* linear-attachment growth trees with weight ``rho + chi * children(v)``
  (prefix-sum sampling, O(log n) per attachment);
* the continuous-time embedding of the same growth rule (event queue),
  stopped at a fixed size or at an independent exponential "doomsday" time;
* the increasing-rate exponential clock H used in line-survival analysis.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams, InvalidPmf, UnreachableSize
from .tree import RootedTree, build_from_parents

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSpec:
    """Master seed plus the per-trial stream derivation rule.

    Trial ``i`` uses ``SeedSequence((master_seed, i))``, so streams are a
    pure function of ``(master_seed, i)`` and statistically independent.
    """

    master_seed: int

    def __post_init__(self):
        if not 0 <= self.master_seed <= _MASK64:
            raise InvalidParams("master_seed must fit in 64 unsigned bits")

    def stream(self, trial: int = 0) -> np.random.Generator:
        if trial < 0:
            raise InvalidParams(f"trial index must be >= 0, got {trial}")
        seq = np.random.SeedSequence((self.master_seed, trial))
        return np.random.Generator(np.random.PCG64(seq))


@dataclass(frozen=True)
class OffspringPmf:
    """Finite offspring distribution p_0..p_K with derived moments."""

    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.probs) == 0:
            raise InvalidPmf("empty probability vector")
        if any(p < 0 for p in self.probs):
            raise InvalidPmf("negative probability")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > 1e-12:
            raise InvalidPmf(f"probabilities sum to {total!r}, not 1")
        if self.probs[0] <= 0.0:
            raise InvalidPmf("p_0 must be positive (the tree must be able to die out)")

    @classmethod
    def from_probs(cls, probs, renormalize: bool = False) -> "OffspringPmf":
        probs = [float(p) for p in probs]
        if renormalize:
            total = math.fsum(probs)
            if total <= 0:
                raise InvalidPmf("cannot renormalize a zero vector")
            probs = [p / total for p in probs]
        return cls(tuple(probs))

    @classmethod
    def poisson(cls, mean: float = 1.0, kmax: int = 30) -> "OffspringPmf":
        """Poisson(mean) truncated at kmax and renormalized.

        At the defaults the discarded tail mass is below 1e-32.
        """
        if mean <= 0 or kmax < 1:
            raise InvalidPmf("poisson needs mean > 0 and kmax >= 1")
        weights = [math.exp(-mean + k * math.log(mean) - math.lgamma(k + 1)) for k in range(kmax + 1)]
        return cls.from_probs(weights, renormalize=True)

    @classmethod
    def geometric(cls, ratio: float = 0.5, kmax: int = 60) -> "OffspringPmf":
        """p_k proportional to ratio^k, truncated at kmax and renormalized."""
        if not 0 < ratio < 1 or kmax < 1:
            raise InvalidPmf("geometric needs 0 < ratio < 1 and kmax >= 1")
        return cls.from_probs([ratio**k for k in range(kmax + 1)], renormalize=True)

    @property
    def p0(self) -> float:
        return self.probs[0]

    @property
    def p1(self) -> float:
        return self.probs[1] if len(self.probs) > 1 else 0.0

    @property
    def mean(self) -> float:
        return math.fsum(k * p for k, p in enumerate(self.probs))

    @property
    def second_moment(self) -> float:
        return math.fsum(k * k * p for k, p in enumerate(self.probs))

    def pgf(self, x: float) -> float:
        acc = 0.0
        for p in reversed(self.probs):
            acc = acc * x + p
        return acc

    def support(self) -> tuple[int, ...]:
        return tuple(k for k, p in enumerate(self.probs) if p > 0)

    def require_critical(self, tol: float = 1e-9) -> None:
        if abs(self.mean - 1.0) > tol:
            raise InvalidPmf(f"offspring mean {self.mean!r} is not 1 within {tol}")


@dataclass(frozen=True)
class PAParams:
    """Attachment-rule parameters: weight(v) = rho + chi * children(v)."""

    rho: float
    chi: int

    def __post_init__(self):
        if self.chi not in (-1, 0, 1):
            raise InvalidParams(f"chi must be -1, 0 or +1, got {self.chi}")
        if not self.rho > 0:
            raise InvalidParams(f"rho must be positive, got {self.rho}")
        if self.chi == -1 and float(self.rho) != int(self.rho):
            raise InvalidParams(f"chi = -1 requires integer rho, got {self.rho}")


@dataclass(frozen=True)
class CMJTree:
    """A growth tree together with per-vertex birth times (root at 0)."""

    tree: RootedTree
    birth_times: tuple[float, ...]


@dataclass(frozen=True)
class FixedSize:
    """Stop the continuous-time growth at exactly ``n`` vertices."""

    n: int


@dataclass(frozen=True)
class ExpDoomsday:
    """Stop at an independent Exp(rho + chi) time, drawn before the run.

    ``max_vertices`` optionally freezes growth at a size cap; the resulting
    tree is the exact state at the cap's birth time.  The stopped-tree size
    is heavy tailed, so unbounded runs can occasionally be very large.
    """

    max_vertices: int | None = None


# ---------------------------------------------------------------------------
# Conditioned critical branching trees
# ---------------------------------------------------------------------------

REJECTION_BUDGET = 1_000_000


def _tree_from_preorder_degrees(degs) -> RootedTree:
    parents: list[int | None] = [None] * len(degs)
    stack = [(0, int(degs[0]))]
    for v in range(1, len(degs)):
        while stack[-1][1] == 0:
            stack.pop()
        parent, remaining = stack[-1]
        stack[-1] = (parent, remaining - 1)
        parents[v] = parent
        stack.append((v, int(degs[v])))
    return build_from_parents(parents)


def sample_conditioned_gw(
    pmf: OffspringPmf,
    n: int,
    rng: np.random.Generator,
    rejection_budget: int = REJECTION_BUDGET,
) -> RootedTree:
    """Critical branching tree conditioned to have exactly ``n`` vertices.

    Draws n offspring counts, rejects unless they sum to n - 1, then applies
    the unique cyclic rotation whose walk stays nonnegative until the final
    step and builds the ordered tree in depth-first order.  Exact in
    distribution; acceptance probability is Theta(n^-1/2) for finite-variance
    critical offspring.
    """
    if n < 1:
        raise InvalidParams(f"tree size must be >= 1, got {n}")
    pmf.require_critical()
    positive = [k for k in pmf.support() if k > 0]
    if not positive:
        if n == 1:
            return build_from_parents([None])
        raise UnreachableSize("offspring support is {0}; only size 1 is reachable")
    g = math.gcd(*positive)
    if (n - 1) % g != 0:
        raise UnreachableSize(
            f"no length-{n} offspring sequence sums to {n - 1}: support lattice "
            f"has span {g}"
        )
    cdf = np.cumsum(np.asarray(pmf.probs))
    cdf[-1] = 1.0  # guard the top bucket against cumulative rounding
    # Acceptance decays like n^-1/2, so small trees need only a few tries.
    batch = 16 if n < 100 else max(16, min(1024, 262_144 // n))
    attempts = 0
    while attempts < rejection_budget:
        batch = min(batch, rejection_budget - attempts)
        draws = np.searchsorted(cdf, rng.random((batch, n)), side="right")
        attempts += batch
        sums = draws.sum(axis=1)
        hits = np.nonzero(sums == n - 1)[0]
        if hits.size:
            degs = draws[int(hits[0])]
            steps = degs.astype(np.int64) - 1
            walk = np.cumsum(steps)
            pivot = int(np.argmin(walk))  # first index attaining the minimum
            rotated = np.concatenate([degs[pivot + 1 :], degs[: pivot + 1]])
            return _tree_from_preorder_degrees(rotated)
    raise UnreachableSize(
        f"no size-{n} tree found within {rejection_budget} attempts"
    )


# ---------------------------------------------------------------------------
# Uniform labeled trees
# ---------------------------------------------------------------------------


def _prufer_edges(seq: np.ndarray, n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    ptr = 0
    while degree[ptr] != 1:
        ptr += 1
    leaf = ptr
    for v in seq:
        v = int(v)
        edges.append((leaf, v))
        degree[v] -= 1
        if degree[v] == 1 and v < ptr:
            leaf = v
        else:
            ptr += 1
            while degree[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, n - 1))
    return edges


def sample_uniform_tree(n: int, rng: np.random.Generator) -> RootedTree:
    """Uniform labeled tree on n vertices, rooted at a uniform vertex.

    Decodes a uniform Pruefer sequence of length n - 2.
    """
    if n < 1:
        raise InvalidParams(f"tree size must be >= 1, got {n}")
    if n == 1:
        return build_from_parents([None])
    seq = rng.integers(0, n, size=n - 2) if n > 2 else np.empty(0, dtype=int)
    edges = _prufer_edges(seq, n)
    root = int(rng.integers(0, n))
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    parents: list[int | None] = [None] * n
    seen = [False] * n
    seen[root] = True
    stack = [root]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if not seen[w]:
                seen[w] = True
                parents[w] = v
                stack.append(w)
    return build_from_parents(parents)


# ---------------------------------------------------------------------------
# Discrete linear-attachment growth
# ---------------------------------------------------------------------------


class _Fenwick:
    """Prefix-sum structure over nonnegative float weights."""

    def __init__(self, size: int):
        self._n = size
        self._tree = [0.0] * (size + 1)
        self._weights = [0.0] * size
        self.total = 0.0
        self._top = 1
        while self._top * 2 <= size:
            self._top *= 2

    def add(self, i: int, w: float) -> None:
        self._weights[i] += w
        self.total += w
        i += 1
        while i <= self._n:
            self._tree[i] += w
            i += i & (-i)

    def find(self, u: float) -> int:
        """Smallest index whose prefix sum exceeds ``u``."""
        idx = 0
        bit = self._top
        rem = u
        while bit:
            nxt = idx + bit
            if nxt <= self._n and self._tree[nxt] <= rem:
                idx = nxt
                rem -= self._tree[nxt]
            bit >>= 1
        return idx

    def sample(self, rng: np.random.Generator) -> int:
        # Rounding can land u on a zero-weight boundary; redraw in that case.
        while True:
            idx = self.find(rng.random() * self.total)
            if idx < self._n and self._weights[idx] > 0.0:
                return idx


def sample_pa_tree(params: PAParams, n: int, rng: np.random.Generator) -> RootedTree:
    """Grow a tree by attaching vertex i to v with probability proportional
    to rho + chi * children(v)."""
    if n < 1:
        raise InvalidParams(f"tree size must be >= 1, got {n}")
    rho, chi = params.rho, params.chi
    parents: list[int | None] = [None] * n
    weights = _Fenwick(n)
    weights.add(0, rho)
    for v in range(1, n):
        parent = weights.sample(rng)
        parents[v] = parent
        weights.add(parent, chi)
        weights.add(v, rho)
    return build_from_parents(parents)


# ---------------------------------------------------------------------------
# Continuous-time embedding
# ---------------------------------------------------------------------------


def simulate_cmj(
    params: PAParams,
    stop: FixedSize | ExpDoomsday,
    rng: np.random.Generator,
) -> CMJTree:
    """Event-driven simulation of the continuous-time growth process.

    Each vertex bears children at exponential gaps; the gap before a
    vertex's (j+1)-st child has rate rho + chi * j (for chi = -1 the vertex
    stops after rho children).  Stopped at ``FixedSize(n)`` and stripped of
    birth times, the tree is distributed exactly as
    ``sample_pa_tree(params, n)``.
    """
    rho, chi = params.rho, params.chi
    if isinstance(stop, FixedSize):
        if stop.n < 1:
            raise InvalidParams(f"FixedSize needs n >= 1, got {stop.n}")
        horizon = math.inf
        target = stop.n
        cap = stop.n
    elif isinstance(stop, ExpDoomsday):
        rate = rho + chi
        if rate <= 0:
            raise InvalidParams(
                f"doomsday rate rho + chi = {rate} must be positive"
            )
        horizon = rng.exponential(1.0 / rate)
        target = None
        cap = stop.max_vertices if stop.max_vertices is not None else math.inf
        if cap < 1:
            raise InvalidParams("max_vertices must be >= 1")
    else:
        raise InvalidParams(f"unknown stop rule {stop!r}")

    parents: list[int | None] = [None]
    births = [0.0]
    outdeg = [0]
    pending: list[tuple[float, int, int]] = []
    seq = 0

    def schedule(parent: int, now: float) -> None:
        nonlocal seq
        rate = rho + chi * outdeg[parent]
        if rate <= 0:
            return
        heapq.heappush(pending, (now + rng.exponential(1.0 / rate), seq, parent))
        seq += 1

    if (target is None or target > 1) and cap > 1:
        schedule(0, 0.0)
    while pending:
        t, _, parent = heapq.heappop(pending)
        if t > horizon:
            break
        child = len(parents)
        parents.append(parent)
        births.append(t)
        outdeg[parent] += 1
        outdeg.append(0)
        if target is not None and child + 1 >= target:
            break
        if child + 1 >= cap:
            break
        schedule(parent, t)
        schedule(child, t)
    return CMJTree(tree=build_from_parents(parents), birth_times=tuple(births))


def sample_H(lam: float, nu: float, rng: np.random.Generator) -> float:
    """Exponential clock whose rate starts at 0 and jumps by ``nu`` at each
    point of an independent rate-``lam`` Poisson stream.

    Simulates the race directly: after the j-th stream point, an Exp(j nu)
    alarm competes with the next stream gap; the first alarm that fires
    before its gap ends the race.
    """
    if not (lam > 0 and nu > 0):
        raise InvalidParams(f"sample_H requires positive rates, got ({lam}, {nu})")
    pi = rng.exponential(1.0 / lam)
    j = 1
    while True:
        gap = rng.exponential(1.0 / lam)
        alarm = rng.exponential(1.0 / (j * nu))
        if alarm <= gap:
            return pi + alarm
        pi += gap
        j += 1
