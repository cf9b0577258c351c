"""Limiting constants of the normalized metric dimension, and the analytic
helper functions they are assembled from.

Every evaluator returns a :class:`ConstantResult` carrying the value, a
conservative absolute error estimate, and the method used.  The supported
growth models are parameterized by an attachment weight ``rho + chi * c``
(``c`` = current children count) with ``chi`` in ``{-1, 0, +1}``:

* ``chi = -1`` with integer ``rho = m >= 2``: m-slot increasing trees
  (``m = 2`` is the random binary search tree);
* ``chi = 0``, ``rho = 1``: random recursive trees;
* ``chi = +1``: rich-get-richer (preferential attachment) trees.

Critical branching trees conditioned on their size are covered separately
by :func:`c_gw`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, InvalidPmf, Unsupported
from .quadrature import DEFAULT_SPEC, QuadratureSpec, adaptive_simpson

CRITICALITY_TOL = 1e-9

# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def lower_incomplete_gamma(s: float, t: float) -> float:
    """gamma(s, t) = integral of x^(s-1) e^(-x) over [0, t].

    Series representation for t < s + 1, continued-fraction complement
    (modified Lentz) otherwise; relative accuracy about 1e-14 in the
    argument range used here.  Standard split following Numerical Recipes.
    """
    if s <= 0:
        raise DomainError(f"lower_incomplete_gamma requires s > 0, got {s}")
    if t < 0:
        raise DomainError(f"lower_incomplete_gamma requires t >= 0, got {t}")
    if t == 0.0:
        return 0.0
    lgam = math.lgamma(s)
    if t < s + 1.0:
        # gamma(s,t) = t^s e^-t sum_k t^k / (s (s+1) ... (s+k))
        term = 1.0 / s
        total = term
        k = s
        for _ in range(500):
            k += 1.0
            term *= t / k
            total += term
            if abs(term) < abs(total) * 1e-16:
                break
        return total * math.exp(-t + s * math.log(t))
    # Upper tail Q(s,t) by Lentz continued fraction, then gamma = (1-Q)Gamma.
    tiny = 1e-300
    b = t + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 500):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    upper = math.exp(-t + s * math.log(t) - lgam) * h
    return math.exp(lgam) * (1.0 - upper)


def trinomial(m: int, i: int, j: int) -> int:
    """m! / (i! j! (m-i-j)!), exact."""
    if i < 0 or j < 0 or i + j > m:
        raise DomainError(f"trinomial requires 0 <= i, j and i+j <= m, got ({m},{i},{j})")
    return math.comb(m, i) * math.comb(m - i, j)


# ---------------------------------------------------------------------------
# Results and parameter checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantResult:
    value: float
    abs_error_estimate: float
    method: str  # closed_form | series | quadrature


def _check_pa(rho: float, chi: int) -> None:
    if chi not in (-1, 0, 1):
        raise DomainError(f"chi must be -1, 0 or +1, got {chi}")
    if not rho > 0:
        raise DomainError(f"rho must be positive, got {rho}")
    if chi == -1:
        if float(rho) != int(rho):
            raise DomainError(f"chi = -1 requires integer rho, got {rho}")
        if int(rho) == 1:
            raise DomainError(
                "rho = 1, chi = -1 grows a deterministic path; the non-path "
                "formula does not apply"
            )


def p_leaf(rho: float, chi: int) -> float:
    """Probability that the limiting fringe tree is a single vertex."""
    _check_pa(rho, chi)
    return (rho + chi) / (2.0 * rho + chi)


# ---------------------------------------------------------------------------
# Conditioned critical branching trees
# ---------------------------------------------------------------------------


def _pmf_arrays(pmf):
    # Accepts an OffspringPmf (duck-typed) to avoid a circular import.
    return tuple(pmf.probs)


def gw_line_prob(pmf) -> float:
    """Probability that an unconditioned branching subtree is a line."""
    probs = _pmf_arrays(pmf)
    p0 = probs[0]
    p1 = probs[1] if len(probs) > 1 else 0.0
    if p0 <= 0.0:
        raise InvalidPmf("line probability needs p_0 > 0")
    if p1 >= 1.0:
        raise InvalidPmf("line probability needs p_1 < 1")
    # A subtree is a line iff it dies out (p0) or continues as a line (p1):
    # q = p0 + q p1.
    return p0 / (1.0 - p1)


def gw_pk_prob(pmf) -> float:
    """Probability that the unconditioned branching tree has >= 2 root
    children at least one of which heads a line subtree."""
    probs = _pmf_arrays(pmf)
    q = gw_line_prob(pmf)
    p1 = probs[1] if len(probs) > 1 else 0.0
    g = _pgf(probs, 1.0 - q)
    return 1.0 - g - q * p1


def _pgf(probs, x: float) -> float:
    acc = 0.0
    for p in reversed(probs):
        acc = acc * x + p
    return acc


def c_gw(pmf) -> ConstantResult:
    """Limit of (metric dimension / size) for critical conditioned
    branching trees with offspring distribution ``pmf``.

    Closed form: p0 - 1 + G(1 - q) + p1 * q with q = p0 / (1 - p1),
    G the offspring generating function.
    """
    pmf.require_critical(CRITICALITY_TOL)
    probs = _pmf_arrays(pmf)
    p0 = probs[0]
    p1 = probs[1] if len(probs) > 1 else 0.0
    if p1 >= 1.0:
        raise InvalidPmf("c_gw needs p_1 < 1")
    q = p0 / (1.0 - p1)
    value = p0 - 1.0 + _pgf(probs, 1.0 - q) + p1 * q
    return ConstantResult(value=value, abs_error_estimate=1e-14, method="closed_form")


# ---------------------------------------------------------------------------
# m-slot increasing trees (chi = -1) via the incomplete-gamma double sum
# ---------------------------------------------------------------------------


def _mary_coefficient(m: int, i: int, j: int) -> float:
    """Coefficient of gamma((i+j)/(m-1)+1, i*m/(m-1)) in the m-slot sum.

    The pair (i, j) = (1, m-1) absorbs an extra exponential integral and
    carries its own coefficient.
    """
    s = (i + j) / (m - 1) + 1.0
    if (i, j) == (1, m - 1):
        return (1.0 - m / m**m) * math.exp(m / (m - 1)) * ((m - 1) / m) ** s
    return (
        ((-1.0) ** i / m ** (i + j))
        * trinomial(m, i, j)
        * math.exp(i * m / (m - 1))
        * ((m - 1) / (i * m)) ** s
    )


def c_mary(m: int) -> ConstantResult:
    """Limit constant for m-slot increasing trees, m >= 2 (m = 2: BSTs)."""
    if int(m) != m or m < 2:
        raise DomainError(f"c_mary requires an integer m >= 2, got {m}")
    m = int(m)
    first = sum(
        (m - 1) / ((m - 1 + j) * m**j) * math.comb(m, j) for j in range(1, m + 1)
    )
    second = 0.0
    magnitude = abs(first)
    for i in range(1, m + 1):
        for j in range(0, m - i + 1):
            s = (i + j) / (m - 1) + 1.0
            t = i * m / (m - 1)
            term = _mary_coefficient(m, i, j) * lower_incomplete_gamma(s, t)
            second += term
            magnitude += abs(term)
    # Terms cancel heavily; bound rounding by the summed magnitudes.
    est = max(1e-14, magnitude * 1e-13)
    return ConstantResult(value=first + second, abs_error_estimate=est, method="series")


# ---------------------------------------------------------------------------
# The doomsday-clock integrals (chi = +1 and the general two-integral form)
# ---------------------------------------------------------------------------


def _general_integrals(
    rho: float, chi: int, spec: QuadratureSpec
) -> tuple[float, float, float]:
    """The two semi-infinite integrals of the general constant formula.

    Both are mapped to [0, 1) by u = 1 - exp(-(rho+chi) x), under which the
    stopping-time density integrates to du exactly.
    """
    a = rho + chi
    r = rho / a

    def f1(u: float) -> float:
        if u >= 1.0:
            return 0.0 if chi > 0 else 1.0
        w = 1.0 - u
        # e^{chi x} (e^{r u} - 1) / rho, with e^{chi x} = w^{-chi/a}
        t = w ** (-chi / a) * math.expm1(r * u) / rho
        return (1.0 + chi * t) ** (-rho / chi)

    def f2(u: float) -> float:
        if u >= 1.0:
            return 0.0
        return (1.0 - u) ** r * math.exp(r * u)

    i1, e1 = adaptive_simpson(f1, 0.0, 1.0, spec)
    i2, e2 = adaptive_simpson(f2, 0.0, 1.0, spec)
    return i1, i2, e1 + e2


def c_rich(rho: float, spec: QuadratureSpec = DEFAULT_SPEC) -> ConstantResult:
    """Limit constant for rich-get-richer trees (chi = +1), any rho > 0."""
    if not rho > 0:
        raise DomainError(f"c_rich requires rho > 0, got {rho}")
    i1, i2, err = _general_integrals(rho, 1, spec)
    return ConstantResult(
        value=-1.0 + i1 + i2,
        abs_error_estimate=max(err, 1e-12),
        method="quadrature",
    )


def c_rrt(spec: QuadratureSpec = DEFAULT_SPEC) -> ConstantResult:
    """Limit constant for random recursive trees.

    e * (integral of e^-x / x over [1, e] + gamma(2, 1)) - 1.
    """
    integral, err = adaptive_simpson(lambda x: math.exp(-x) / x, 1.0, math.e, spec)
    value = math.e * (integral + lower_incomplete_gamma(2.0, 1.0)) - 1.0
    return ConstantResult(
        value=value,
        abs_error_estimate=max(math.e * err, 1e-12),
        method="quadrature",
    )


def c_general(
    rho: float, chi: int, spec: QuadratureSpec = DEFAULT_SPEC
) -> ConstantResult:
    """Limit constant for any supported (rho, chi) attachment rule.

    chi = 0 supports rho = 1 only (random recursive trees).  For chi = -1
    the value comes from the two-integral quadrature; the independent
    incomplete-gamma evaluation :func:`c_mary` is folded into the error
    estimate as a cross-check.
    """
    if chi == 0:
        if rho != 1:
            raise Unsupported(f"chi = 0 is evaluated at rho = 1 only, got rho = {rho}")
        return c_rrt(spec)
    _check_pa(rho, chi)
    i1, i2, err = _general_integrals(rho, chi, spec)
    value = -1.0 + i1 + i2
    est = max(err, 1e-12)
    if chi == -1:
        est = max(est, abs(value - c_mary(int(rho)).value))
    return ConstantResult(value=value, abs_error_estimate=est, method="quadrature")


# ---------------------------------------------------------------------------
# Conditional pieces: line probability, root-degree law, branch probability
# ---------------------------------------------------------------------------


def q_line_prob(rho: float, chi: int, x: float) -> float:
    """Probability that a root-child subtree is still a line at horizon x.

    The child's own birth time is averaged over (it is distributed with
    density proportional to e^{chi y} on [0, x]); the line survives while
    no vertex on its spine has produced a second child.
    """
    if not x > 0:
        raise DomainError(f"q_line_prob requires x > 0, got {x}")
    if chi == 0:
        if rho != 1:
            raise Unsupported(f"chi = 0 is evaluated at rho = 1 only, got rho = {rho}")
        return math.expm1(-math.expm1(-x)) / x
    _check_pa(rho, chi)
    a = rho + chi
    z_g = math.expm1(chi * x) / chi
    return math.exp(chi * x) * math.expm1(-(rho / a) * math.expm1(-a * x)) / (rho * z_g)


def h_tail(lam: float, nu: float, t: float) -> float:
    """Tail P(H > t) of the exponential clock whose rate jumps by ``nu``
    at each point of a rate-``lam`` Poisson stream.

    Closed form: exp(-lam t + (lam/nu)(1 - e^{-nu t})).
    """
    if not (lam > 0 and nu > 0):
        raise DomainError(f"h_tail requires positive rates, got ({lam}, {nu})")
    if t < 0:
        raise DomainError(f"h_tail requires t >= 0, got {t}")
    return math.exp(-lam * t - (lam / nu) * math.expm1(-nu * t))


def root_degree_pgf(rho: float, chi: int, x: float, z: float) -> float:
    """Generating function of the root's children count at horizon x.

    Negative binomial for chi = +1, Poisson for chi = 0 (rho = 1),
    binomial for chi = -1.
    """
    if chi == 0:
        if rho != 1:
            raise Unsupported(f"chi = 0 is evaluated at rho = 1 only, got rho = {rho}")
        return math.exp(-x * (1.0 - z))
    _check_pa(rho, chi)
    ecx = math.exp(chi * x)
    return (ecx + (1.0 - ecx) * z) ** (-rho / chi)


def root_degree_one_prob(rho: float, chi: int, x: float) -> float:
    """P(root has exactly one child at horizon x)."""
    if chi == 0:
        if rho != 1:
            raise Unsupported(f"chi = 0 is evaluated at rho = 1 only, got rho = {rho}")
        return x * math.exp(-x)
    _check_pa(rho, chi)
    return -(rho / chi) * (-math.expm1(chi * x)) * math.exp(-x * (rho + chi))


def pk_given_x(rho: float, chi: int, x: float) -> float:
    """P(the tree at horizon x has >= 2 root children with a line subtree).

    Assembled as 1 - G(1 - q) - q P(one child), with G the root-degree
    generating function and q the per-child line probability; valid because
    the children's subtrees evolve independently given the horizon.
    """
    if not x > 0:
        raise DomainError(f"pk_given_x requires x > 0, got {x}")
    q = q_line_prob(rho, chi, x)
    g = root_degree_pgf(rho, chi, x, 1.0 - q)
    p1 = root_degree_one_prob(rho, chi, x)
    return 1.0 - g - q * p1


def _pk_at_infinity(rho: float, chi: int) -> float:
    if chi == 1:
        return 1.0
    if chi == -1:
        return 0.0
    return 1.0 - math.exp(1.0 - math.e)  # chi = 0, rho = 1


def c_from_pk_integral(
    rho: float, chi: int, spec: QuadratureSpec = DEFAULT_SPEC
) -> tuple[float, float]:
    """Re-derive the limit constant without merging any integrals.

    Integrates :func:`pk_given_x` against the exponential stopping-time
    density (rate rho + chi) and subtracts from the single-vertex
    probability.  Returns (value, error estimate).  This retraces the
    construction that the closed forms compress, so it cross-checks the
    conditional pieces against :func:`c_general`.
    """
    if chi == 0 and rho != 1:
        raise Unsupported(f"chi = 0 is evaluated at rho = 1 only, got rho = {rho}")
    if chi != 0:
        _check_pa(rho, chi)
    a = rho + chi
    limit = _pk_at_infinity(rho, chi)

    def integrand(u: float) -> float:
        if u >= 1.0:
            return limit
        if u <= 0.0:
            return 0.0
        x = -math.log1p(-u) / a
        return pk_given_x(rho, chi, x)

    pk, err = adaptive_simpson(integrand, 0.0, 1.0, spec)
    return p_leaf(rho, chi) - pk, max(err, 1e-12)
