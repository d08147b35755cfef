"""Partial and complete linearization of multihomogeneous polynomials.

Partially linearizing x_i with pattern gamma (|gamma| = deg_{x_i}) replaces
x_i by x_i + ... + x_{i+k-1}, shifts every later variable up by k-1, and
extracts the multihomogeneous component prescribed by gamma.  The complete
linearization applies the all-ones pattern to each variable in turn, left to
right, producing a multilinear polynomial of multidegree 1^{|delta|} whose
r-th slot descends from original variable delta|r|.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgument, NotMultihomogeneous
from .freealg import Poly, mdeg_total, mdeg_trim, var


def delta_index(delta: tuple, r: int) -> int:
    """The unique k with delta_1+...+delta_{k-1} < r <= delta_1+...+delta_k."""
    total = mdeg_total(delta)
    if not 1 <= r <= total:
        raise InvalidArgument(f"slot {r} outside 1..{total}")
    acc = 0
    for k, d in enumerate(delta, start=1):
        acc += d
        if r <= acc:
            return k
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class LinearizationPlan:
    """Bookkeeping for one partial linearization step.

    ``source_var`` is replaced by ``len(gamma)`` variables starting at
    ``source_var`` itself; every variable past it shifts up by
    ``len(gamma) - 1``, so ``fresh_base`` (the first index past the affected
    window) exceeds every variable of the input.
    """

    source_var: int
    gamma: tuple
    fresh_base: int


def plan_partial_lin(f: Poly, i: int, gamma) -> LinearizationPlan:
    if not f:
        raise InvalidArgument("cannot linearize the zero polynomial")
    try:
        delta = f.mdeg()
    except NotMultihomogeneous:
        raise NotMultihomogeneous("partial linearization needs a multihomogeneous input")
    gamma = tuple(gamma)
    if i < 1 or i > len(delta) or delta[i - 1] == 0:
        raise InvalidArgument(f"variable x{i} does not occur in the input")
    if any(g < 0 for g in gamma) or sum(gamma) != delta[i - 1]:
        raise InvalidArgument(
            f"pattern {gamma} must be nonnegative with total {delta[i - 1]}")
    return LinearizationPlan(i, gamma, len(delta) + len(gamma))


def partial_lin(f: Poly, i: int, gamma) -> Poly:
    """lin_{x_i}^{gamma}(f) with the fresh-variable numbering above."""
    plan = plan_partial_lin(f, i, gamma)
    delta = f.mdeg()
    k = len(plan.gamma)
    replacement = var(i)
    for t in range(1, k):
        replacement = replacement + var(i + t)
    mapping = {i: replacement}
    for j in range(i + 1, len(delta) + 1):
        mapping[j] = var(j + k - 1)
    target = delta[:i - 1] + plan.gamma + delta[i:]
    return f.substitute(mapping).component(mdeg_trim(target))


def complete_lin(f: Poly) -> Poly:
    """Sequential all-ones partial linearizations, x1 first through xn last.

    Multidegrees with interior zero entries are first compressed by an
    order-preserving renaming so the result is genuinely of multidegree 1^m.
    """
    if not f:
        raise InvalidArgument("cannot linearize the zero polynomial")
    delta = f.mdeg()
    if any(d == 0 for d in delta):
        used = [j for j, d in enumerate(delta, start=1) if d > 0]
        f = f.substitute({j: var(t) for t, j in enumerate(used, start=1)})
        delta = f.mdeg()
    pos = 1
    for d in delta:
        if d > 1:
            f = partial_lin(f, pos, (1,) * d)
        pos += d
    return f


def diagonal_restore(linearized: Poly, delta: tuple) -> Poly:
    """Substitute the fresh variables of complete_lin back to the originals.

    For multihomogeneous f of multidegree delta (all entries positive) this
    sends complete_lin(f) to delta_1! * ... * delta_n! * f.
    """
    total = mdeg_total(delta)
    mapping = {r: var(delta_index(delta, r)) for r in range(1, total + 1)}
    return linearized.substitute(mapping)
