"""T-ideal presentations, component spans, membership, bases, minimality.

The multidegree-delta component of the T-ideal generated by multihomogeneous
polynomials is realized as an exact row space:

* substitution instances -- monomial tuples plugged into the *complete
  linearization* of each generator (in characteristic zero these instances
  span every multihomogeneous component of every substitution image, which
  plain monomial substitution into a non-multilinear generator would not);
* context closure -- products b*m and m*b where b runs over an echelon basis
  of a smaller component of the ideal and m over all monomials of the
  complementary multidegree.  One-hole contexts decompose at the root into
  exactly these two shapes, so the closure is complete by induction.

Everything is cached per (presentation, multidegree) since campaign-style
verification revisits the same components many times.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .algebra2d import Algebra2D, eval_on_basis
from .config import DEFAULT_CAPS, Caps
from .errors import InvalidArgument, SpanFailure, TooLarge
from .freealg import (Monomial, Poly, associator, commutator, component_monomials,
                      enumerate_monomials, leaf, left_bracket, mdeg_sub,
                      mdeg_total, mdeg_trim, node, right_bracket, var)
from .linalg import (Echelon, PolyEchelon, SparseVec, left_nullspace,
                     solve_in_span)
from .linearize import complete_lin
from .scalars import ELL, Scalar, rat


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TIdealPresentation:
    """Finite multihomogeneous generating set of a T-ideal."""

    label: str
    generators: tuple

    def __post_init__(self):
        for g in self.generators:
            if not g:
                raise InvalidArgument("zero generator in a T-ideal presentation")
            if not g.is_multihomogeneous():
                raise InvalidArgument(
                    f"generator {g!r} is not multihomogeneous")

    def without(self, index: int) -> "TIdealPresentation":
        gens = self.generators[:index] + self.generators[index + 1:]
        return TIdealPresentation(f"{self.label}-minus-{index}", gens)


_X1, _X2, _X3 = var(1), var(2), var(3)

#: (x1 x2) x3 - (x1 x3) x2, the right-commutativity generator
RIGHT_COMM_GEN = (_X1 * _X2) * _X3 - (_X1 * _X3) * _X2
#: (x1,x2,x3) - (x2,x1,x3), the left-symmetry generator
LEFT_SYM_GEN = associator(_X1, _X2, _X3) - associator(_X2, _X1, _X3)


def ell_commutator_generator(ell=ELL) -> Poly:
    """(x1,x2,x3) - (x1,x3,x2) - l [x3,x2] x1 for the N6 family."""
    return (associator(_X1, _X2, _X3) - associator(_X1, _X3, _X2)
            - (commutator(_X3, _X2) * _X1).scale(ell))


PRESENTATION_NAMES = ("T2", "N123", "N4", "T3", "N6", "N5", "Example3_1")


def presentations(name: str, ell=None) -> TIdealPresentation:
    """The paper-backed generating sets, keyed by algebra family."""
    if ell is not None and name != "N6":
        raise InvalidArgument(f"presentation {name} takes no parameter")
    if name == "T2":
        return TIdealPresentation("T2", (commutator(_X1, _X2),
                                         Poly.of(left_bracket((1, 2, 3)))))
    if name == "N123":
        return TIdealPresentation("N123", (commutator(_X1, _X2),
                                           associator(_X1, _X2, _X3)))
    if name == "N4":
        return TIdealPresentation("N4", (associator(_X1, _X2, _X3),
                                         _X1 * commutator(_X2, _X3)))
    if name == "T3":
        return TIdealPresentation("T3", (Poly.of(left_bracket((1, 2, 3))),
                                         _X1 * (_X2 * _X3) - _X2 * (_X1 * _X3)))
    if name == "N6":
        if ell is None:
            ell = ELL
        label = "N6" if ell is ELL else f"N6@{ell}"
        return TIdealPresentation(label, (RIGHT_COMM_GEN, LEFT_SYM_GEN,
                                          ell_commutator_generator(ell)))
    if name == "N5":
        return TIdealPresentation("N5", (RIGHT_COMM_GEN, LEFT_SYM_GEN,
                                         _X1 * commutator(_X2, _X3)))
    if name == "Example3_1":
        return TIdealPresentation("Example3_1", (associator(_X1, _X2, _X3),
                                                 Poly.of(left_bracket((1, 1, 1)))))
    raise InvalidArgument(f"unknown presentation {name!r}")


#: catalog algebra tag -> presentation name
PRESENTATION_FOR_ALGEBRA = {"T2": "T2", "N1": "N123", "N2": "N123", "N3": "N123",
                            "N4": "N4", "T3": "T3", "N5": "N5", "N6": "N6"}

#: catalog algebra tag -> basis family kind
FAMILY_FOR_ALGEBRA = {"T2": "T2", "N1": "N123", "N2": "N123", "N3": "N123",
                      "N4": "N4", "T3": "T3", "N5": "B", "N6": "B"}


def presentation_for_algebra(alg: Algebra2D) -> TIdealPresentation:
    name = PRESENTATION_FOR_ALGEBRA.get(alg.name)
    if name is None:
        raise InvalidArgument(f"no catalog presentation for algebra {alg}")
    return presentations(name, alg.ell if alg.name == "N6" else None)


# ---------------------------------------------------------------------------
# basis families
# ---------------------------------------------------------------------------

FAMILY_KINDS = ("T2", "N123", "N4", "T3", "B", "Bprime")


def family_elements(kind: str, delta: Iterable[int]) -> tuple:
    """The family members of one multidegree, in enumeration order.

    The index constraints are taken literally from the defining conditions;
    nothing is deduplicated, so a redundant condition would surface as a
    duplicate element.
    """
    delta = mdeg_trim(delta)
    total = mdeg_total(delta)
    if total < 1:
        raise InvalidArgument("multidegree must have positive total degree")
    support = [i for i, d in enumerate(delta, start=1) if d > 0]
    sorted_word = [i for i, d in enumerate(delta, start=1) for _ in range(d)]

    def minus_one(i: int) -> list[int]:
        out = list(sorted_word)
        out.remove(i)
        return out

    if kind == "T2":
        if total == 1:
            return (Poly.of(left_bracket(sorted_word)),)
        if total == 2:
            return (Poly.of(left_bracket(sorted_word)),)
        return ()
    if kind == "N123":
        return (Poly.of(left_bracket(sorted_word)),)
    if kind == "N4":
        return tuple(Poly.of(left_bracket([i] + minus_one(i))) for i in support)
    if kind == "T3":
        return tuple(Poly.of(right_bracket(list(reversed(minus_one(i))) + [i]))
                     for i in support)
    if kind == "B":
        out = [Poly.of(left_bracket([i] + minus_one(i))) for i in support]
        if total >= 3:
            j = sorted_word
            m = node_chain(j)
            out.append(Poly.of(m))
        return tuple(out)
    if kind == "Bprime":
        out = [Poly.of(left_bracket(sorted_word))]
        if total >= 3:
            j = sorted_word
            p = associator(var(j[0]), var(j[1]), var(j[2]))
            for t in j[3:]:
                p = p * var(t)
            out.append(p)
        if total >= 2:
            for i in support:
                rest = minus_one(i)
                if i > rest[0]:
                    p = commutator(var(rest[0]), var(i))
                    for t in rest[1:]:
                        p = p * var(t)
                    out.append(p)
        return tuple(out)
    raise InvalidArgument(f"unknown basis family {kind!r}")


def node_chain(sorted_word: Sequence[int]) -> Monomial:
    """(x_{j1} (x_{j2} x_{j3})) x_{j4} ... x_{jn} for a sorted index word."""
    j = sorted_word
    m = node(leaf(j[0]), node(leaf(j[1]), leaf(j[2])))
    for t in j[3:]:
        m = node(m, leaf(t))
    return m


# ---------------------------------------------------------------------------
# component spans
# ---------------------------------------------------------------------------

def poly_to_vec(f: Poly, index: dict) -> SparseVec:
    return {index[m]: c for m, c in f.terms.items()}


def vec_to_poly(vec: SparseVec, monomials: Sequence[Monomial]) -> Poly:
    return Poly({monomials[i]: c for i, c in vec.items()})


_LINEARIZED: dict[Poly, Poly] = {}


def _linearized(g: Poly) -> Poly:
    got = _LINEARIZED.get(g)
    if got is None:
        got = g if g.is_multilinear() else complete_lin(g)
        _LINEARIZED[g] = got
    return got


def _part_compositions(delta: tuple, k: int):
    """Ordered splits of delta into k componentwise parts of total >= 1."""
    if k == 1:
        if mdeg_total(delta) >= 1:
            yield (delta,)
        return
    total = mdeg_total(delta)
    for alpha in product(*(range(d + 1) for d in delta)):
        atot = sum(alpha)
        if atot < 1 or total - atot < k - 1:
            continue
        alpha_t = mdeg_trim(alpha)
        rest = mdeg_sub(delta, alpha_t)
        for tail in _part_compositions(rest, k - 1):
            yield (alpha_t,) + tail


def _instance_polys(pres: TIdealPresentation, delta: tuple, caps: Caps):
    """Monomial-substitution instances of the linearized generators."""
    for g in pres.generators:
        lin = _linearized(g)
        k = mdeg_total(g.mdeg())
        for parts in _part_compositions(delta, k):
            pools = [enumerate_monomials(p, caps) for p in parts]
            for words in product(*pools):
                mapping = dict(enumerate(words, start=1))
                yield lin.leaf_substitute(mapping)


def _span_polys(pres: TIdealPresentation, delta: tuple, caps: Caps):
    yield from _instance_polys(pres, delta, caps)
    min_gen = min(mdeg_total(g.mdeg()) for g in pres.generators)
    total = mdeg_total(delta)
    if total <= min_gen:
        return
    for eps in product(*(range(d + 1) for d in delta)):
        etot = sum(eps)
        if etot < 1 or total - etot < min_gen:
            continue
        eps_t = mdeg_trim(eps)
        mu = mdeg_sub(delta, eps_t)
        ech, sub_mons, _ = component_echelon(pres, mu, caps)
        if not ech.rank:
            continue
        rows = [vec_to_poly(row, sub_mons) for row in ech.pivot_vectors()]
        for mctx in enumerate_monomials(eps_t, caps):
            ctx = Poly.of(mctx)
            for b in rows:
                yield b * ctx
                yield ctx * b


def component_span(pres: TIdealPresentation, delta: Iterable[int],
                   caps: Caps = DEFAULT_CAPS) -> list[Poly]:
    """A finite multihomogeneous list spanning the delta-component of I."""
    delta = _checked_delta(delta, caps)
    return [p for p in _span_polys(pres, delta, caps) if p]


_ECHELON_CACHE: dict[tuple, tuple] = {}


def _is_symbolic(pres: TIdealPresentation) -> bool:
    return any(isinstance(c, Scalar)
               for g in pres.generators for c in g.terms.values())


def component_echelon(pres: TIdealPresentation, delta: Iterable[int],
                      caps: Caps = DEFAULT_CAPS):
    """(echelon of the span, component monomials, monomial index)."""
    delta = _checked_delta(delta, caps)
    key = (pres, delta)
    got = _ECHELON_CACHE.get(key)
    if got is None:
        mons, index = component_monomials(delta, caps)
        ech = PolyEchelon() if _is_symbolic(pres) else Echelon()
        for p in _span_polys(pres, delta, caps):
            if p:
                ech.insert(poly_to_vec(p, index))
        got = _ECHELON_CACHE.setdefault(key, (ech, mons, index))
    return got


def _checked_delta(delta: Iterable[int], caps: Caps) -> tuple:
    delta = mdeg_trim(delta)
    total = mdeg_total(delta)
    if total < 1:
        raise InvalidArgument("multidegree must have positive total degree")
    if total > caps.max_total_degree:
        raise TooLarge(f"|delta| = {total} exceeds cap {caps.max_total_degree}")
    return delta


# ---------------------------------------------------------------------------
# membership and dimensions
# ---------------------------------------------------------------------------

def contains(pres: TIdealPresentation, f: Poly, caps: Caps = DEFAULT_CAPS) -> bool:
    """Exact T-ideal membership, component by component."""
    for delta, comp in f.components().items():
        ech, _, index = component_echelon(pres, delta, caps)
        if not ech.contains(poly_to_vec(comp, index)):
            return False
    return True


def contains_modulo(pres: TIdealPresentation, f: Poly, extra: Sequence[Poly],
                    caps: Caps = DEFAULT_CAPS) -> bool:
    """Membership in I + span(extra), used for congruences with remainders."""
    for delta, comp in f.components().items():
        ech, _, index = component_echelon(pres, delta, caps)
        ech = ech.clone()
        for e in extra:
            part = e.component(delta)
            if part:
                ech.insert(poly_to_vec(part, index))
        if not ech.contains(poly_to_vec(comp, index)):
            return False
    return True


def quotient_component_dim(pres: TIdealPresentation, delta: Iterable[int],
                           caps: Caps = DEFAULT_CAPS) -> int:
    """Dimension of the delta-component of the relatively free algebra."""
    ech, mons, _ = component_echelon(pres, delta, caps)
    return len(mons) - ech.rank


# ---------------------------------------------------------------------------
# basis verification (both halves of the span/independence argument)
# ---------------------------------------------------------------------------

@dataclass
class BasisCheckReport:
    component: tuple
    free_dim: int
    ideal_rank: int
    quotient_dim: int
    basis_count: int
    status: str
    witness: Poly | None = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        from .freealg import format_poly
        out = {"component": list(self.component), "freeDim": self.free_dim,
               "idealRank": self.ideal_rank, "quotientDim": self.quotient_dim,
               "basisCount": self.basis_count, "status": self.status}
        if self.witness is not None:
            out["witness"] = format_poly(self.witness)
        return out


def identity_eval_row(alg: Algebra2D, f: Poly) -> SparseVec:
    """Evaluations of the (linearized) polynomial over all basis tuples.

    Columns are 2*t + c where t enumerates the 2^m tuples and c the output
    coordinate; a multilinear polynomial is an identity iff this row is zero.
    """
    lin = f if f.is_multilinear() else complete_lin(f)
    m = mdeg_total(lin.mdeg())
    row: SparseVec = {}
    for mon, c in lin.terms.items():
        for bits in range(1 << m):
            val = eval_on_basis(alg, mon, bits)
            if val.a:
                col = 2 * bits
                nv = row.get(col, 0) + c * val.a
                if nv:
                    row[col] = nv
                else:
                    row.pop(col, None)
            if val.b:
                col = 2 * bits + 1
                nv = row.get(col, 0) + c * val.b
                if nv:
                    row[col] = nv
                else:
                    row.pop(col, None)
    return row


def check_spanning_basis(pres: TIdealPresentation, alg: Algebra2D, kind: str,
                         delta: Iterable[int],
                         caps: Caps = DEFAULT_CAPS) -> BasisCheckReport:
    """Verify that the family is a basis of the delta-component modulo Id(alg).

    Checks (i) the family spans the component of the quotient by the
    presented ideal (count match plus independence modulo the span) and
    (ii) no nontrivial combination of the family is an identity of the
    algebra.  Together these pin the component dimension from both sides.

    For a symbolic-parameter presentation the ideal rank over Q(l) is
    certified by a sandwich instead of a symbolic elimination: the family's
    independence modulo Id(alg) (with the generators verified identities of
    alg) bounds the rank from above, and a rational specialization of the
    parameter bounds it from below because a nonzero specialized minor lifts
    to a nonzero symbolic minor.  When the bounds disagree the slow exact
    elimination runs anyway.
    """
    delta = _checked_delta(delta, caps)
    elems = family_elements(kind, delta)
    mons, index = component_monomials(delta, caps)
    report = BasisCheckReport(component=delta, free_dim=len(mons),
                              ideal_rank=-1, quotient_dim=-1,
                              basis_count=len(elems), status="pass")
    if len(set(elems)) != len(elems):
        report.status = "fail: duplicate family elements"
        return report
    null_witness = _family_identity_combination(alg, elems)
    if null_witness is not None:
        report.status = "fail: family combination is an identity of the algebra"
        report.witness = null_witness
        _fill_rank(report, pres, delta, caps)
        return report
    if _is_symbolic(pres) and _certify_symbolic_rank(pres, alg, delta,
                                                     len(mons) - len(elems), caps):
        report.ideal_rank = len(mons) - len(elems)
        report.quotient_dim = len(elems)
        return report
    _fill_rank(report, pres, delta, caps)
    if report.quotient_dim != report.basis_count:
        report.status = (f"fail: quotient dimension {report.quotient_dim} != "
                         f"family count {report.basis_count}")
        return report
    ech, _, _ = component_echelon(pres, delta, caps)
    probe = ech.clone()
    for e in elems:
        if not probe.insert(poly_to_vec(e, index)):
            report.status = "fail: family element dependent modulo the ideal"
            report.witness = e
            return report
    return report


def _fill_rank(report: BasisCheckReport, pres, delta, caps):
    ech, mons, _ = component_echelon(pres, delta, caps)
    report.ideal_rank = ech.rank
    report.quotient_dim = len(mons) - ech.rank


def _family_identity_combination(alg: Algebra2D, elems):
    """A nonzero family combination lying in Id(alg), or None."""
    rows = [identity_eval_row(alg, e) for e in elems]
    nulls = left_nullspace(rows)
    if not nulls:
        return None
    witness = Poly.zero()
    for i, c in nulls[0].items():
        witness = witness + elems[i].scale(c)
    return witness


_SPECIALIZATION_POINTS = (7, 5, 11)


def _certify_symbolic_rank(pres: TIdealPresentation, alg: Algebra2D,
                           delta: tuple, target_rank: int, caps: Caps) -> bool:
    """True iff the ideal's component rank over Q(l) provably equals target.

    Upper bound: the generators are identities of alg (checked), so the
    component span sits inside Id(alg); independence of the family modulo
    Id(alg) was established by the caller, capping the span rank at target.
    Lower bound: the rank at a specialized parameter value.
    """
    from .algebra2d import is_identity
    if not all(is_identity(alg, g) for g in pres.generators):
        return False
    for point in _SPECIALIZATION_POINTS:
        spec = specialize_presentation(pres, rat(point))
        ech, _, _ = component_echelon(spec, delta, caps)
        if ech.rank == target_rank:
            return True
        if ech.rank > target_rank:
            # specialized rank already exceeds the certified upper bound:
            # the family cannot be a basis, let the exact path report it
            return False
    return False


def specialize_presentation(pres: TIdealPresentation, point) -> TIdealPresentation:
    """Substitute a rational value for l in every generator coefficient."""
    from .scalars import specialize
    gens = tuple(Poly({m: specialize(c, point) for m, c in g.terms.items()})
                 for g in pres.generators)
    return TIdealPresentation(f"{pres.label}@l={point}", gens)


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------

def normal_form(f: Poly, pres: TIdealPresentation, kind: str,
                caps: Caps = DEFAULT_CAPS) -> dict:
    """Coordinates of f modulo the ideal in the family basis.

    Returns {family element -> coefficient} with zero coordinates omitted;
    requires the family to be a basis at each multidegree met (raises
    SpanFailure otherwise).
    """
    out: dict[Poly, object] = {}
    for delta, comp in sorted(f.components().items()):
        ech, mons, index = component_echelon(pres, delta, caps)
        elems = family_elements(kind, delta)
        residual_f = ech.reduce_exact(poly_to_vec(comp, index))
        residuals = [ech.reduce_exact(poly_to_vec(e, index)) for e in elems]
        if not residual_f:
            continue
        if not elems:
            raise SpanFailure(f"component {delta}: nonzero residue, empty family")
        coeffs = solve_in_span(residuals, residual_f)
        if coeffs is None:
            raise SpanFailure(f"component {delta}: residue outside the family span")
        for i, c in coeffs.items():
            if c:
                out[elems[i]] = c
    return out


def reconstruct(coords: dict) -> Poly:
    """Sum of basis elements weighted by normal-form coordinates."""
    total = Poly.zero()
    for e, c in coords.items():
        total = total + e.scale(c)
    return total


# ---------------------------------------------------------------------------
# minimality of generating sets
# ---------------------------------------------------------------------------

@dataclass
class MinimalityReport:
    label: str
    redundant: tuple

    @property
    def passed(self) -> bool:
        return not self.redundant

    def to_json(self) -> dict:
        from .freealg import format_poly
        return {"presentation": self.label,
                "status": "pass" if self.passed else "fail",
                "redundant": [{"index": i, "generator": format_poly(g)}
                              for i, g in self.redundant]}


def check_minimal(pres: TIdealPresentation, caps: Caps = DEFAULT_CAPS) -> MinimalityReport:
    """Each generator must lie outside the T-ideal of the remaining ones.

    The span of the reduced presentation at the generator's multidegree
    includes all variable-permutation images (they are substitution
    instances), so for multilinear generators this is exactly the span
    argument used in the minimality proofs.
    """
    redundant = []
    for i, g in enumerate(pres.generators):
        reduced = pres.without(i)
        if not reduced.generators:
            continue
        if contains(reduced, g, caps):
            redundant.append((i, g))
    return MinimalityReport(pres.label, tuple(redundant))
