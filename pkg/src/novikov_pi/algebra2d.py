"""Two-dimensional Novikov algebras: catalog, evaluation, identity testing.

An algebra is a 2x2x2 table of exact structure constants over Q or Q(l):
``table[i][j]`` holds the coordinates of e_{i+1} e_{j+1}.  The catalog (tags
T1, T2, T3, N1..N5, N6) is fixed data; N6 carries the parameter l, symbolic
by default, excluded at l in {0, 1}.

Identity testing splits the input into multihomogeneous components,
completely linearizes each, and sweeps all 2^m tuples of basis vectors: in
characteristic zero a polynomial is an identity iff each completely
linearized component vanishes on every basis tuple.  Basis-tuple evaluation
memoizes on (tree shape, leaf pattern), which the interned monomials share
heavily.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .errors import ExcludedParameter, InvalidArgument, MissingAssignment
from .freealg import (Monomial, Poly, associator, commutator, mdeg_total,
                      parse_scalar, var)
from .linearize import complete_lin
from .scalars import ELL, Scalar, coeff_str, is_rational, rat, specialize


class Element(NamedTuple):
    """a*e1 + b*e2 with exact coordinates."""

    a: object
    b: object

    def __bool__(self):
        return bool(self.a) or bool(self.b)


E1 = Element(rat(1), rat(0))
E2 = Element(rat(0), rat(1))
ZERO_EL = Element(rat(0), rat(0))


def element(a, b) -> Element:
    return Element(rat(a) if isinstance(a, int) else a,
                   rat(b) if isinstance(b, int) else b)


def add_el(u: Element, v: Element) -> Element:
    return Element(u.a + v.a, u.b + v.b)


def scale_el(c, u: Element) -> Element:
    return Element(c * u.a, c * u.b)


@dataclass(frozen=True)
class Algebra2D:
    """Structure constants plus the optional parameter of the N6 family."""

    name: str = field(compare=False)
    table: tuple  # table[i][j] = (coeff of e1, coeff of e2) for e_{i+1}e_{j+1}
    ell: object = None
    _caches: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def symbolic(self) -> bool:
        return isinstance(self.ell, Scalar)

    def __str__(self):
        if self.ell is None:
            return self.name
        return f"{self.name}^l" if self.symbolic else f"{self.name}^{self.ell}"


def _table(entries: dict) -> tuple:
    zero = (rat(0), rat(0))
    rows = []
    for i in (1, 2):
        rows.append(tuple(entries.get((i, j), zero) for j in (1, 2)))
    return tuple(rows)


CATALOG_NAMES = ("T1", "T2", "T3", "N1", "N2", "N3", "N4", "N5", "N6")

_ONE = rat(1)
_ZERO = rat(0)

_FIXED_TABLES = {
    "T1": _table({}),
    "T2": _table({(1, 1): (_ZERO, _ONE)}),
    "T3": _table({(2, 1): (-_ONE, _ZERO)}),
    "N1": _table({(1, 1): (_ONE, _ZERO), (2, 2): (_ZERO, _ONE)}),
    "N2": _table({(1, 1): (_ONE, _ZERO)}),
    "N3": _table({(1, 1): (_ONE, _ZERO), (1, 2): (_ZERO, _ONE), (2, 1): (_ZERO, _ONE)}),
    "N4": _table({(1, 2): (_ONE, _ZERO), (2, 2): (_ZERO, _ONE)}),
    "N5": _table({(1, 2): (_ONE, _ZERO), (2, 2): (_ONE, _ONE)}),
}


def catalog(name: str, ell=None) -> Algebra2D:
    """One of the nine catalog algebras; N6 takes l (symbolic by default)."""
    if name not in CATALOG_NAMES:
        raise InvalidArgument(f"unknown catalog algebra {name!r}")
    if name != "N6":
        if ell is not None:
            raise InvalidArgument(f"{name} takes no parameter")
        return Algebra2D(name, _FIXED_TABLES[name])
    if ell is None:
        ell = ELL
    elif isinstance(ell, str):
        ell = parse_scalar(ell)
    elif isinstance(ell, int):
        ell = rat(ell)
    if is_rational(ell) and ell in (0, 1):
        raise ExcludedParameter(f"N6 requires l outside {{0, 1}}, got {ell}")
    table = _table({(1, 2): (_ONE, _ZERO), (2, 1): (ell, _ZERO), (2, 2): (_ZERO, _ONE)})
    return Algebra2D("N6", table, ell)


def custom(table, name: str = "custom", unchecked: bool = False) -> Algebra2D:
    """User-supplied structure constants; Novikov-ness checked eagerly."""
    rows = tuple(tuple((entry[0], entry[1]) for entry in row) for row in table)
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise InvalidArgument("structure table must be 2x2 with coordinate pairs")
    alg = Algebra2D(name, rows)
    if not unchecked and not is_novikov(alg):
        raise InvalidArgument(
            "table is not a Novikov algebra (pass unchecked=True to accept anyway)")
    return alg


def algebra_from_json(obj: Mapping) -> Algebra2D:
    """{"name", "ell"?, "table"?} with scalar-grammar strings as entries."""
    name = obj.get("name")
    if name in CATALOG_NAMES:
        ell = obj.get("ell")
        return catalog(name, ell if name == "N6" else None)
    table = [[(parse_scalar(str(c[0])), parse_scalar(str(c[1]))) for c in row]
             for row in obj["table"]]
    return custom(table, name=name or "custom", unchecked=bool(obj.get("unchecked")))


def algebra_to_json(alg: Algebra2D) -> dict:
    out = {"name": alg.name,
           "table": [[[coeff_str(c) for c in entry] for entry in row]
                     for row in alg.table]}
    if alg.ell is not None:
        out["ell"] = "l" if alg.symbolic else coeff_str(alg.ell)
    return out


def parse_algebra_tag(tag: str, ell=None) -> Algebra2D:
    """Catalog tag with optional parameter suffix: ``N6``, ``N6^2``, ``N6:2``."""
    for sep in ("^", ":", "@"):
        if sep in tag:
            base, _, suffix = tag.partition(sep)
            if ell is not None:
                raise InvalidArgument("parameter given both in tag and separately")
            if suffix in ("l", "sym", "symbolic"):
                return catalog(base)
            return catalog(base, parse_scalar(suffix))
    if ell is not None and not (isinstance(ell, str) and ell in ("l", "sym", "symbolic")):
        return catalog(tag, ell)
    return catalog(tag)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def alg_mul(alg: Algebra2D, u: Element, v: Element) -> Element:
    t = alg.table
    a = _ZERO
    b = _ZERO
    for i in (0, 1):
        cu = u[i]
        if not cu:
            continue
        for j in (0, 1):
            cv = v[j]
            if not cv:
                continue
            w = cu * cv
            c1, c2 = t[i][j]
            if c1:
                a = a + w * c1
            if c2:
                b = b + w * c2
    return Element(a, b)


def eval_monomial(alg: Algebra2D, m: Monomial, assignment: Mapping[int, Element]) -> Element:
    if m.var is not None:
        try:
            return assignment[m.var]
        except KeyError:
            raise MissingAssignment(f"no element assigned to x{m.var}")
    return alg_mul(alg,
                   eval_monomial(alg, m.left, assignment),
                   eval_monomial(alg, m.right, assignment))


def eval_poly(alg: Algebra2D, f: Poly, assignment: Mapping[int, Element]) -> Element:
    a = _ZERO
    b = _ZERO
    for m, c in f.terms.items():
        val = eval_monomial(alg, m, assignment)
        if val.a:
            a = a + c * val.a
        if val.b:
            b = b + c * val.b
    return Element(a, b)


def basis_tuple(n: int, j: int) -> tuple[Element, ...]:
    """(e2, ..., e2) with e1 in the j-th position."""
    if n < 1 or not 1 <= j <= n:
        raise InvalidArgument(f"basis_tuple requires 1 <= j <= n, got j={j}, n={n}")
    return tuple(E1 if r == j else E2 for r in range(1, n + 1))


# ---------------------------------------------------------------------------
# basis-tuple sweeps and identity testing
# ---------------------------------------------------------------------------

def _eval_skeleton(alg: Algebra2D, skel: Monomial, bits: tuple) -> Element:
    """Value of a tree shape on a +/- basis-vector leaf pattern (memoized)."""
    cache = alg._caches.setdefault("skel", {})
    key = (skel, bits)
    got = cache.get(key)
    if got is None:
        if skel.var is not None:
            got = E2 if bits[0] else E1
        else:
            split = skel.left.degree
            got = alg_mul(alg,
                          _eval_skeleton(alg, skel.left, bits[:split]),
                          _eval_skeleton(alg, skel.right, bits[split:]))
        cache[key] = got
    return got


def eval_on_basis(alg: Algebra2D, m: Monomial, bits: int) -> Element:
    """Evaluate a monomial with variable r set to e1 or e2 by bit r-1 of bits."""
    pattern = tuple((bits >> (v - 1)) & 1 for v in m.leaves)
    return _eval_skeleton(alg, m.skeleton, pattern)


def basis_assignment(bits: int, n: int) -> dict[int, Element]:
    return {r: E2 if (bits >> (r - 1)) & 1 else E1 for r in range(1, n + 1)}


def identity_witness(alg: Algebra2D, f: Poly):
    """None if f is an identity of alg, else (component, assignment, value).

    The assignment is over basis vectors and refutes the completely
    linearized component; for multilinear components it refutes the
    component itself.
    """
    for delta, comp in sorted(f.components().items()):
        lin = comp if comp.is_multilinear() else complete_lin(comp)
        m = mdeg_total(lin.mdeg())
        for bits in range(1 << m):
            a = _ZERO
            b = _ZERO
            for mon, c in lin.terms.items():
                val = eval_on_basis(alg, mon, bits)
                if val.a:
                    a = a + c * val.a
                if val.b:
                    b = b + c * val.b
            if a or b:
                return delta, basis_assignment(bits, m), Element(a, b)
    return None


def is_identity(alg: Algebra2D, f: Poly) -> bool:
    """True iff f vanishes under every evaluation in alg."""
    return identity_witness(alg, f) is None


# ---------------------------------------------------------------------------
# defining identities and the opposite algebra
# ---------------------------------------------------------------------------

_X1, _X2, _X3 = var(1), var(2), var(3)

#: left symmetry of associators: (x, y, z) = (y, x, z)
LEFT_SYMMETRY = associator(_X1, _X2, _X3) - associator(_X2, _X1, _X3)
#: right commutativity: (xy)z = (xz)y
RIGHT_COMMUTATIVITY = (_X1 * _X2) * _X3 - (_X1 * _X3) * _X2

NOVIKOV_IDENTITIES = (LEFT_SYMMETRY, RIGHT_COMMUTATIVITY)


def is_novikov(alg: Algebra2D) -> bool:
    return all(is_identity(alg, f) for f in NOVIKOV_IDENTITIES)


def opposite(alg: Algebra2D) -> Algebra2D:
    """Same space, reversed product a*b = ba (transposed table)."""
    t = alg.table
    transposed = ((t[0][0], t[1][0]), (t[0][1], t[1][1]))
    name = alg.name[:-3] if alg.name.endswith("^op") else alg.name + "^op"
    return Algebra2D(name, transposed, alg.ell)


def specialize_algebra(alg: Algebra2D, point) -> Algebra2D:
    """Substitute a rational value for l in a symbolic-parameter algebra."""
    if not alg.symbolic:
        raise InvalidArgument(f"{alg} has no symbolic parameter")
    point = rat(point)
    if alg.name == "N6" and point in (0, 1):
        raise ExcludedParameter(f"N6 requires l outside {{0, 1}}, got {point}")
    table = tuple(tuple((specialize(c1, point), specialize(c2, point))
                        for (c1, c2) in row) for row in alg.table)
    return Algebra2D(alg.name, table, point)
