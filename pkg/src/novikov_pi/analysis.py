"""Codimension sequences, identity separation, multilinear image classes.

* ``codim`` -- rank of the exact evaluation matrix of all multilinear
  monomials over all basis tuples (rows: n! * Catalan(n-1) monomials,
  columns: 2 * 2^n output coordinates).
* ``separate`` -- an identity of one algebra failing in the other.  The
  catalog presentations are probed first so the returned witnesses are the
  ones used in the isomorphism-separation argument; a generic left-nullspace
  sweep of the evaluation matrices backs them up.
* ``classify_image`` -- the image of a multilinear polynomial as a subspace
  tag, decided from its coordinates in the basis family; with a symbolic
  parameter the result is a case split over the finitely many rational
  parameter values where the answer changes.
* ``image_sample_oracle`` -- randomized containment/attainment check of a
  predicted image.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum

from .algebra2d import (Algebra2D, Element, basis_assignment, element,
                        eval_on_basis, eval_poly, specialize_algebra)
from .config import DEFAULT_CAPS, Caps
from .errors import InvalidArgument, NotMultilinear, TooLarge
from .freealg import (Poly, component_monomials, format_poly, mdeg_total, v_mon,
                      w_mon)
from .linalg import Echelon, PolyEchelon, left_nullspace
from .scalars import (ELL, Scalar, numerator_poly, rat, rational_roots,
                      specialize)
from .tideal import (FAMILY_FOR_ALGEBRA, PRESENTATION_FOR_ALGEBRA,
                     family_elements, identity_eval_row, normal_form,
                     presentation_for_algebra)


# ---------------------------------------------------------------------------
# codimension sequences
# ---------------------------------------------------------------------------

@dataclass
class CodimReport:
    algebra: str
    ell: str | None
    values: list  # (n, c_n) pairs
    witness_bases: dict  # n -> monomials whose classes span P_n(A)

    def to_json(self, expected: dict | None = None) -> dict:
        rows = []
        for n, c in self.values:
            row = {"n": n, "c_n": c}
            if expected is not None:
                exp = expected.get(str(n))
                if exp is not None:
                    row["expected"] = exp
                    row["match"] = exp == c
            rows.append(row)
        out = {"algebra": self.algebra, "rows": rows,
               "witnessBases": {n: [format_poly(Poly.of(m)) for m in mons]
                                for n, mons in self.witness_bases.items()}}
        if self.ell is not None:
            out["ell"] = self.ell
        return out


def _codim_matrix_rank(alg: Algebra2D, n: int, caps: Caps):
    """(rank, pivot monomials) of the multilinear evaluation matrix."""
    mons, _ = component_monomials((1,) * n, caps)
    ech = PolyEchelon() if alg.symbolic else Echelon()
    witnesses = []
    tuples = range(1 << n)
    for mon in mons:
        row = {}
        for bits in tuples:
            val = eval_on_basis(alg, mon, bits)
            if val.a:
                row[2 * bits] = val.a
            if val.b:
                row[2 * bits + 1] = val.b
        if row and ech.insert(row):
            witnesses.append(mon)
    return ech.rank, witnesses


def codim(alg: Algebra2D, n: int, caps: Caps = DEFAULT_CAPS,
          with_witness: bool = False):
    """c_n(alg): dimension of the degree-n multilinear component mod Id(alg)."""
    if n < 1:
        raise InvalidArgument(f"codimension index must be >= 1, got {n}")
    if n > caps.max_codim_n:
        raise TooLarge(f"n = {n} exceeds cap {caps.max_codim_n}")
    rank, witnesses = _codim_matrix_rank(alg, n, caps)
    return (rank, witnesses) if with_witness else rank


def codim_report(alg: Algebra2D, max_n: int, caps: Caps = DEFAULT_CAPS) -> CodimReport:
    values = []
    bases = {}
    for n in range(1, max_n + 1):
        c, wit = codim(alg, n, caps, with_witness=True)
        values.append((n, c))
        bases[n] = wit
    ell = None
    if alg.ell is not None:
        ell = "l" if alg.symbolic else str(alg.ell)
    return CodimReport(alg.name, ell, values, bases)


# ---------------------------------------------------------------------------
# separation by identities
# ---------------------------------------------------------------------------

@dataclass
class SeparationWitness:
    polynomial: Poly
    holds_in: str
    fails_in: str
    counterexample: tuple  # Elements, one per variable
    value: Element

    def to_json(self) -> dict:
        from .scalars import coeff_str
        return {"witnessPoly": format_poly(self.polynomial),
                "holdsIn": self.holds_in, "failsIn": self.fails_in,
                "counterexample": [[coeff_str(e.a), coeff_str(e.b)]
                                   for e in self.counterexample],
                "value": [coeff_str(self.value.a), coeff_str(self.value.b)]}


def _refute(alg: Algebra2D, f: Poly):
    """(assignment tuple, value) witnessing that f is not an identity."""
    from .algebra2d import identity_witness
    got = identity_witness(alg, f)
    if got is None:
        return None
    _, assignment, value = got
    n = max(f.variables())
    elems = tuple(assignment.get(r, element(0, 0)) for r in range(1, n + 1))
    return elems, value


def _candidate_identities(alg: Algebra2D):
    if alg.name in PRESENTATION_FOR_ALGEBRA:
        return presentation_for_algebra(alg).generators
    return ()


def separate(a: Algebra2D, b: Algebra2D, max_degree: int,
             caps: Caps = DEFAULT_CAPS):
    """An identity of one algebra that fails in the other, if identities
    differ in multilinear degree <= max_degree; None otherwise."""
    if max_degree > caps.max_separate_degree:
        raise TooLarge(f"degree {max_degree} exceeds cap {caps.max_separate_degree}")
    from .algebra2d import is_identity
    # paper-style candidates first: the catalog generating identities
    for first, second in ((a, b), (b, a)):
        for g in _candidate_identities(first):
            if mdeg_total(g.mdeg()) > max_degree:
                continue
            if not is_identity(first, g):
                continue
            refutation = _refute(second, g)
            if refutation is not None:
                elems, value = refutation
                return SeparationWitness(g, str(first), str(second), elems, value)
    # generic sweep of the multilinear components
    for n in range(1, max_degree + 1):
        mons, _ = component_monomials((1,) * n, caps)
        rows_a = [identity_eval_row(a, Poly.of(m)) for m in mons]
        rows_b = [identity_eval_row(b, Poly.of(m)) for m in mons]
        for first, second, rows_first, rows_second in (
                (a, b, rows_a, rows_b), (b, a, rows_b, rows_a)):
            for combo in left_nullspace(rows_first):
                value_row = {}
                for i, c in combo.items():
                    for k, v in rows_second[i].items():
                        nv = value_row.get(k, 0) + c * v
                        if nv:
                            value_row[k] = nv
                        else:
                            value_row.pop(k, None)
                if value_row:
                    poly = Poly.zero()
                    for i, c in combo.items():
                        poly = poly + Poly.of(mons[i]).scale(c)
                    col = min(value_row)
                    bits = col // 2
                    assignment = basis_assignment(bits, n)
                    elems = tuple(assignment[r] for r in range(1, n + 1))
                    return SeparationWitness(poly, str(first), str(second),
                                             elems, eval_poly(second, poly,
                                                              assignment))
    return None


# ---------------------------------------------------------------------------
# multilinear images
# ---------------------------------------------------------------------------

class ImageClass(Enum):
    Zero = "Zero"
    LineE1 = "LineE1"
    LineE2 = "LineE2"
    Whole = "Whole"


@dataclass(frozen=True)
class ImageCase:
    condition: str  # "always", "generic l", or "l = <rational>"
    tag: ImageClass


@dataclass(frozen=True)
class ImageClassification:
    cases: tuple

    @property
    def single(self) -> ImageClass:
        if len(self.cases) != 1:
            raise InvalidArgument(f"parameter-dependent classification: {self.cases}")
        return self.cases[0].tag

    def tag_at(self, point) -> ImageClass:
        """Tag applying at a concrete rational parameter value."""
        generic = None
        for case in self.cases:
            if case.condition in ("always", "generic l"):
                generic = case.tag
            elif case.condition == f"l = {point}":
                return case.tag
        if generic is None:
            raise InvalidArgument("no applicable classification case")
        return generic

    def to_json(self) -> list:
        return [{"condition": c.condition, "class": c.tag.value} for c in self.cases]


def _family_coordinates(f: Poly, alg: Algebra2D, caps: Caps):
    """Coordinates of f in the basis family of alg (reducing if needed)."""
    kind = FAMILY_FOR_ALGEBRA.get(alg.name)
    if kind is None:
        raise InvalidArgument(f"image classification needs a catalog algebra, got {alg}")
    n = mdeg_total(f.mdeg())
    elems = family_elements(kind, (1,) * n)
    index = {e: i for i, e in enumerate(elems)}
    coords = [rat(0)] * len(elems)
    rest = f
    for e, i in index.items():
        if len(e.terms) == 1:
            (mon, unit), = e.terms.items()
            c = rest.terms.get(mon)
            if c:
                coords[i] = c / unit
                rest = rest - e.scale(coords[i])
    if rest:
        pres = presentation_for_algebra(alg)
        nf = normal_form(rest, pres, kind, caps)
        for e, c in nf.items():
            coords[index[e]] = coords[index[e]] + c
    return kind, elems, coords


def classify_image(f: Poly, alg: Algebra2D,
                   caps: Caps = DEFAULT_CAPS) -> ImageClassification:
    """Image subspace of a multilinear polynomial per the case analysis.

    Concrete algebras get a single case.  With the symbolic parameter the
    generic tag is returned together with the finitely many rational
    parameter values (outside {0, 1}) where the tag differs.
    """
    if not f:
        return ImageClassification((ImageCase("always", ImageClass.Zero),))
    if not f.is_multilinear():
        raise NotMultilinear("image classification is defined for multilinear input")
    _, elems, coords = _family_coordinates(f, alg, caps)
    if alg.symbolic:
        return _classify_symbolic(alg, mdeg_total(f.mdeg()), coords)
    tag = _classify_concrete(alg, mdeg_total(f.mdeg()), coords)
    return ImageClassification((ImageCase("always", tag),))


def _classify_concrete(alg: Algebra2D, n: int, coords) -> ImageClass:
    if not any(coords):
        return ImageClass.Zero
    if n == 1:
        return ImageClass.Whole
    name = alg.name
    if name == "T2":
        return ImageClass.LineE2
    if name in ("T3", "N2"):
        return ImageClass.LineE1
    if name in ("N1", "N3"):
        return ImageClass.Whole
    s = rat(0)
    for c in coords:
        s = s + c
    if name in ("N4", "N5"):
        return ImageClass.LineE1 if not s else ImageClass.Whole
    if name == "N6":
        if not s:
            return ImageClass.LineE1
        ell = alg.ell
        if n == 2:
            a1, a2 = coords[0], coords[1]
            if ell == -1 and a1 == a2 and a1:
                return ImageClass.LineE2
            return ImageClass.Whole
        if _matches_scaled_special_family(coords, n, ell):
            return ImageClass.LineE2
        return ImageClass.Whole
    raise InvalidArgument(f"no image case analysis for algebra {name}")


def special_family_coefficients(n: int, ell):
    """Coefficients on v_{1,n}, ..., v_{n,n}, w_n of the one-line family
    whose image degenerates to the e2 axis (n > 2)."""
    if n <= 2:
        raise InvalidArgument("the special family needs n > 2")
    ell = ell if isinstance(ell, Scalar) else rat(ell)
    sq = ell * ell
    c1 = (sq + n * ell - ell + 1) / sq
    c3 = (2 * ell - n * ell - 1) / ell
    cw = (ell - n * ell - 1) / sq
    return [c1, rat(1), c3] + [rat(1)] * (n - 3) + [cw]


def special_family_poly(n: int, ell, alpha=1) -> Poly:
    coeffs = special_family_coefficients(n, ell)
    mons = [v_mon(i, n) for i in range(1, n + 1)] + [w_mon(n)]
    out = Poly.zero()
    for c, m in zip(coeffs, mons):
        out = out + Poly.of(m).scale(c * alpha if alpha != 1 else c)
    return out


def _matches_scaled_special_family(coords, n: int, ell) -> bool:
    """f = alpha * (special family) for some nonzero alpha?  The family is
    normalized by the coefficient of v_{2,n}, which it fixes at 1."""
    alpha = coords[1]
    if not alpha:
        return False
    pattern = special_family_coefficients(n, ell)
    return all(c == alpha * p for c, p in zip(coords, pattern))


def _classify_symbolic(alg: Algebra2D, n: int, coords) -> ImageClassification:
    generic = _classify_concrete(alg, n, coords)
    special_points: set = set()
    s = rat(0)
    for c in coords:
        s = s + c
    if isinstance(s, Scalar):
        special_points.update(rational_roots(s.num))
    if any(coords):
        first = next(c for c in coords if c)
        if isinstance(first, Scalar):
            special_points.update(rational_roots(first.num))
        if n == 2:
            special_points.add(rat(-1))
        elif s:
            diff = _first_family_mismatch(coords, n)
            if diff is not None:
                special_points.update(rational_roots(numerator_poly(diff)))
    cases = [ImageCase("generic l" if special_points else "always", generic)]
    for point in sorted(special_points):
        if point in (0, 1):
            continue
        try:
            spec_coords = [specialize(c, point) for c in coords]
        except Exception:
            continue  # pole of a coordinate: no classification at this value
        tag = _classify_concrete(specialize_algebra(alg, point), n, spec_coords)
        if tag != generic:
            cases.append(ImageCase(f"l = {point}", tag))
    if len(cases) == 1 and cases[0].condition == "generic l":
        cases[0] = ImageCase("always", cases[0].tag)
    return ImageClassification(tuple(cases))


def _first_family_mismatch(coords, n: int):
    """A nonzero difference coefficient-minus-pattern, or None if f is a
    scalar multiple of the special family identically in l."""
    alpha = coords[1]
    pattern = special_family_coefficients(n, ELL)
    if not alpha:
        for c in coords:
            if c:
                return c
        return None
    for c, p in zip(coords, pattern):
        d = c - alpha * p
        if d:
            return d
    return None


# ---------------------------------------------------------------------------
# sampling oracle for predicted images
# ---------------------------------------------------------------------------

@dataclass
class OracleReport:
    algebra: str
    poly: str
    predicted: str
    trials: int
    contained: bool
    attained: bool
    witnesses: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.contained and self.attained

    def to_json(self) -> dict:
        return {"algebra": self.algebra, "poly": self.poly,
                "predicted": self.predicted,
                "oracle": {"trials": self.trials, "contained": self.contained,
                           "attained": self.attained,
                           "witnesses": self.witnesses,
                           "failures": self.failures}}


def _random_element(rng: random.Random) -> Element:
    return element(rng.randint(-9, 9), rng.randint(-9, 9))


def _in_predicted(tag: ImageClass, value: Element) -> bool:
    if tag is ImageClass.Zero:
        return not value
    if tag is ImageClass.LineE1:
        return not value.b
    if tag is ImageClass.LineE2:
        return not value.a
    return True


class _Attainment:
    """Tracks whether sampled values span the predicted subspace."""

    def __init__(self, tag: ImageClass):
        self.tag = tag
        self.done = tag is ImageClass.Zero
        self.first = None
        self.witnesses = []

    def feed(self, value: Element, assignment) -> None:
        if self.done or not value:
            return
        if self.tag in (ImageClass.LineE1, ImageClass.LineE2):
            self.done = True
            self.witnesses.append(assignment)
            return
        if self.first is None:
            self.first = value
            self.witnesses.append(assignment)
            return
        det = self.first.a * value.b - self.first.b * value.a
        if det:
            self.done = True
            self.witnesses.append(assignment)


def image_sample_oracle(f: Poly, alg: Algebra2D, predicted, trials: int,
                        seed: int = 0) -> OracleReport:
    """Sample random rational tuples: every value must lie in the predicted
    subspace and the sampled values must span it.

    With a symbolic parameter the oracle runs at several rational
    specializations, each against the classification case that applies
    there.
    """
    if trials < 1:
        raise InvalidArgument("trials must be >= 1")
    if isinstance(predicted, ImageClass):
        predicted = ImageClassification((ImageCase("always", predicted),))
    if alg.symbolic:
        points = [rat(2), rat(3), rat(-2)]
        for case in predicted.cases:
            if case.condition.startswith("l = "):
                points.append(rat(case.condition[4:]))
        report = None
        for point in points:
            spec_f = Poly({m: specialize(c, point) for m, c in f.terms.items()})
            sub = image_sample_oracle(spec_f, specialize_algebra(alg, point),
                                      predicted.tag_at(point), trials, seed)
            if report is None:
                report = OracleReport(str(alg), format_poly(f),
                                      "; ".join(f"{c.condition}: {c.tag.value}"
                                                for c in predicted.cases),
                                      trials, True, True)
            report.contained &= sub.contained
            report.attained &= sub.attained
            report.witnesses.extend(
                [f"l = {point}"] + sub.witnesses if sub.witnesses else [])
            report.failures.extend(sub.failures)
        return report

    tag = predicted.single
    rng = random.Random(seed)
    n = mdeg_total(f.mdeg())
    attain = _Attainment(tag)
    contained = True
    failures = []
    for _ in range(trials):
        assignment = {r: _random_element(rng) for r in range(1, n + 1)}
        value = eval_poly(alg, f, assignment)
        if not _in_predicted(tag, value):
            contained = False
            failures.append(_describe_assignment(assignment, value))
            if len(failures) >= 3:
                break
        attain.feed(value, _describe_assignment(assignment, value))
    return OracleReport(str(alg), format_poly(f), tag.value, trials,
                        contained, attain.done, attain.witnesses, failures)


def _describe_assignment(assignment, value: Element) -> str:
    from .scalars import coeff_str
    body = ", ".join(f"x{r} = ({coeff_str(e.a)})e1 + ({coeff_str(e.b)})e2"
                     for r, e in sorted(assignment.items()))
    return f"{body} -> ({coeff_str(value.a)})e1 + ({coeff_str(value.b)})e2"
