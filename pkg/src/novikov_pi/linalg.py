"""Exact sparse/dense linear algebra over Q and Q(l).

Vectors are dicts column-index -> nonzero coefficient.  Two incremental
echelon forms share one interface:

* :class:`Echelon` -- unit-pivot rows over plain rationals; fast because
  every coefficient operation is a single gmp rational op.
* :class:`PolyEchelon` -- for Q(l): rows hold polynomial tuples in l and
  reduction is fraction-free (cross-multiplication by the pivot's leading
  polynomial) with per-row content stripping, so no polynomial gcd runs
  inside the elimination inner loop.  Exact residues are recovered from the
  tracked running scale when coordinates (not just membership) are needed.

Column order is deterministic: smallest index first.  Inserted rows are
never mutated, so a shallow copy of the pivot table is an independent
echelon.
"""

from __future__ import annotations

from .errors import SpanFailure
from .scalars import (P_ONE, P_ZERO, Scalar, _pgcd, _pmul, _pneg, _psub,
                      make_scalar, rat)

SparseVec = dict


class Echelon:
    """Forward-eliminated row space with unit leading coefficients."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots: dict[int, SparseVec] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def clone(self) -> "Echelon":
        other = Echelon.__new__(Echelon)
        other.pivots = dict(self.pivots)
        return other

    def reduce(self, vec: SparseVec) -> SparseVec:
        """Eliminate vec (destructively) against the pivots; returns vec.

        The result is either empty or has a leading index that is not yet a
        pivot; entries keep their exact values.
        """
        pivots = self.pivots
        while vec:
            lead = min(vec)
            row = pivots.get(lead)
            if row is None:
                return vec
            c = vec[lead]
            for k, v in row.items():
                w = vec.get(k)
                nv = w - c * v if w is not None else -(c * v)
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
        return vec

    def reduce_exact(self, vec: SparseVec) -> SparseVec:
        return self.reduce(dict(vec))

    def insert(self, vec: SparseVec) -> bool:
        """Reduce a copy of vec and adjoin the residual; True if rank grew."""
        residual = self.reduce(dict(vec))
        if not residual:
            return False
        lead = min(residual)
        c = residual[lead]
        if c != 1:
            inv = 1 / c
            residual = {k: v * inv for k, v in residual.items()}
        self.pivots[lead] = residual
        return True

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(dict(vec))

    def pivot_vectors(self) -> list[SparseVec]:
        return list(self.pivots.values())


class PolyEchelon:
    """Fraction-free echelon over Q(l); rows map column -> polynomial tuple."""

    __slots__ = ("pivots",)

    #: strip the content of a working vector once entries reach this length
    _DEGREE_TRIGGER = 40

    def __init__(self):
        self.pivots: dict[int, SparseVec] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def clone(self) -> "PolyEchelon":
        other = PolyEchelon.__new__(PolyEchelon)
        other.pivots = dict(self.pivots)
        return other

    @staticmethod
    def _to_poly_vec(vec: SparseVec):
        """Clear denominators: (polynomial-tuple vector, common multiplier)."""
        lcm = P_ONE
        for c in vec.values():
            if isinstance(c, Scalar) and c.den != P_ONE:
                g = _pgcd(lcm, c.den)
                extra = c.den if len(g) == 1 else _pdiv_exact(c.den, g)
                lcm = _pmul(lcm, extra)
        out = {}
        for k, c in vec.items():
            if isinstance(c, Scalar):
                p = c.num if c.den == P_ONE else _pmul(c.num, _pdiv_exact(lcm, c.den))
            else:
                p = (rat(c),) if c else P_ZERO
                if p and lcm != P_ONE:
                    p = _pmul(p, lcm)
            if p:
                out[k] = p
        return out, lcm

    def _reduce_poly(self, vec: SparseVec, track_scale: bool):
        """Fraction-free reduction; optionally track the running scale.

        Invariant with tracking: (exact residual) = (scale_den/scale_num)*vec.
        """
        pivots = self.pivots
        scale_num, scale_den = P_ONE, P_ONE
        steps = 0
        while vec:
            lead = min(vec)
            row = pivots.get(lead)
            if row is None:
                break
            c = vec.pop(lead)
            lead_poly = row[lead]
            if len(lead_poly) > 1 or lead_poly[0] != 1:
                for k in vec:
                    vec[k] = _pmul(vec[k], lead_poly)
                if track_scale:
                    scale_num = _pmul(scale_num, lead_poly)
            for k, v in row.items():
                if k == lead:
                    continue
                delta = _pmul(c, v)
                w = vec.get(k)
                nv = _psub(w, delta) if w is not None else _pneg(delta)
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            steps += 1
            if steps % 16 == 0 and vec:
                if max(len(p) for p in vec.values()) > self._DEGREE_TRIGGER:
                    g = _content(vec)
                    if len(g) > 1:
                        for k in vec:
                            vec[k] = _pdiv_exact(vec[k], g)
                        if track_scale:
                            scale_den = _pmul(scale_den, g)
        return vec, scale_num, scale_den

    def insert(self, vec: SparseVec) -> bool:
        poly_vec, _ = self._to_poly_vec(vec)
        residual, _, _ = self._reduce_poly(poly_vec, False)
        if not residual:
            return False
        g = _content(residual)
        if len(g) > 1:
            residual = {k: _pdiv_exact(v, g) for k, v in residual.items()}
        lead = min(residual)
        top = residual[lead][-1]
        if top != 1:
            inv = 1 / top
            residual = {k: tuple(c * inv for c in v) for k, v in residual.items()}
        self.pivots[lead] = residual
        return True

    def contains(self, vec: SparseVec) -> bool:
        poly_vec, _ = self._to_poly_vec(vec)
        residual, _, _ = self._reduce_poly(poly_vec, False)
        return not residual

    def reduce_exact(self, vec: SparseVec) -> SparseVec:
        """Residue of vec modulo the row space, with exact Q(l) entries."""
        poly_vec, lcm = self._to_poly_vec(vec)
        residual, snum, sden = self._reduce_poly(poly_vec, True)
        denom = _pmul(snum, lcm)
        return {k: make_scalar(_pmul(v, sden), denom) for k, v in residual.items()}

    def pivot_vectors(self) -> list[SparseVec]:
        """Pivot rows with coefficients as scalar values (den = 1)."""
        return [{k: make_scalar(v) for k, v in row.items()}
                for row in self.pivots.values()]


def _content(vec: SparseVec) -> tuple:
    """Monic polynomial gcd of all entries of a polynomial vector."""
    g = P_ZERO
    for v in vec.values():
        g = _pgcd(g, v)
        if len(g) == 1:
            break
    return g


def _pdiv_exact(a: tuple, b: tuple) -> tuple:
    from .scalars import _pdivmod
    q, r = _pdivmod(a, b)
    if r:
        raise AssertionError("inexact polynomial division in content stripping")
    return q


# ---------------------------------------------------------------------------
# small exact solvers (scalar domain)
# ---------------------------------------------------------------------------

def solve_in_span(basis: list[SparseVec], target: SparseVec):
    """Coefficients c with target = sum c_i basis_i, or None if unsolvable.

    Requires the basis vectors to be linearly independent (raises
    SpanFailure otherwise); intended for small systems.
    """
    ech = Echelon()
    tracked: list[tuple[int, SparseVec]] = []
    for i, b in enumerate(basis):
        aug = dict(b)
        combo = {i: rat(1)}
        _reduce_tracked(ech, tracked, aug, combo)
        if not aug:
            raise SpanFailure("dependent basis passed to solve_in_span")
        lead = min(aug)
        inv = 1 / aug[lead]
        ech.pivots[lead] = {k: v * inv for k, v in aug.items()}
        tracked.append((lead, {k: v * inv for k, v in combo.items()}))
    aug = dict(target)
    combo: SparseVec = {}
    _reduce_tracked(ech, tracked, aug, combo)
    if aug:
        return None
    return {i: -c for i, c in combo.items()}


def _reduce_tracked(ech: Echelon, tracked, vec: SparseVec, combo: SparseVec):
    """Reduce vec against ech while accumulating the combination used."""
    pivots = ech.pivots
    lead_to_combo = dict(tracked)
    while vec:
        lead = min(vec)
        row = pivots.get(lead)
        if row is None:
            return
        c = vec[lead]
        for k, v in row.items():
            w = vec.get(k)
            nv = w - c * v if w is not None else -(c * v)
            if nv:
                vec[k] = nv
            else:
                vec.pop(k, None)
        for k, v in lead_to_combo[lead].items():
            w = combo.get(k)
            nv = w - c * v if w is not None else -(c * v)
            if nv:
                combo[k] = nv
            else:
                combo.pop(k, None)


def left_nullspace(rows: list[SparseVec]) -> list[SparseVec]:
    """Combinations (as dicts row-index -> coeff) with sum c_i rows_i = 0."""
    ech = Echelon()
    tracked: list[tuple[int, SparseVec]] = []
    out = []
    for i, r in enumerate(rows):
        aug = dict(r)
        combo = {i: rat(1)}
        _reduce_tracked(ech, tracked, aug, combo)
        if not aug:
            out.append(combo)
            continue
        lead = min(aug)
        inv = 1 / aug[lead]
        ech.pivots[lead] = {k: v * inv for k, v in aug.items()}
        tracked.append((lead, {k: v * inv for k, v in combo.items()}))
    return out
