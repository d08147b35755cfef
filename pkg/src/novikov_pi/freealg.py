"""Free nonassociative non-unital algebra on x1, x2, ...

Monomials are full binary trees with variable-indexed leaves, hash-consed so
that structural equality is object identity and trees can key dictionaries
cheaply.  Polynomials are finite scalar-weighted sums of monomials.  The
module also houses the text grammar (parser and canonical printer) shared
with the command line.

Monomial order (used everywhere a deterministic order matters): total degree,
then the leaf sequence lexicographically, then the tree shape encoded as a
balanced-parenthesis string.
"""

from __future__ import annotations

import math
import re
from itertools import product
from typing import Iterable, Mapping

from .config import DEFAULT_CAPS, Caps
from .errors import InvalidArgument, NotMultihomogeneous, ParseError, TooLarge
from .scalars import ELL, Scalar, coeff_str, is_rational, rat

# ---------------------------------------------------------------------------
# monomials
# ---------------------------------------------------------------------------

class Monomial:
    """Interned binary tree; leaves carry 1-based variable indices.

    Never construct directly: use :func:`leaf` and :func:`node`, which
    guarantee that structurally equal trees are the same object.  The
    interning tables are plain dicts guarded by the GIL (inserts go through
    ``setdefault``), so concurrent readers always observe a unique
    representative.
    """

    __slots__ = ("var", "left", "right", "degree",
                 "_mdeg", "_leaves", "_shape", "_skeleton", "_key")

    def __init__(self, var, left, right):
        self.var = var
        self.left = left
        self.right = right
        self.degree = 1 if var is not None else left.degree + right.degree
        self._mdeg = None
        self._leaves = None
        self._shape = None
        self._skeleton = None
        self._key = None

    @property
    def is_leaf(self) -> bool:
        return self.var is not None

    @property
    def leaves(self) -> tuple:
        """Leaf variable indices, left to right."""
        lv = self._leaves
        if lv is None:
            if self.var is not None:
                lv = (self.var,)
            else:
                lv = self.left.leaves + self.right.leaves
            self._leaves = lv
        return lv

    @property
    def shape(self) -> str:
        sh = self._shape
        if sh is None:
            if self.var is not None:
                sh = "x"
            else:
                sh = "(" + self.left.shape + self.right.shape + ")"
            self._shape = sh
        return sh

    @property
    def skeleton(self) -> "Monomial":
        """The same tree with every leaf relabeled to x1 (shape witness)."""
        sk = self._skeleton
        if sk is None:
            if self.var is not None:
                sk = _X1
            else:
                sk = node(self.left.skeleton, self.right.skeleton)
            self._skeleton = sk
        return sk

    @property
    def sort_key(self):
        k = self._key
        if k is None:
            k = (self.degree, self.leaves, self.shape)
            self._key = k
        return k

    def mdeg(self) -> tuple:
        md = self._mdeg
        if md is None:
            counts = [0] * max(self.leaves)
            for v in self.leaves:
                counts[v - 1] += 1
            md = tuple(counts)
            self._mdeg = md
        return md

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __repr__(self):
        return format_monomial(self)


_LEAF_CACHE: dict[int, Monomial] = {}
_NODE_CACHE: dict[tuple, Monomial] = {}


def leaf(index: int) -> Monomial:
    m = _LEAF_CACHE.get(index)
    if m is None:
        if not isinstance(index, int) or index < 1:
            raise InvalidArgument(f"variable index must be a positive int: {index!r}")
        m = _LEAF_CACHE.setdefault(index, Monomial(index, None, None))
    return m


def node(left: Monomial, right: Monomial) -> Monomial:
    key = (left, right)
    m = _NODE_CACHE.get(key)
    if m is None:
        m = _NODE_CACHE.setdefault(key, Monomial(None, left, right))
    return m


_X1 = leaf(1)


# ---------------------------------------------------------------------------
# multidegrees (plain int tuples; canonical form trims trailing zeros)
# ---------------------------------------------------------------------------

def mdeg_trim(delta: Iterable[int]) -> tuple:
    delta = list(delta)
    while delta and delta[-1] == 0:
        delta.pop()
    return tuple(delta)


def mdeg_add(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    return mdeg_trim(x + (b[i] if i < len(b) else 0) for i, x in enumerate(a))


def mdeg_sub(a: tuple, b: tuple):
    """Componentwise difference, or None if any entry would go negative."""
    if len(b) > len(a) and any(b[len(a):]):
        return None
    out = list(a)
    for i, x in enumerate(b):
        out[i] -= x
        if out[i] < 0:
            return None
    return mdeg_trim(out)


def mdeg_total(delta: tuple) -> int:
    return sum(delta)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Finite map monomial -> nonzero coefficient; the empty map is zero."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, object] | None = None):
        if terms:
            self.terms = {m: c for m, c in terms.items() if c}
        else:
            self.terms = {}
        self._hash = None

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def of(monomial: Monomial, coeff=1) -> "Poly":
        return Poly({monomial: rat(coeff) if isinstance(coeff, int) else coeff})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset((m.sort_key, c) for m, c in self.terms.items()))
            self._hash = h
        return h

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            nv = out.get(m, 0) + c
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
        p = Poly.__new__(Poly)
        p.terms = out
        p._hash = None
        return p

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            nv = out.get(m, 0) - c
            if nv:
                out[m] = nv
            else:
                out.pop(m, None)
        p = Poly.__new__(Poly)
        p.terms = out
        p._hash = None
        return p

    def __neg__(self):
        p = Poly.__new__(Poly)
        p.terms = {m: -c for m, c in self.terms.items()}
        p._hash = None
        return p

    def __mul__(self, other):
        if isinstance(other, Poly):
            out: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = node(m1, m2)
                    nv = out.get(m, 0) + c1 * c2
                    if nv:
                        out[m] = nv
                    else:
                        out.pop(m, None)
            p = Poly.__new__(Poly)
            p.terms = out
            p._hash = None
            return p
        if is_rational(other) or isinstance(other, Scalar):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if is_rational(other) or isinstance(other, Scalar):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "Poly":
        if not c:
            return Poly.zero()
        p = Poly.__new__(Poly)
        p.terms = {m: c * v for m, v in self.terms.items()}
        p._hash = None
        return p

    # -- structure ----------------------------------------------------------

    def mdeg(self) -> tuple:
        """Multidegree, if multihomogeneous; raises otherwise."""
        it = iter(self.terms)
        try:
            first = next(it).mdeg()
        except StopIteration:
            raise NotMultihomogeneous("the zero polynomial has no multidegree")
        for m in it:
            if m.mdeg() != first:
                raise NotMultihomogeneous(f"mixed multidegrees {first} and {m.mdeg()}")
        return first

    def is_multihomogeneous(self) -> bool:
        mds = {m.mdeg() for m in self.terms}
        return len(mds) <= 1

    def is_multilinear(self) -> bool:
        if not self.terms:
            return False
        try:
            md = self.mdeg()
        except NotMultihomogeneous:
            return False
        return all(d == 1 for d in md)

    def component(self, delta: Iterable[int]) -> "Poly":
        delta = mdeg_trim(delta)
        return Poly({m: c for m, c in self.terms.items() if m.mdeg() == delta})

    def components(self) -> dict[tuple, "Poly"]:
        out: dict[tuple, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(m.mdeg(), {})[m] = c
        return {d: Poly(t) for d, t in out.items()}

    def variables(self) -> tuple:
        seen = set()
        for m in self.terms:
            seen.update(m.leaves)
        return tuple(sorted(seen))

    def coeff_sum(self):
        total = rat(0)
        for c in self.terms.values():
            total = total + c
        return total

    def substitute(self, mapping: Mapping[int, "Poly"]) -> "Poly":
        """Image under the endomorphism sending xi to mapping[i] (identity
        on unmapped variables)."""
        memo: dict[Monomial, Poly] = {}

        def image(m: Monomial) -> Poly:
            got = memo.get(m)
            if got is None:
                if m.var is not None:
                    got = mapping.get(m.var) or Poly.of(m)
                else:
                    got = image(m.left) * image(m.right)
                memo[m] = got
            return got

        out = Poly.zero()
        for m, c in self.terms.items():
            out = out + image(m).scale(c)
        return out

    def leaf_substitute(self, mapping: Mapping[int, Monomial]) -> "Poly":
        """Fast path of :meth:`substitute` when every image is a monomial."""
        memo: dict[Monomial, Monomial] = {}

        def image(m: Monomial) -> Monomial:
            got = memo.get(m)
            if got is None:
                if m.var is not None:
                    got = mapping.get(m.var, m)
                else:
                    got = node(image(m.left), image(m.right))
                memo[m] = got
            return got

        out: dict = {}
        for m, c in self.terms.items():
            im = image(m)
            nv = out.get(im, 0) + c
            if nv:
                out[im] = nv
            else:
                out.pop(im, None)
        return Poly(out)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def var(index: int) -> Poly:
    return Poly.of(leaf(index))


def commutator(f: Poly, g: Poly) -> Poly:
    return f * g - g * f


def associator(f: Poly, g: Poly, h: Poly) -> Poly:
    return (f * g) * h - f * (g * h)


# ---------------------------------------------------------------------------
# named monomials: left/right bracket words, v and w families
# ---------------------------------------------------------------------------

def left_bracket(indices: Iterable[int]) -> Monomial:
    """(((x_{i1} x_{i2}) x_{i3}) ... ) x_{in} -- the left-normed convention."""
    indices = list(indices)
    if not indices:
        raise InvalidArgument("empty product")
    m = leaf(indices[0])
    for i in indices[1:]:
        m = node(m, leaf(i))
    return m


def right_bracket(indices: Iterable[int]) -> Monomial:
    """x_{i1} (x_{i2} ( ... (x_{in-1} x_{in}) ... ))."""
    indices = list(indices)
    if not indices:
        raise InvalidArgument("empty product")
    m = leaf(indices[-1])
    for i in reversed(indices[:-1]):
        m = node(leaf(i), m)
    return m


def v_mon(i: int, n: int) -> Monomial:
    """x_i x_1 ... x_{i-1} x_{i+1} ... x_n, left-normed."""
    if n < 1 or not 1 <= i <= n:
        raise InvalidArgument(f"v_mon requires 1 <= i <= n, got i={i}, n={n}")
    return left_bracket([i] + [j for j in range(1, n + 1) if j != i])


def w_mon(n: int) -> Monomial:
    """(x_1 (x_2 x_3)) x_4 ... x_n."""
    if n < 3:
        raise InvalidArgument(f"w_mon requires n >= 3, got n={n}")
    m = node(leaf(1), node(leaf(2), leaf(3)))
    for j in range(4, n + 1):
        m = node(m, leaf(j))
    return m


# ---------------------------------------------------------------------------
# enumeration of multidegree components
# ---------------------------------------------------------------------------

def catalan(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def count_monomials(delta: Iterable[int]) -> int:
    """Closed-form component size: multinomial(|delta|; delta) * Catalan."""
    delta = mdeg_trim(delta)
    total = mdeg_total(delta)
    if total < 1:
        raise InvalidArgument("multidegree must have positive total degree")
    count = math.factorial(total)
    for d in delta:
        count //= math.factorial(d)
    return count * catalan(total - 1)


def count_monomials_recursive(delta: Iterable[int]) -> int:
    """Independent count by structural recursion over root splits."""
    memo: dict[tuple, int] = {}

    def go(d: tuple) -> int:
        if mdeg_total(d) == 1:
            return 1
        got = memo.get(d)
        if got is None:
            got = 0
            for alpha in _proper_subdegrees(d):
                rest = mdeg_sub(d, alpha)
                got += go(alpha) * go(rest)
            memo[d] = got
        return got

    return go(mdeg_trim(delta))


def _proper_subdegrees(delta: tuple):
    """All alpha with 0 < alpha < delta componentwise-bounded, trimmed."""
    for alpha in product(*(range(d + 1) for d in delta)):
        if any(alpha) and alpha != delta:
            yield mdeg_trim(alpha)


_GEN_CACHE: dict[tuple, tuple] = {}


def _generate(delta: tuple) -> tuple:
    if mdeg_total(delta) == 1:
        return (leaf(delta.index(1) + 1),)
    got = _GEN_CACHE.get(delta)
    if got is None:
        out = []
        for alpha in _proper_subdegrees(delta):
            rest = mdeg_sub(delta, alpha)
            for l in _generate(alpha):
                for r in _generate(rest):
                    out.append(node(l, r))
        got = _GEN_CACHE.setdefault(delta, tuple(out))
    return got


def enumerate_monomials(delta: Iterable[int], caps: Caps = DEFAULT_CAPS) -> tuple:
    """All monomials of the given multidegree, in canonical order."""
    delta = mdeg_trim(delta)
    total = mdeg_total(delta)
    if total < 1:
        raise InvalidArgument("multidegree must have positive total degree")
    if total > caps.max_total_degree:
        raise TooLarge(f"|delta| = {total} exceeds cap {caps.max_total_degree}")
    if count_monomials(delta) > caps.max_component_size:
        raise TooLarge(f"component of {delta} exceeds cap {caps.max_component_size}")
    return tuple(sorted(_generate(delta), key=lambda m: m.sort_key))


_COMPONENT_CACHE: dict[tuple, tuple] = {}


def component_monomials(delta: Iterable[int], caps: Caps = DEFAULT_CAPS):
    """(ordered monomials, monomial -> position) for one component."""
    delta = mdeg_trim(delta)
    got = _COMPONENT_CACHE.get(delta)
    if got is None:
        mons = enumerate_monomials(delta, caps)
        got = _COMPONENT_CACHE.setdefault(delta, (mons, {m: i for i, m in enumerate(mons)}))
    return got


# ---------------------------------------------------------------------------
# text grammar: parser
# ---------------------------------------------------------------------------
#
#   poly   := term (('+' | '-') term)*
#   term   := unary (('*' | '/') unary)*
#   unary  := '-' unary | power
#   power  := atom ['^' NUM]
#   atom   := NUM | 'l' | 'x'<pos-int> | '(' poly ')'
#           | 'C(' poly ',' poly ')' | 'A(' poly ',' poly ',' poly ')'
#
# '*' associates left, implementing the left-normed product convention.
# '/', '^' and bare numbers live in the scalar sublanguage; a scalar is only
# a valid polynomial when it is zero (the free algebra is non-unital).

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z]\w*)|(\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        num, name, op = m.groups()
        start = m.end() - len(m.group().lstrip() or "")
        if num is not None:
            tokens.append(("num", int(num), start))
        elif name is not None:
            tokens.append(("name", name, start))
        else:
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


_VAR_RE = re.compile(r"x([1-9]\d*)$")


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.take()
        if kind != "op" or value != op:
            raise ParseError(f"expected {op!r}", pos)

    # values are Poly instances or scalar coefficients

    def parse_expr(self):
        value = self.parse_term()
        while True:
            kind, op, pos = self.peek()
            if kind == "op" and op in "+-":
                self.take()
                rhs = self.parse_term()
                value = self._combine_add(value, rhs, op, pos)
            else:
                return value

    def parse_term(self):
        value = self.parse_unary()
        while True:
            kind, op, pos = self.peek()
            if kind == "op" and op in "*/":
                self.take()
                rhs = self.parse_unary()
                value = self._combine_mul(value, rhs, op, pos)
            else:
                return value

    def parse_unary(self):
        kind, op, _ = self.peek()
        if kind == "op" and op == "-":
            self.take()
            value = self.parse_unary()
            return -value
        return self.parse_power()

    def parse_power(self):
        value = self.parse_atom()
        kind, op, pos = self.peek()
        if kind == "op" and op == "^":
            self.take()
            kind, exp, epos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer", epos)
            if isinstance(value, Poly):
                raise ParseError("'^' applies to scalars only", pos)
            value = value ** exp
        return value

    def parse_atom(self):
        kind, value, pos = self.take()
        if kind == "num":
            return rat(value)
        if kind == "name":
            if value == "l":
                return ELL
            m = _VAR_RE.match(value)
            if m:
                return var(int(m.group(1)))
            if value in ("C", "A"):
                self.expect_op("(")
                args = [self.parse_expr()]
                arity = 2 if value == "C" else 3
                for _ in range(arity - 1):
                    self.expect_op(",")
                    args.append(self.parse_expr())
                self.expect_op(")")
                for a in args:
                    if not isinstance(a, Poly):
                        raise ParseError(f"{value}(...) needs polynomial arguments", pos)
                return commutator(*args) if value == "C" else associator(*args)
            raise ParseError(f"unknown symbol {value!r}", pos)
        if kind == "op" and value == "(":
            inner = self.parse_expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected {value!r}" if value else "unexpected end of input", pos)

    @staticmethod
    def _combine_add(a, b, op: str, pos: int):
        a_poly, b_poly = isinstance(a, Poly), isinstance(b, Poly)
        if a_poly != b_poly:
            # adding a nonzero constant to a polynomial leaves the algebra
            if a_poly and not b:
                return a
            if b_poly and not a:
                return b if op == "+" else -b
            raise ParseError("cannot add a scalar and a polynomial", pos)
        return a + b if op == "+" else a - b

    @staticmethod
    def _combine_mul(a, b, op: str, pos: int):
        if op == "/":
            if isinstance(a, Poly) or isinstance(b, Poly):
                raise ParseError("'/' applies to scalars only", pos)
            if not b:
                raise ParseError("division by zero in scalar", pos)
            return a / b
        if isinstance(a, Poly) and isinstance(b, Poly):
            return a * b
        return a * b  # scalar * poly, poly * scalar, scalar * scalar


def parse_poly(text: str) -> Poly:
    p = _Parser(text)
    value = p.parse_expr()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {tok!r}", pos)
    if isinstance(value, Poly):
        return value
    if not value:
        return Poly.zero()
    raise ParseError("a nonzero constant is not an element of the non-unital free algebra", 0)


def parse_scalar(text: str):
    p = _Parser(text)
    value = p.parse_expr()
    kind, tok, pos = p.peek()
    if kind != "end":
        raise ParseError(f"trailing input {tok!r}", pos)
    if isinstance(value, Poly):
        raise ParseError("expected a scalar, found a polynomial", 0)
    return value


# ---------------------------------------------------------------------------
# text grammar: canonical printer (round-trips through parse_poly)
# ---------------------------------------------------------------------------

def format_monomial(m: Monomial) -> str:
    spine = []
    while m.var is None:
        spine.append(m.right)
        m = m.left
    spine.append(m)
    parts = []
    for factor in reversed(spine):
        if factor.var is not None:
            parts.append(f"x{factor.var}")
        else:
            parts.append(f"({format_monomial(factor)})")
    return "*".join(parts)


def format_poly(f: Poly) -> str:
    if not f:
        return "0"
    pieces = []
    for m, c in sorted(f.terms.items(), key=lambda item: item[0].sort_key):
        mon = format_monomial(m)
        if isinstance(c, Scalar):
            sign, body = "+", f"({c})*{mon}"
        elif c == 1:
            sign, body = "+", mon
        elif c == -1:
            sign, body = "-", mon
        elif c > 0:
            sign, body = "+", f"{c}*{mon}"
        else:
            sign, body = "-", f"{-c}*{mon}"
        pieces.append((sign, body))
    sign, body = pieces[0]
    text = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text
