"""Exact scalar arithmetic over Q and over the rational-function field Q(l).

Two kinds of values flow through the package:

* plain rationals -- ``fractions.Fraction``, transparently replaced by
  ``gmpy2.mpq`` when gmpy2 is importable (identical semantics, much faster);
* ``Scalar`` -- a reduced fraction of univariate polynomials in the reserved
  symbol ``l``, with monic denominator.

``Scalar`` arithmetic *demotes* constant results back to plain rationals, so
a ``Scalar`` instance always genuinely involves ``l``.  This keeps the bulk
of the linear algebra (everything except the one-parameter algebra) on fast
rational arithmetic while mixed expressions still combine through the usual
operators.

Univariate polynomials are represented as tuples of rationals, constant term
first, no trailing zeros; ``()`` is the zero polynomial.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegreeOverflow, DivisionByZero, InvalidArgument, PoleError

try:
    from gmpy2 import mpq as _RAT
except ImportError:  # pragma: no cover - gmpy2 is an optional speedup
    _RAT = Fraction

RAT_KINDS = (int, Fraction) if _RAT is Fraction else (int, Fraction, type(_RAT(1)))

#: degree bound for Scalar numerators/denominators; exceeding it raises
#: DegreeOverflow to surface runaway computations early
SCALAR_DEGREE_CAP = 64


def rat(num, den=1):
    """Exact rational from ints, a rational, or a string like ``-7/2``."""
    return _RAT(num, den) if den != 1 else _RAT(num)


ZERO = rat(0)
ONE = rat(1)


def is_rational(value) -> bool:
    return isinstance(value, RAT_KINDS)


# ---------------------------------------------------------------------------
# univariate polynomial helpers (coefficient tuples, low degree first)
# ---------------------------------------------------------------------------

P_ZERO: tuple = ()
P_ONE = (ONE,)


def _ptrim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _ptrim(out)


def _pneg(a):
    return tuple(-c for c in a)


def _psub(a, b):
    return _padd(a, _pneg(b))


def _pmul(a, b):
    if not a or not b:
        return P_ZERO
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if not ca:
            continue
        for j, cb in enumerate(b):
            if cb:
                out[i + j] = out[i + j] + ca * cb
    return _ptrim(out)


def _pscale(a, c):
    if not c:
        return P_ZERO
    return tuple(x * c for x in a)


def _pdivmod(a, b):
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    inv_lead = ONE / b[-1]
    while len(r) >= len(b):
        c = r[-1] * inv_lead
        k = len(r) - len(b)
        q[k] = c
        for i, cb in enumerate(b):
            r[k + i] = r[k + i] - c * cb
        while r and not r[-1]:
            r.pop()
    return _ptrim(q), _ptrim(r)


def _pgcd(a, b):
    """Monic gcd via the Euclidean algorithm (coefficients are exact)."""
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if not a:
        return P_ZERO
    return _pscale(a, ONE / a[-1])


def _peval(a, v):
    acc = ZERO
    for c in reversed(a):
        acc = acc * v + c
    return acc


def _pstr(a) -> str:
    if not a:
        return "0"
    parts = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        if k == 0:
            body = str(abs(c))
        else:
            mag = abs(c)
            head = "" if mag == 1 else f"{mag}*"
            body = f"{head}l" if k == 1 else f"{head}l^{k}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Scalar: reduced ratio of polynomials in l, monic denominator
# ---------------------------------------------------------------------------

class Scalar:
    """Element of Q(l).  Immutable, canonical, hashable.

    Canonical form: gcd(num, den) = 1, den monic and nonzero.  Construction
    through :func:`make_scalar` (or any arithmetic) demotes constants to
    plain rationals, so live ``Scalar`` objects always have a nontrivial
    dependence on ``l``.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=P_ONE):
        num = _ptrim(num)
        den = _ptrim(den)
        if not den:
            raise DivisionByZero("zero denominator in Q(l)")
        if num:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
            lead = den[-1]
            if lead != 1:
                inv = ONE / lead
                num = _pscale(num, inv)
                den = _pscale(den, inv)
        else:
            den = P_ONE
        if max(len(num), len(den)) - 1 > SCALAR_DEGREE_CAP:
            raise DegreeOverflow(
                f"scalar degree exceeds cap {SCALAR_DEGREE_CAP}"
            )
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("Scalar is immutable")

    # -- classification ----------------------------------------------------

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and self.den == P_ONE

    def as_rational(self):
        if not self.is_constant():
            raise InvalidArgument(f"{self} is not a constant")
        return self.num[0] if self.num else ZERO

    def degree_pair(self) -> tuple[int, int]:
        return (len(self.num) - 1, len(self.den) - 1)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(value):
        if isinstance(value, Scalar):
            return value
        if is_rational(value):
            return Scalar((rat(value),) if value else P_ZERO)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        num = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return make_scalar(num, _pmul(self.den, o.den))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        num = _psub(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return make_scalar(num, _pmul(self.den, o.den))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return make_scalar(_pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.num:
            raise DivisionByZero("division by zero scalar")
        return make_scalar(_pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            if not self.num:
                raise DivisionByZero("zero scalar to a negative power")
            return make_scalar(self.den, self.num) ** (-exponent)
        num, den = P_ONE, P_ONE
        for _ in range(exponent):
            num = _pmul(num, self.num)
            den = _pmul(den, self.den)
        return make_scalar(num, den)

    def __neg__(self):
        return Scalar(_pneg(self.num), self.den)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.num == other.num and self.den == other.den
        if is_rational(other):
            return self.is_constant() and self.as_rational() == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.num, self.den))
            object.__setattr__(self, "_hash", h)
        return h

    # -- presentation --------------------------------------------------------

    def __str__(self):
        if self.den == P_ONE:
            return _pstr(self.num)
        return f"({_pstr(self.num)})/({_pstr(self.den)})"

    def __repr__(self):
        return f"Scalar({self})"


def make_scalar(num, den=P_ONE):
    """Build a canonical Q(l) value, demoting constants to plain rationals."""
    s = Scalar(num, den)
    if s.is_constant():
        return s.as_rational()
    return s


ELL = Scalar((ZERO, ONE))


def specialize(value, point):
    """Evaluate a scalar at l = point.  Exact; raises PoleError on poles."""
    if is_rational(value):
        return rat(value)
    if not isinstance(value, Scalar):
        raise InvalidArgument(f"not a scalar: {value!r}")
    point = rat(point)
    den = _peval(value.den, point)
    if not den:
        raise PoleError(f"pole of {value} at l = {point}")
    return _peval(value.num, point) / den


def scalar_arith(a, b, op: str):
    """Named-operation façade over the scalar operators (add/sub/mul/div)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero("scalar division by zero")
        return a / b
    raise InvalidArgument(f"unknown scalar operation {op!r}")


def coeff_str(value) -> str:
    """Text form of a coefficient in the shared scalar grammar."""
    return str(value) if isinstance(value, Scalar) else str(rat(value))


def numerator_poly(value) -> tuple:
    """Numerator of a coefficient as a polynomial tuple over Q."""
    if isinstance(value, Scalar):
        return value.num
    v = rat(value)
    return (v,) if v else P_ZERO


def rational_roots(coeffs) -> list:
    """All rational roots of a nonzero polynomial tuple, ascending."""
    coeffs = _ptrim(coeffs)
    if not coeffs:
        raise InvalidArgument("zero polynomial has every root")
    roots = []
    if not coeffs[0]:
        roots.append(ZERO)
        first = next(i for i, c in enumerate(coeffs) if c)
        coeffs = coeffs[first:]
    if len(coeffs) == 1:
        return roots
    scale = 1
    for c in coeffs:
        scale = scale * rat(c).denominator // _int_gcd(scale, rat(c).denominator)
    ints = [int(c * scale) for c in coeffs]
    lead, const = ints[-1], ints[0]
    for p in _divisors(abs(const)):
        for q in _divisors(abs(lead)):
            for cand in (rat(p, q), rat(-p, q)):
                if cand not in roots and not _peval(coeffs, cand):
                    roots.append(cand)
    return sorted(roots)


def _int_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)
