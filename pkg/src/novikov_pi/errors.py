"""Exception types shared across the package."""


class NovikovError(Exception):
    """Base class for all library errors."""


class DivisionByZero(NovikovError, ZeroDivisionError):
    """Division by the zero scalar."""


class PoleError(NovikovError):
    """Specialization of a rational function at a pole of its denominator."""


class ExcludedParameter(NovikovError):
    """Parameter value outside the admissible range (l in {0, 1})."""


class DegreeOverflow(NovikovError):
    """Scalar numerator/denominator degree exceeded the configured bound."""


class InvalidArgument(NovikovError, ValueError):
    """Argument outside the documented domain of an operation."""


class NotMultihomogeneous(NovikovError, ValueError):
    """Operation requires a multihomogeneous polynomial."""


class NotMultilinear(NovikovError, ValueError):
    """Operation requires a multilinear polynomial."""


class TooLarge(NovikovError):
    """A computation exceeded the configured enumeration caps."""


class MissingAssignment(NovikovError, KeyError):
    """Evaluation hit a variable without an assigned algebra element."""


class SpanFailure(NovikovError):
    """Normal-form system inconsistent: wrong basis/ideal pairing or a bug."""


class ParseError(NovikovError, ValueError):
    """Syntax error in polynomial or scalar text, with input position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos
