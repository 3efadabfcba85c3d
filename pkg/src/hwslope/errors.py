"""Exception hierarchy shared by every module of the package."""


class HWSlopeError(ValueError):
    """Base class for all validation and domain errors raised here."""


class PolygonError(HWSlopeError):
    pass


class TotalMassOdd(PolygonError):
    pass


class SymmetryViolation(PolygonError):
    pass


class DenominatorViolation(PolygonError):
    pass


class SlopeOutOfRange(PolygonError):
    pass


class BoundExceeded(HWSlopeError):
    pass


class WedgeDegreeOutOfRange(HWSlopeError):
    pass


class EmptyMultiset(HWSlopeError):
    pass


class WeilError(HWSlopeError):
    pass


class NotMonic(WeilError):
    pass


class OddDegree(WeilError):
    pass


class FunctionalEquationFailed(WeilError):
    pass


class AsymmetricPolygon(WeilError):
    pass


class ZeroConstantTerm(WeilError):
    pass


class NotPrime(WeilError):
    pass


class CurveError(HWSlopeError):
    pass


class ZeroDiscriminant(CurveError):
    pass


class BadPrime(CurveError):
    pass


class SmallPrime(CurveError):
    pass


class EvenPrime(CurveError):
    pass


class HasseViolation(CurveError):
    """A computed trace broke the Hasse-Weil bound; the point count is wrong."""


class NonIntegralCoefficient(CurveError):
    """s1^2 - s2 was odd; the point counts are inconsistent."""


class ParseError(HWSlopeError):
    def __init__(self, message, text=None, position=None, line=None):
        self.text = text
        self.position = position
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"position {position}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
