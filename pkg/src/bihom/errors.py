"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class BihomError(Exception):
    """Base class for all errors raised by :mod:`bihom`."""


class FieldMismatch(BihomError):
    pass


class DivisionByZero(BihomError, ZeroDivisionError):
    pass


class ParseError(BihomError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class InvariantViolation(BihomError):
    pass


class DimMismatch(BihomError):
    pass


class Singular(BihomError):
    """A map that must be bijective is not invertible."""

    def __init__(self, name: str = "matrix"):
        self.name = name
        super().__init__(f"{name} not invertible")


class MissingComponent(BihomError):
    pass


class NonCommutingMaps(BihomError):
    pass


class NotAMorphism(BihomError):
    pass


class HypothesisFailed(BihomError):
    """A hypothesis of a construction does not hold; ``report`` carries witnesses."""

    def __init__(self, hypothesis: str, report=None):
        self.hypothesis = hypothesis
        self.report = report
        msg = f"hypothesis failed: {hypothesis}"
        if report is not None and report.violations:
            msg += f" ({report.violations[0].describe()})"
        super().__init__(msg)


class ConclusionFailed(BihomError):
    """Verify mode found the constructed object violating the theorem's conclusion."""

    def __init__(self, theorem: str, report):
        self.theorem = theorem
        self.report = report
        super().__init__(f"{theorem}: conclusion failed ({len(report.violations)} violations)")


class InvarianceFailed(BihomError):
    def __init__(self, map_name: str):
        self.map_name = map_name
        super().__init__(f"r is not invariant under {map_name} (x) {map_name}")


class CentralityFailed(BihomError):
    def __init__(self, report=None):
        self.report = report
        super().__init__("A(r) is not central: a.A(r) != A(r).a for some basis a")


class AybeFailed(BihomError):
    def __init__(self, report=None):
        self.report = report
        super().__init__("r does not satisfy the associative BiHom-Yang-Baxter equation")


class SpaceTooLarge(BihomError):
    pass
