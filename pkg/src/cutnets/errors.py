"""Exception types shared across the package."""


class CutnetsError(Exception):
    """Base class for all library errors."""


# --- graph surgery -----------------------------------------------------------

class UnknownEdge(CutnetsError):
    pass


class NotDegreeTwo(CutnetsError):
    pass


class WouldCreateParallelEdge(CutnetsError):
    """A reduction asked for an edge that already exists; networks stay simple."""


class IsCutEdge(CutnetsError):
    pass


class EndpointIsLeaf(CutnetsError):
    pass


class NotCutEdge(CutnetsError):
    pass


class LabelSetMismatch(CutnetsError):
    pass


# --- recognition and budgets -------------------------------------------------

class InvalidQ(CutnetsError):
    pass


class TooLarge(CutnetsError):
    """Input exceeds the configured budget of a desk-scale operation."""


class BudgetExceeded(CutnetsError):
    """An exhaustive search ran out of its node budget before deciding."""


# --- orientations ------------------------------------------------------------

class DegreeViolation(CutnetsError):
    def __init__(self, vertex, message=None):
        super().__init__(message or f"vertex {vertex} violates the degree rules")
        self.vertex = vertex


class CyclicOrientation(CutnetsError):
    def __init__(self, cycle, message=None):
        super().__init__(message or f"orientation contains the directed cycle {list(cycle)}")
        self.cycle = tuple(cycle)


class NotTwoCuttable(CutnetsError):
    pass


class NotReducible(CutnetsError):
    pass


# --- SAT gadgetry ------------------------------------------------------------

class NotTwoBalanced(CutnetsError):
    pass


class UnsatisfiedAssignment(CutnetsError):
    pass


class InconsistentGadgetState(CutnetsError):
    pass


class NotTreeChild(CutnetsError):
    pass


class InvalidN(CutnetsError):
    pass


# --- tree containment --------------------------------------------------------

class TrivialCutEdge(CutnetsError):
    pass


class NoMatchingTreeEdge(CutnetsError):
    pass


class NotSimple(CutnetsError):
    pass


class NotThreeCuttable(CutnetsError):
    pass


class TooFewLeaves(CutnetsError):
    pass


# --- parsing -----------------------------------------------------------------

class ParseError(CutnetsError):
    """Syntax error with a 1-based line/column position."""

    def __init__(self, message, line=None, col=None):
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line = line
        self.col = col


class ClauseArityError(ParseError):
    pass


class NotBinary(ParseError):
    pass


class DegreeError(CutnetsError):
    pass


class CycleError(CutnetsError):
    pass


class ValidationError(CutnetsError):
    """The file was well formed but describes an invalid network."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = tuple(violations)
