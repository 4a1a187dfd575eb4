"""Exception hierarchy shared by every module."""


class PathGainError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PathGainError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


# galois
class NotPrime(InputError):
    pass


class ReducibleModulus(InputError):
    pass


class CardinalityTooLarge(InputError):
    pass


class FieldMismatch(PathGainError):
    pass


class DivisionByZero(PathGainError, ZeroDivisionError):
    pass


# network
class ParseError(InputError):
    pass


class CyclicGraph(InputError):
    pass


class DanglingDemand(InputError):
    pass


class DuplicateEdgeId(InputError):
    pass


# equations
class UnsatisfiableDemand(PathGainError):
    """A sink demands a source it has no path from."""

    def __init__(self, sink_index, source_index):
        super().__init__(
            f"sink #{sink_index} demands source #{source_index} but no path exists"
        )
        self.sink_index = sink_index
        self.source_index = source_index


# simplify
class BranchBudgetExceeded(PathGainError):
    def __init__(self, message, verdict):
        super().__init__(message)
        self.verdict = verdict


class InadmissibleCharacteristic(PathGainError):
    pass


class LiftInconsistency(PathGainError, AssertionError):
    pass


# solve
class BudgetExceeded(PathGainError):
    pass


# recover
class NotASolution(PathGainError):
    pass


class RankViolation(PathGainError):
    pass


# fuzz
class InfeasibleParams(InputError):
    pass
