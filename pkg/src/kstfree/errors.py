"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries the code it
should produce.
"""


class KstError(Exception):
    exit_code = 2


class BadParameters(KstError, ValueError):
    pass


class NotPrime(BadParameters):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class DegreeZero(BadParameters):
    def __init__(self):
        super().__init__("extension degree must be >= 1")


class FieldTooLarge(BadParameters):
    def __init__(self, p, m, limit):
        super().__init__(f"field of order {p}^{m} exceeds table limit {limit}")


class NotDivisor(BadParameters):
    def __init__(self, h, n):
        super().__init__(f"{h} does not divide {n}")
        self.h = h
        self.n = n


class NoPrimeInRange(BadParameters):
    def __init__(self, h, lo, hi):
        super().__init__(f"no prime p = 1 (mod {h}) in [{lo}, {hi}]")


class DuplicateShift(BadParameters):
    pass


class BadArity(BadParameters):
    pass


class VertexOutOfRange(BadParameters):
    pass


class PartiteViolation(BadParameters):
    pass


class PatternTooLarge(BadParameters):
    pass


class EmptyAfterPrune(KstError):
    """Pruning removed every edge, so the sampling mass p is zero."""

    exit_code = 1


class BudgetExceeded(KstError):
    exit_code = 4

    def __init__(self, needed, budget):
        super().__init__(f"work estimate {needed} exceeds budget {budget}")
        self.needed = needed
        self.budget = budget


class FormatError(KstError):
    """Malformed input file; ``line`` is 1-based."""

    exit_code = 3

    def __init__(self, message, line=None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}: "
        elif where:
            where += " "
        super().__init__(where + message)
        self.line = line
        self.path = path


class InternalError(KstError, RuntimeError):
    exit_code = 70
