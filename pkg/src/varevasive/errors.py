"""Exception hierarchy shared by every module."""


class EvasiveError(Exception):
    """Base class for all errors raised by varevasive."""


class InvalidParameters(EvasiveError, ValueError):
    pass


class NonPrimeModulus(InvalidParameters):
    pass


class UnsupportedSize(InvalidParameters):
    pass


class FieldTooSmall(InvalidParameters):
    pass


class InsufficientInvertibleExponents(InvalidParameters):
    pass


class DivisionByZero(EvasiveError, ZeroDivisionError):
    pass


class SingularMatrix(EvasiveError, ArithmeticError):
    pass


class NotAMember(EvasiveError, ValueError):
    pass


class WorkBudgetExceeded(EvasiveError, RuntimeError):
    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: needs {needed} units of work, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget
