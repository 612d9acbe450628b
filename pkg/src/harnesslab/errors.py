"""Exception types raised by harnesslab."""


class HarnessError(Exception):
    """Base class for all library errors."""


class InadmissibleParams(HarnessError, ValueError):
    pass


class DegenerateTimes(HarnessError, ValueError):
    pass


class ZeroDenominator(HarnessError, ZeroDivisionError):
    """u(1 + sigma*s) + tau - q*s vanished for the requested times."""


class ZeroF(HarnessError, ZeroDivisionError):
    pass


class DegenerateDenominator(HarnessError, ZeroDivisionError):
    def __init__(self, n, what="lambda"):
        super().__init__(f"{what} vanishes at n={n}")
        self.n = n


class RepeatedRoot(HarnessError, ValueError):
    pass


class FamilyMismatch(HarnessError, ValueError):
    pass


class PositivityViolated(HarnessError, ValueError):
    def __init__(self, n, value=None):
        msg = f"positivity fails at n={n}"
        if value is not None:
            msg += f" (value {value})"
        super().__init__(msg)
        self.n = n
        self.value = value


class TruncationExceeded(HarnessError, IndexError):
    pass


class NotBanded(HarnessError, ValueError):
    pass


class NotSymmetrizable(HarnessError, ValueError):
    def __init__(self, n, value=None):
        super().__init__(f"a_{n - 1}(t) * c_{n}(t) = {value} is not positive")
        self.n = n
        self.value = value


class EigenFailure(HarnessError, ArithmeticError):
    pass
