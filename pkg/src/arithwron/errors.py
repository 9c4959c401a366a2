"""Exception types shared across the package."""


class ArithWronError(Exception):
    """Base class for library errors."""


class NotPrimeError(ArithWronError, ValueError):
    def __init__(self, p):
        super().__init__(f"{p} is not prime")
        self.p = p


class ScalarZeroDivision(ArithWronError, ZeroDivisionError):
    """Division by the zero scalar, or a denominator that evaluates to zero."""


class MissingSymbol(ArithWronError, KeyError):
    def __init__(self, p):
        super().__init__(f"assignment has no value for L{p}")
        self.p = p


class ScalarParseError(ArithWronError, ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


class PrecisionExhausted(ArithWronError):
    """An operation would leave no known coefficients."""


class NonUnit(ArithWronError, ZeroDivisionError):
    """Inversion of an arithmetic function with f(1) == 0."""


class NonSmoothSupport(ArithWronError, ValueError):
    def __init__(self, n: int, primes):
        super().__init__(
            f"index {n} has a prime factor outside {{{', '.join(map(str, primes))}}}"
        )
        self.n = n


class UncertifiedNonzero(ArithWronError, ZeroDivisionError):
    """A value required to be nonzero vanishes throughout its known window."""


class NonAdmissibleTuple(ArithWronError, ValueError):
    pass


class DerivationSyntaxError(ArithWronError, ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        super().__init__(f"{msg} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos
