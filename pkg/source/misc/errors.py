""" Error types raised across the synthesis flow.

User-facing validation raises one of these; internal invariants use assertions.
"""

from typing import Optional


class SynthesisError(Exception):
    """ Base class of every error raised by the library. """


class NotBijective(SynthesisError, ValueError):
    """ An image table repeats a value or leaves the value range. """


class LengthMismatch(SynthesisError, ValueError):
    """ An image table does not hold exactly 2^n entries. """


class CapExceeded(SynthesisError):
    """ A bit-width is above the configured cap for full-table work. """

    def __init__(self, n: int, cap: int):
        super().__init__(f'{n} lines exceed the configured cap of {cap}')
        self.n = n
        self.cap = cap


class DomainError(SynthesisError, ValueError):
    """ An argument is outside the domain of a formula or construction. """


class TooLarge(SynthesisError):
    """ An exhaustive search was asked for an instance above its guard. """


class RoutingFailed(SynthesisError):
    """ Routing could not place every source. """


class Infeasible(SynthesisError):
    """ No perfect cover exists for a pairing class. """


class OrderViolation(SynthesisError):
    """ A schedule does not reproduce the product of its input cycles. """


class OddPermutation(SynthesisError):
    """ An odd permutation was given while line extension is disabled. """


class VerificationFailed(SynthesisError):
    """ A synthesized circuit does not simulate to its target permutation. """


class ParseError(SynthesisError, ValueError):
    """ Malformed text input, with the 1-based position of the problem. """

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            position = f'line {line}' if column is None else f'line {line}, column {column}'
            message = f'{position}: {message}'
        super().__init__(message)


class UnknownVariable(ParseError):
    """ A netlist gate names a line missing from `.variables`. """
