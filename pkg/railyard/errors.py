"""Exception hierarchy shared by the library and the command line front end."""

from __future__ import annotations


class RailYardError(Exception):
    """Base class for every error raised by :mod:`railyard`."""


class SpecError(RailYardError, ValueError):
    """Malformed graph data (sequence lengths, letters, signs, weights)."""


class ConvergenceError(SpecError):
    """A same-letter ``(+, -)`` pair has ``x_i * x_j >= 1``.

    The partition function diverges for such a pair, so the offending
    indices and their product are kept for reporting.
    """

    def __init__(self, i: object, j: object, product: float):
        self.i = i
        self.j = j
        self.product = product
        super().__init__(
            f"convergence guard violated for pair (i={i}, j={j}): "
            f"x_i * x_j = {product:.17g} >= 1"
        )


class ConfigError(RailYardError, ValueError):
    """Invalid experiment configuration document."""


class TruncationError(RailYardError):
    """Fock-space truncation cannot represent the requested boundary."""


class SingularPointError(RailYardError, ZeroDivisionError):
    """Evaluation requested at a pole of a rational function."""


class RootFindingError(RailYardError, ArithmeticError):
    """Newton polish, bracketing or root continuation failed."""


class BranchError(RailYardError):
    """No admissible branch or curve samples were found."""


class VerificationError(RailYardError):
    """An oracle check of the verification suite failed."""
