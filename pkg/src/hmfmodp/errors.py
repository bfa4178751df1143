"""Shared exception types.

The distinction matters for the CLI exit-code contract:
precision exhaustion (exit 2) is recoverable by rerunning with a larger
coefficient bound, falsification (exit 3) means a verified algebraic
identity failed and the computation must not be trusted.
"""


class PrecisionError(Exception):
    """A coefficient beyond the stored precision was needed."""


class FalsificationError(Exception):
    """An identity that must hold exactly failed; carries a witness."""

    def __init__(self, stage: str, witness):
        self.stage = stage
        self.witness = witness
        super().__init__(f"{stage}: {witness}")


class NeedsExtension(Exception):
    """The requested value lives in a proper extension of the coefficient field."""

    def __init__(self, required_degree: int):
        self.required_degree = required_degree
        super().__init__(f"requires extension of degree {required_degree}")


class NotAnEigenform(Exception):
    """Proportionality check failed; carries the witnessing coordinate."""

    def __init__(self, prime, index, left, right):
        self.prime = prime
        self.index = index
        self.left = left
        self.right = right
        super().__init__(
            f"not an eigenform at {prime}: coordinate {index} gives {left} != {right}"
        )
