"""Exception hierarchy shared by the whole package.

The CLI maps these onto exit codes: ParseError -> 1, PreconditionError
(and subclasses) -> 2, TheoryError -> 3.
"""


class SatFlipError(Exception):
    pass


class ParseError(SatFlipError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(SatFlipError):
    """An operation was called outside its contract (bad arity, cap
    exceeded, unsatisfying endpoint, wrong relation class, ...)."""


class FlipSequenceError(PreconditionError):
    """A flip sequence is invalid at its start state; `index` is the
    0-based position of the first offending flip."""

    def __init__(self, index, message):
        self.index = index
        super().__init__(f"flip {index + 1}: {message}")


class GenerationError(PreconditionError):
    """A randomized generator exhausted its retry budget."""


class TheoryError(SatFlipError):
    """An internal guarantee was violated; always a bug, never user error."""
