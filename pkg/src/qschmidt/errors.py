"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid caller-supplied data: malformed expressions, bad dimensions,
    matrices violating a documented precondition.

    ``position`` is a 0-based offset into the offending source text when the
    error came out of the expression parser, else ``None``.
    """

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class KetParseError(InputError):
    """Lexical or syntax error in a bra-ket expression."""


class ConsistencyError(RuntimeError):
    """Two computation routes that must agree numerically did not.

    ``context`` holds the diverging intermediate results for diagnosis.
    """

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context
