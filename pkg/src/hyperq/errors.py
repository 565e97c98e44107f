"""Exception types shared across the package."""


class HyperqError(Exception):
    """Base class for all errors raised by hyperq."""


class ValidationError(HyperqError):
    """A structure violates its invariants.

    Carries the full list of problems found, one human-readable string each.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class CongruenceError(ValidationError):
    """An equivalence fails compatibility with some operation."""

    def __init__(self, symbol, args_a, args_b):
        self.symbol = symbol
        self.args_a = tuple(args_a)
        self.args_b = tuple(args_b)
        super().__init__(
            "not a congruence: %s%r vs %s%r give unrelated results"
            % (symbol, self.args_a, symbol, self.args_b)
        )


class ParseError(HyperqError):
    """Formula or algebra text could not be parsed; carries a position."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)


class FormulaError(HyperqError):
    """A formula is used in a way its shape does not permit."""


class CloneLimitError(HyperqError):
    """Clone generation exceeded the configured operation budget."""

    def __init__(self, count, limit):
        self.count = count
        self.limit = limit
        super().__init__(
            "clone limit exceeded: %d operations found, limit %d" % (count, limit)
        )
