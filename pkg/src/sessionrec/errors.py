"""Exception hierarchy shared across the package."""


class SessionRecError(Exception):
    """Base class for all sessionrec errors."""


class DuplicateClassError(SessionRecError):
    pass


class UnknownClassError(SessionRecError):
    pass


class ClassConflictError(SessionRecError):
    """A kernel was addressed under two different classes."""


class KindMismatchError(SessionRecError):
    """A kernel id was used where an object id is required, or vice versa."""


class UnknownNodeError(SessionRecError, KeyError):
    def __init__(self, message, nodes=()):
        super().__init__(message)
        self.nodes = tuple(nodes)

    def __str__(self):
        # KeyError would repr() the message otherwise
        return self.args[0]


class UnknownObjectError(UnknownNodeError):
    pass


class UnknownKernelError(UnknownNodeError):
    pass


class GraphFrozenError(SessionRecError):
    """Mutation attempted on a frozen graph."""


class GraphNotFrozenError(SessionRecError):
    """Query attempted on a graph that is still mutable."""


class InvalidGraphError(SessionRecError):
    """Recommendation requested on a graph whose validation found violations."""


class MissingWeightsError(SessionRecError):
    pass


class EmptyPathwayError(SessionRecError):
    pass


class MissingColumnError(SessionRecError):
    pass


class RowRejectedError(SessionRecError):
    """Raised in strict mode when an input row cannot be ingested."""

    def __init__(self, line, reason):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class NoRecordsForAlgorithmError(SessionRecError):
    """The action log holds no record for the requested algorithm."""


class EmptyHandleListError(SessionRecError):
    pass
